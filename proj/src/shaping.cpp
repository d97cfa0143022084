#include "dirl/shaping.hpp"

#include <algorithm>

namespace dirl {

double ShapingMonitor::step_reward(const State& s, const Action& /*a*/, const State& next) {
  psi_ = psi_ && safe_.first().holds(s);
  last_reach_ = target_.quant(next);
  double safety = 0.0;
  if (safe_.kind() == SafeSet::Kind::Always) {
    safety = safe_.first().quant(next);
  } else if (psi_) {
    safety = std::max(safe_.first().quant(next), safe_.second().quant(next));
  } else {
    safety = safe_.second().quant(next);
  }
  last_safe_ = std::min(0.0, safety);
  return last_reach_ + last_safe_;
}

int sparse_reward(std::span<const State> states, EdgeId e, const AbstractGraph& g) {
  return achieves_edge(states, e, g).has_value() ? 1 : 0;
}

int sparse_reward(const Trajectory& zeta, EdgeId e, const AbstractGraph& g) {
  return sparse_reward(zeta.states, e, g);
}

}  // namespace dirl
