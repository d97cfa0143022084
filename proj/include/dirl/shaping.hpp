#pragma once

#include <span>

#include "dirl/graph.hpp"

namespace dirl {

/// Per-rollout shaped-reward state for one edge u -> u'.
class ShapingMonitor {
 public:
  ShapingMonitor(Predicate target, SafeSet safe) : target_(std::move(target)), safe_(std::move(safe)) {}
  ShapingMonitor(const AbstractGraph& g, EdgeId e) : ShapingMonitor(g.beta(g.edge(e).to), g.edge(e).safe) {}

  /// R_step(s, a, s') = R_reach + R_safe. Updates psi with s first.
  double step_reward(const State& s, const Action& a, const State& next);

  /// Reward terms of the last call.
  double last_reach() const { return last_reach_; }
  double last_safe() const { return last_safe_; }

  bool psi() const { return psi_; }
  const Predicate& target() const { return target_; }
  const SafeSet& safe() const { return safe_; }

 private:
  Predicate target_;
  SafeSet safe_;
  bool psi_ = true;
  double last_reach_ = 0.0;
  double last_safe_ = 0.0;
};

/// 1(zeta |= e) as 0/1.
int sparse_reward(std::span<const State> states, EdgeId e, const AbstractGraph& g);
int sparse_reward(const Trajectory& zeta, EdgeId e, const AbstractGraph& g);

}  // namespace dirl
