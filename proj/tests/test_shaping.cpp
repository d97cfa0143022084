#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "dirl/shaping.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace dirl;

namespace {

const RoomsEnv& env9() {
  static const RoomsEnv env(*preset_layout("rooms9"));
  return env;
}

const PredicateRegistry& reg() {
  static const PredicateRegistry r = env9().predicates();
  return r;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"')
      quoted = !quoted;
    else if (c == ',' && !quoted)
      out.emplace_back();
    else
      out.back() += c;
  }
  return out;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

TEST_CASE("shaped reward golden table") {
  std::ifstream f(std::string(DIRL_SOURCE_DIR) + "/tests/data/shaping_golden.csv");
  REQUIRE(f);
  std::string line;
  std::getline(f, line);
  int rows = 0;
  while (std::getline(f, line)) {
    const auto c = split_csv(line);
    REQUIRE(c.size() == 14);
    INFO("case " << c[0]);
    const Predicate target = parse_predicate(c[1], reg());
    const Predicate b1 = parse_predicate(c[3], reg());
    const Predicate b2 = parse_predicate(c[4], reg());
    const SafeSet z = c[2] == "always" ? SafeSet::always(b1) : SafeSet::concat(b1, b2);
    ShapingMonitor mon(target, z);
    if (c[5] == "0") {
      // Break psi with a state inside the first-phase obstacle.
      const auto& args = b1.atomic().args();
      const State bad = env9().layout().center({static_cast<int>(args[0]), static_cast<int>(args[1])});
      mon.step_reward(bad, {0, 0}, bad);
      REQUIRE_FALSE(mon.psi());
    }
    const State s{num(c[6]), num(c[7])}, n{num(c[8]), num(c[9])};
    const double r = mon.step_reward(s, {0, 0}, n);
    CHECK(mon.last_reach() == num(c[10]));
    CHECK(mon.last_safe() == num(c[11]));
    CHECK(r == num(c[12]));
    CHECK(mon.psi() == (c[13] == "1"));
    ++rows;
  }
  CHECK(rows == 20);
}

TEST_CASE("shaped reward matches the case table on random rollouts") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> xy(0.0, 3.0);
  for (int t = 0; t < 300; ++t) {
    const Predicate target = gen::pred(reg(), rng, 1);
    const SafeSet z = (rng() & 1) ? SafeSet::always(gen::pred(reg(), rng, 1))
                                  : SafeSet::concat(gen::pred(reg(), rng, 1), gen::pred(reg(), rng, 1));
    ShapingMonitor mon(target, z);
    bool psi = true;
    State s{xy(rng), xy(rng)};
    for (int i = 0; i < 15; ++i) {
      const State n{xy(rng), xy(rng)};
      const double want = oracle::shaped_step(target, z, psi, s, n);
      psi = psi && z.first().holds(s);
      const double got = mon.step_reward(s, {0, 0}, n);
      REQUIRE(got == want);
      CHECK(mon.last_safe() <= 0.0);
      CHECK(mon.psi() == psi);
      s = n;
    }
  }
}

TEST_CASE("safety term vanishes on safe states") {
  const Predicate avoid = parse_predicate("avoid(1,0)", reg());
  ShapingMonitor mon(parse_predicate("reach(2,0)", reg()), SafeSet::always(avoid));
  mon.step_reward({0.2, 1.2}, {0, 0}, {0.2, 1.4});
  CHECK(mon.last_safe() == 0.0);
  mon.step_reward({0.2, 1.4}, {0, 0}, {0.5, 1.5});
  CHECK(mon.last_safe() == doctest::Approx(-0.6));
}

TEST_CASE("sparse reward is the edge indicator") {
  const AbstractGraph g = compile(parse_spec("reach(2,0) ensuring avoid(1,0)", reg()));
  const auto& l = env9().layout();
  const std::vector<State> good{l.center({0, 0}), {0.15, 1.5}, l.center({2, 0})};
  const std::vector<State> bad{l.center({0, 0}), l.center({1, 0}), l.center({2, 0})};
  CHECK(sparse_reward(good, 0, g) == 1);
  CHECK(sparse_reward(bad, 0, g) == 0);
}
