#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dirl/rooms.hpp"
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

Predicate P(const char* name, double a, double b) {
  const double args[2] = {a, b};
  return Predicate::atom(reg().make(name, args));
}

Spec parse(const char* s) { return parse_spec(s, reg()); }

}  // namespace

TEST_CASE("parse: operator structure") {
  CHECK(parse("achieve reach(1,1)") == Spec::achieve(P("reach", 1, 1)));
  CHECK(parse("reach(1,1)") == Spec::achieve(P("reach", 1, 1)));

  const Spec a = Spec::achieve(P("reach", 2, 0));
  const Spec b = Spec::achieve(P("reach", 0, 2));
  const Spec c = Spec::achieve(P("reach", 2, 2));
  CHECK(parse("reach(2,0); reach(0,2) or reach(2,2)") == Spec::choice(Spec::seq(a, b), c));
  CHECK(parse("reach(2,0); reach(0,2); reach(2,2)") == Spec::seq(a, Spec::seq(b, c)));
  CHECK(parse("reach(2,0) ensuring avoid(1,0); reach(2,2)") ==
        Spec::seq(Spec::ensuring(a, P("avoid", 1, 0)), c));
  CHECK(parse("(reach(2,0) or reach(0,2)); reach(2,2)") == Spec::seq(Spec::choice(a, b), c));
  CHECK(parse("((reach(2,0) or reach(0,2)); reach(2,2)) ensuring avoid(1,0)") ==
        Spec::ensuring(Spec::seq(Spec::choice(a, b), c), P("avoid", 1, 0)));
}

TEST_CASE("parse: predicate connectives") {
  const Spec s = parse("achieve (reach(1,1) or reach(2,2)) and avoid(1,0)");
  REQUIRE(s.kind() == Spec::Kind::Achieve);
  CHECK(s.pred() == Predicate::conj(Predicate::disj(P("reach", 1, 1), P("reach", 2, 2)), P("avoid", 1, 0)));

  const Spec e = parse("reach(1,1) ensuring avoid(1,0) and avoid(2,2)");
  CHECK(e.pred() == Predicate::conj(P("avoid", 1, 0), P("avoid", 2, 2)));

  CHECK(parse("achieve true").pred().is_true());
  CHECK(parse("reach(1,1) ensuring true and avoid(1,0)").pred() == P("avoid", 1, 0));
}

TEST_CASE("parse: comments, whitespace and numbers") {
  CHECK(parse("# leading comment\n  reach( 2 , 0 )  # trailing\n") == Spec::achieve(P("reach", 2, 0)));
  const Predicate n = parse_predicate("near(0.5, -1.25e0, 2)", reg());
  CHECK(n.atomic().args() == std::vector<double>{0.5, -1.25, 2.0});
}

TEST_CASE("parse errors carry locations") {
  auto where = [](const char* src) -> std::pair<int, int> {
    try {
      parse(src);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(where("reach(1,1) ;") == std::pair{1, 13});
  CHECK(where("frobnicate(1,1)") == std::pair{1, 1});
  CHECK(where("reach(1,1);\n  reach(9,9)") == std::pair{2, 3});
  CHECK(where("reach(1)") == std::pair{1, 1});
  CHECK(where("(reach(1,1)") == std::pair{1, 12});
  CHECK(where("reach(1,1) reach(2,2)") == std::pair{1, 12});
  CHECK(where("reach(1,1) $") == std::pair{1, 12});
  CHECK(where("reach(1,x)") == std::pair{1, 9});
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("near(0,0,0)"), ParseError);
}

TEST_CASE("printer round-trips random specs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Spec phi = gen::spec(reg(), rng, 5);
    const std::string text = to_string(phi);
    INFO(text);
    const Spec back = parse_spec(text, reg());
    CHECK(back == phi);
    CHECK(to_string(back) == text);
  }
}

TEST_CASE("printer: canonical forms") {
  CHECK(to_string(parse("reach(2,0);reach(0,0)")) == "reach(2, 0); reach(0, 0)");
  CHECK(to_string(parse("achieve (reach(1,1) or reach(2,2))")) == "achieve (reach(1, 1) or reach(2, 2))");
  CHECK(to_string(parse("(reach(1,1) ensuring avoid(1,0)) ensuring avoid(2,2)")) ==
        "reach(1, 1) ensuring avoid(1, 0) ensuring avoid(2, 2)");
}

TEST_CASE("quantitative semantics: sign rule and min/max laws") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xy(0.0, 3.0);
  for (int i = 0; i < 3000; ++i) {
    const Predicate a = gen::pred(reg(), rng, 3);
    const Predicate b = gen::pred(reg(), rng, 3);
    const State s{xy(rng), xy(rng)};
    CHECK(eval_bool(a, s) == (eval_quant(a, s) > 0.0));
    const Predicate conj = Predicate::conj(a, b);
    const Predicate disj = Predicate::disj(a, b);
    CHECK(eval_quant(conj, s) == std::min(eval_quant(a, s), eval_quant(b, s)));
    CHECK(eval_quant(disj, s) == std::max(eval_quant(a, s), eval_quant(b, s)));
    CHECK(eval_bool(conj, s) == (eval_bool(a, s) && eval_bool(b, s)));
    CHECK(eval_bool(disj, s) == (eval_bool(a, s) || eval_bool(b, s)));
  }
  CHECK(eval_quant(Predicate::truth(), {0, 0}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("atom values") {
  const State c = env9().layout().center({1, 1});
  CHECK(eval_quant(P("reach", 1, 1), c) == doctest::Approx(1.0));
  CHECK(eval_quant(P("reach", 1, 1), {c[0] + 0.5, c[1]}) == doctest::Approx(0.0));
  CHECK(eval_quant(P("avoid", 1, 1), c) == doctest::Approx(-0.6));
  CHECK(eval_bool(P("avoid", 1, 1), {c[0] + 0.31, c[1]}));
  CHECK_FALSE(eval_bool(P("avoid", 1, 1), {c[0] + 0.29, c[1]}));
}

TEST_CASE("satisfies_spec: hand examples") {
  const auto& l = env9().layout();
  const State s00 = l.center({0, 0}), s10 = l.center({1, 0}), s20 = l.center({2, 0}), s21 = l.center({2, 1});
  const std::vector<State> z{s00, s10, s20, s21};
  CHECK(satisfies_spec(z, parse("reach(2,0)")));
  CHECK_FALSE(satisfies_spec(z, parse("reach(2,0) ensuring avoid(1,0)")));
  CHECK(satisfies_spec(z, parse("reach(2,0); reach(2,1)")));
  CHECK_FALSE(satisfies_spec(z, parse("reach(2,1); reach(2,0)")));
  // The second operand needs at least one state of its own.
  CHECK_FALSE(satisfies_spec(std::vector<State>{s20}, parse("reach(2,0); reach(2,0)")));
  CHECK(satisfies_spec(std::vector<State>{s20, s20}, parse("reach(2,0); reach(2,0)")));
  CHECK(satisfies_spec(z, parse("reach(0,2) or reach(2,1)")));
}

TEST_CASE("satisfies_spec agrees with direct recursion") {
  std::mt19937_64 rng(5);
  const auto pool = gen::grid_states(env9().layout());
  int positives = 0;
  for (int i = 0; i < 400; ++i) {
    const Spec phi = gen::spec(reg(), rng, 4);
    for (int j = 0; j < 10; ++j) {
      const auto z = gen::trajectory(pool, rng, 8);
      const bool want = oracle::spec_sat(z, phi);
      positives += want;
      REQUIRE(satisfies_spec(z, phi) == want);
    }
  }
  CHECK(positives > 200);
}

TEST_CASE("spec size and depth") {
  const Spec s = parse("((reach(2,0) or reach(0,2)); reach(2,2)) ensuring avoid(1,0)");
  CHECK(s.size() == 6);
  CHECK(s.depth() == 4);
}

TEST_CASE("registry rejects bad atoms") {
  const double one[1] = {1};
  CHECK_THROWS_AS(reg().make("reach", one), std::invalid_argument);
  CHECK_THROWS_AS(reg().make("nope", one), std::invalid_argument);
  const double out[2] = {3, 0};
  CHECK_THROWS_AS(reg().make("reach", out), std::invalid_argument);
}
