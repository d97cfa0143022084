#include <doctest.h>

#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "dirl/rooms.hpp"

using namespace dirl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Heading that moves from a to b.
Action toward(const State& a, const State& b, double vmax) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  return {std::min(vmax, std::hypot(dx, dy)), std::atan2(dy, dx)};
}

}  // namespace

TEST_CASE("reset samples the initial square") {
  const RoomsEnv env(*preset_layout("rooms9"));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const State s = env.reset(rng);
    CHECK(std::abs(s[0] - 0.5) <= 0.1);
    CHECK(std::abs(s[1] - 0.5) <= 0.1);
  }
  Rng a(7), b(7);
  CHECK(env.reset(a) == env.reset(b));
}

TEST_CASE("step: free motion, clamping and rejection") {
  const RoomsEnv env(*preset_layout("rooms9"));
  const State c{0.5, 0.5};
  const State right = env.step(c, {0.2, 0.0});
  CHECK(right[0] == doctest::Approx(0.7));
  CHECK(right[1] == doctest::Approx(0.5));
  // speed clamps to v_max
  const State fast = env.step(c, {5.0, M_PI / 2});
  CHECK(fast[1] == doctest::Approx(0.75));
  CHECK(env.step(c, {-1.0, 0.0}) == c);
  // outer wall
  CHECK(env.step({0.1, 0.5}, {0.2, M_PI}) == State{0.1, 0.5});
  // interior wall off the door gap: x = 1 crossed at y = 0.85
  CHECK(env.step({0.9, 0.85}, {0.2, 0.0}) == State{0.9, 0.85});
  // through the door at y = 0.5
  const State through = env.step({0.9, 0.5}, {0.2, 0.0});
  CHECK(through[0] == doctest::Approx(1.1));
}

TEST_CASE("step: closed door blocks") {
  const RoomsEnv env(*preset_layout("rooms9"));
  CHECK_FALSE(env.layout().door_open({0, 2}, {1, 2}));
  const State s{2.5, 0.9};
  CHECK(env.step(s, {0.2, M_PI / 2}) == s);
  CHECK(env.blocked({2.5, 0.9}, {2.5, 1.1}));
  CHECK_FALSE(env.blocked({1.5, 0.9}, {1.5, 1.1}));
}

TEST_CASE("random walks stay inside and only cross open doors") {
  for (const char* name : {"rooms9", "rooms16_blocked"}) {
    const RoomsEnv env(*preset_layout(name));
    const auto& l = env.layout();
    Rng rng(3);
    std::uniform_real_distribution<double> v(0.0, 0.3), th(-M_PI, M_PI);
    for (int ep = 0; ep < 200; ++ep) {
      State s = env.reset(rng);
      for (int t = 0; t < 200; ++t) {
        const State n = env.step(s, {v(rng), th(rng)});
        REQUIRE(n[0] > 0.0);
        REQUIRE(n[1] > 0.0);
        REQUIRE(n[0] < l.width());
        REQUIRE(n[1] < l.height());
        const Room a = env.room_of(s), b = env.room_of(n);
        if (a != b) REQUIRE(l.door_open(a, b));
        s = n;
      }
    }
  }
}

TEST_CASE("every room is reachable through door centres") {
  for (const char* name : {"rooms9", "rooms16_open", "rooms16_blocked"}) {
    const RoomsEnv env(*preset_layout(name));
    const auto& l = env.layout();
    // BFS over the door graph, then drive along the door midpoints.
    std::map<Room, Room> parent;
    std::queue<Room> q;
    q.push(l.initial_room);
    parent[l.initial_room] = l.initial_room;
    while (!q.empty()) {
      const Room r = q.front();
      q.pop();
      for (Room n : {Room{r.row + 1, r.col}, Room{r.row - 1, r.col}, Room{r.row, r.col + 1}, Room{r.row, r.col - 1}})
        if (l.in_grid(n) && l.door_open(r, n) && !parent.count(n)) {
          parent[n] = r;
          q.push(n);
        }
    }
    CHECK(parent.size() == static_cast<std::size_t>(l.rows * l.cols));
    for (const auto& [goal, p] : parent) {
      std::vector<Room> route{goal};
      while (route.back() != l.initial_room) route.push_back(parent[route.back()]);
      std::reverse(route.begin(), route.end());
      State s = l.center(l.initial_room);
      for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        const State a = l.center(route[i]), b = l.center(route[i + 1]);
        for (const State& w : {State{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2}, b})
          for (int t = 0; t < 20; ++t) s = env.step(s, toward(s, w, l.max_speed));
      }
      CHECK(env.room_of(s) == goal);
      CHECK(std::hypot(s[0] - l.center(goal)[0], s[1] - l.center(goal)[1]) < 1e-9);
    }
  }
}

TEST_CASE("layout files: parse, serialize, presets") {
  for (const auto& name : preset_layout_names()) {
    const RoomsLayout l = *preset_layout(name);
    CHECK(parse_layout(serialize_layout(l)) == l);
    CHECK(slurp(std::string(DIRL_SOURCE_DIR) + "/data/layouts/" + name + ".cfg") == preset_layout_text(name));
  }
  const RoomsLayout l9 = *preset_layout("rooms9");
  CHECK(l9.doors.size() == 11);
  CHECK(l9.obstacles == std::vector<Room>{{1, 0}});
  CHECK(preset_layout("rooms16_open")->doors.size() == 24);
  CHECK(preset_layout("rooms16_blocked")->doors.size() == 19);
  CHECK_FALSE(preset_layout("nope").has_value());
}

TEST_CASE("layout files: errors") {
  CHECK_THROWS_AS(parse_layout("rows = 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_layout("colour = red\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_layout("rows 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_layout("door = 0 0 2 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_layout("door_width = 1.5\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_layout("initial_room = 7 7\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_layout("max_speed = 0.1 0.2\n"), std::invalid_argument);
}

TEST_CASE("predicates bound to geometry") {
  RoomsLayout l = *preset_layout("rooms9");
  l.room_side = 2.0;
  const RoomsEnv env(l);
  const auto reg = env.predicates();
  const double rc[2] = {1, 1};
  const AtomicPredicate reach = reg.make("reach", rc);
  CHECK(reach.quant({3.0, 3.0}) == doctest::Approx(1.0));
  CHECK(reach.quant({4.0, 3.0}) == doctest::Approx(0.0));
  const double nr[3] = {1.0, 1.0, 0.5};
  const AtomicPredicate near = reg.make("near", nr);
  CHECK(near.quant({1.25, 1.0}) == doctest::Approx(0.5));
}
