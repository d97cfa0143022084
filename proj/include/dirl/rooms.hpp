#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dirl/rng.hpp"
#include "dirl/spec_lang.hpp"

namespace dirl {

/// Room index (row, column); row 0 is the bottom row.
struct Room {
  int row = 0;
  int col = 0;
  auto operator<=>(const Room&) const = default;
};

/// Geometry of a multi-room world. All lengths are in the same units as the
/// state; room (r, c) covers [c*L, (c+1)*L] x [r*L, (r+1)*L].
struct RoomsLayout {
  int rows = 3;
  int cols = 3;
  double room_side = 1.0;
  double door_width = 0.5;
  double max_speed = 0.25;
  /// Half-width of the uniform initial square around the initial room centre.
  double init_spread = 0.1;
  double obstacle_radius = 0.3;
  Room initial_room{0, 0};
  /// Open doors, each stored with the smaller room first.
  std::set<std::pair<Room, Room>> doors;
  std::vector<Room> obstacles;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  bool in_grid(Room r) const { return r.row >= 0 && r.col >= 0 && r.row < rows && r.col < cols; }
  bool door_open(Room a, Room b) const;
  void set_door(Room a, Room b, bool open);
  void open_all_doors();

  State center(Room r) const;
  double width() const { return cols * room_side; }
  double height() const { return rows * room_side; }

  bool operator==(const RoomsLayout&) const = default;
};

/// Parses the key-value layout format (see data/layouts/).
RoomsLayout parse_layout(std::string_view text);
std::string serialize_layout(const RoomsLayout& layout);
RoomsLayout load_layout(const std::string& path);

/// Built-in presets: "rooms9", "rooms16_open", "rooms16_blocked".
std::optional<RoomsLayout> preset_layout(std::string_view name);
std::vector<std::string> preset_layout_names();
/// Layout text of a preset, identical to the shipped file.
std::string preset_layout_text(std::string_view name);

/// Deterministic continuous navigation MDP. Walls are zero-thickness segments
/// with door gaps; a move whose segment touches wall material is rejected.
class RoomsEnv {
 public:
  explicit RoomsEnv(RoomsLayout layout);

  const RoomsLayout& layout() const { return layout_; }

  State reset(Rng& rng) const;
  State step(const State& s, const Action& a) const;

  /// Segment s -> t intersects wall material.
  bool blocked(const State& s, const State& t) const;
  /// Room containing s (clamped to the grid).
  Room room_of(const State& s) const;

  /// reach / avoid / near atoms bound to this geometry.
  PredicateRegistry predicates() const;

 private:
  bool crosses_vertical(double x0, double y0, double x1, double y1) const;
  bool crosses_horizontal(double x0, double y0, double x1, double y1) const;
  bool passes_vertical_line(int k, double y) const;
  bool passes_horizontal_line(int k, double x) const;

  RoomsLayout layout_;
};

/// Closed-loop rollout of at most `steps` transitions. `policy(s)` returns the
/// action; `stop(s)` is consulted on every visited state (including s0) and
/// ends the rollout when it returns true.
template <class Policy, class Stop>
Trajectory rollout(const RoomsEnv& env, Policy&& policy, const State& s0, std::size_t steps, Stop&& stop) {
  Trajectory z;
  z.states.reserve(steps + 1);
  z.actions.reserve(steps);
  z.states.push_back(s0);
  if (stop(s0)) return z;
  for (std::size_t i = 0; i < steps; ++i) {
    const Action a = policy(z.states.back());
    z.actions.push_back(a);
    z.states.push_back(env.step(z.states.back(), a));
    if (stop(z.states.back())) break;
  }
  return z;
}

template <class Policy>
Trajectory rollout(const RoomsEnv& env, Policy&& policy, const State& s0, std::size_t steps) {
  return rollout(env, std::forward<Policy>(policy), s0, steps, [](const State&) { return false; });
}

}  // namespace dirl
