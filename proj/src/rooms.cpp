#include "dirl/rooms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dirl {

namespace {

std::pair<Room, Room> ordered(Room a, Room b) { return a < b ? std::pair(a, b) : std::pair(b, a); }

bool adjacent(Room a, Room b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col) == 1; }

}  // namespace

void RoomsLayout::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("invalid rooms layout: " + m); };
  if (rows < 1 || cols < 1) fail("grid must have at least one room");
  if (!(room_side > 0.0)) fail("room_side must be positive");
  if (!(door_width > 0.0 && door_width < room_side)) fail("door_width must lie in (0, room_side)");
  if (!(max_speed > 0.0)) fail("max_speed must be positive");
  if (!(init_spread >= 0.0 && init_spread < room_side / 2)) fail("init_spread must lie in [0, room_side/2)");
  if (!(obstacle_radius >= 0.0 && obstacle_radius < room_side / 2)) fail("obstacle_radius must lie in [0, room_side/2)");
  if (!in_grid(initial_room)) fail("initial room outside the grid");
  for (const auto& [a, b] : doors) {
    if (!in_grid(a) || !in_grid(b)) fail("door outside the grid");
    if (!adjacent(a, b)) fail("door between non-adjacent rooms");
  }
  for (Room o : obstacles)
    if (!in_grid(o)) fail("obstacle outside the grid");
}

bool RoomsLayout::door_open(Room a, Room b) const { return doors.count(ordered(a, b)) > 0; }

void RoomsLayout::set_door(Room a, Room b, bool open) {
  if (!adjacent(a, b)) throw std::invalid_argument("door between non-adjacent rooms");
  if (open)
    doors.insert(ordered(a, b));
  else
    doors.erase(ordered(a, b));
}

void RoomsLayout::open_all_doors() {
  doors.clear();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) doors.insert({Room{r, c}, Room{r, c + 1}});
      if (r + 1 < rows) doors.insert({Room{r, c}, Room{r + 1, c}});
    }
}

State RoomsLayout::center(Room r) const { return {(r.col + 0.5) * room_side, (r.row + 0.5) * room_side}; }

// ---------------------------------------------------------------------------
// Layout files

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
std::vector<T> read_values(const std::string& v, std::size_t count, int line) {
  std::istringstream is(v);
  std::vector<T> out;
  T x;
  while (is >> x) out.push_back(x);
  if (!is.eof() || out.size() != count) {
    throw std::invalid_argument("layout line " + std::to_string(line) + ": expected " + std::to_string(count) +
                                " value(s), got '" + v + "'");
  }
  return out;
}

}  // namespace

RoomsLayout parse_layout(std::string_view text) {
  RoomsLayout l;
  l.doors.clear();
  bool all_doors = false;
  std::vector<std::pair<Room, Room>> opened, closed;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("layout line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string val = trim(std::string_view(body).substr(eq + 1));
    auto room_pair = [&] {
      auto v = read_values<int>(val, 4, line);
      return std::pair(Room{v[0], v[1]}, Room{v[2], v[3]});
    };
    if (key == "rows") {
      l.rows = read_values<int>(val, 1, line)[0];
    } else if (key == "cols") {
      l.cols = read_values<int>(val, 1, line)[0];
    } else if (key == "room_side") {
      l.room_side = read_values<double>(val, 1, line)[0];
    } else if (key == "door_width") {
      l.door_width = read_values<double>(val, 1, line)[0];
    } else if (key == "max_speed") {
      l.max_speed = read_values<double>(val, 1, line)[0];
    } else if (key == "init_spread") {
      l.init_spread = read_values<double>(val, 1, line)[0];
    } else if (key == "obstacle_radius") {
      l.obstacle_radius = read_values<double>(val, 1, line)[0];
    } else if (key == "initial_room") {
      auto v = read_values<int>(val, 2, line);
      l.initial_room = Room{v[0], v[1]};
    } else if (key == "doors") {
      if (val == "all")
        all_doors = true;
      else if (val == "none")
        all_doors = false;
      else
        throw std::invalid_argument("layout line " + std::to_string(line) + ": doors must be 'all' or 'none'");
    } else if (key == "door") {
      opened.push_back(room_pair());
    } else if (key == "closed_door") {
      closed.push_back(room_pair());
    } else if (key == "obstacle") {
      auto v = read_values<int>(val, 2, line);
      l.obstacles.push_back(Room{v[0], v[1]});
    } else {
      throw std::invalid_argument("layout line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (all_doors) l.open_all_doors();
  for (auto [a, b] : opened) l.set_door(a, b, true);
  for (auto [a, b] : closed) l.set_door(a, b, false);
  l.validate();
  return l;
}

std::string serialize_layout(const RoomsLayout& l) {
  std::ostringstream os;
  os.precision(17);
  os << "rows = " << l.rows << "\n"
     << "cols = " << l.cols << "\n"
     << "room_side = " << l.room_side << "\n"
     << "door_width = " << l.door_width << "\n"
     << "max_speed = " << l.max_speed << "\n"
     << "init_spread = " << l.init_spread << "\n"
     << "obstacle_radius = " << l.obstacle_radius << "\n"
     << "initial_room = " << l.initial_room.row << ' ' << l.initial_room.col << "\n"
     << "doors = none\n";
  for (const auto& [a, b] : l.doors) os << "door = " << a.row << ' ' << a.col << ' ' << b.row << ' ' << b.col << "\n";
  for (Room o : l.obstacles) os << "obstacle = " << o.row << ' ' << o.col << "\n";
  return os.str();
}

RoomsLayout load_layout(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open layout file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_layout(ss.str());
}

namespace {

const std::map<std::string, std::string, std::less<>>& preset_texts() {
  static const std::map<std::string, std::string, std::less<>> texts = {
      {"rooms9",
       "# 3x3 rooms. Start bottom-left, obstacle in the middle-left room.\n"
       "# The door between the bottom-right and middle-right rooms is walled off.\n"
       "rows = 3\n"
       "cols = 3\n"
       "room_side = 1.0\n"
       "door_width = 0.5\n"
       "max_speed = 0.25\n"
       "init_spread = 0.1\n"
       "obstacle_radius = 0.3\n"
       "initial_room = 0 0\n"
       "doors = all\n"
       "closed_door = 0 2 1 2\n"
       "obstacle = 1 0\n"},
      {"rooms16_open",
       "# 4x4 rooms, every door open.\n"
       "rows = 4\n"
       "cols = 4\n"
       "room_side = 1.0\n"
       "door_width = 0.5\n"
       "max_speed = 0.25\n"
       "init_spread = 0.1\n"
       "obstacle_radius = 0.3\n"
       "initial_room = 0 0\n"
       "doors = all\n"
       "obstacle = 1 2\n"},
      {"rooms16_blocked",
       "# 4x4 rooms with five doors walled off; every room stays reachable.\n"
       "rows = 4\n"
       "cols = 4\n"
       "room_side = 1.0\n"
       "door_width = 0.5\n"
       "max_speed = 0.25\n"
       "init_spread = 0.1\n"
       "obstacle_radius = 0.3\n"
       "initial_room = 0 0\n"
       "doors = all\n"
       "closed_door = 3 0 3 1\n"
       "closed_door = 1 0 1 1\n"
       "closed_door = 1 2 1 3\n"
       "closed_door = 2 1 3 1\n"
       "closed_door = 2 3 3 3\n"
       "obstacle = 1 2\n"},
  };
  return texts;
}

}  // namespace

std::optional<RoomsLayout> preset_layout(std::string_view name) {
  const auto& t = preset_texts();
  auto it = t.find(name);
  if (it == t.end()) return std::nullopt;
  return parse_layout(it->second);
}

std::vector<std::string> preset_layout_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : preset_texts()) names.push_back(k);
  return names;
}

std::string preset_layout_text(std::string_view name) {
  const auto& t = preset_texts();
  auto it = t.find(name);
  if (it == t.end()) throw std::invalid_argument("unknown layout preset '" + std::string(name) + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Dynamics

RoomsEnv::RoomsEnv(RoomsLayout layout) : layout_(std::move(layout)) { layout_.validate(); }

State RoomsEnv::reset(Rng& rng) const {
  const State c = layout_.center(layout_.initial_room);
  if (layout_.init_spread == 0.0) return c;
  std::uniform_real_distribution<double> u(-layout_.init_spread, layout_.init_spread);
  const double dx = u(rng);
  const double dy = u(rng);
  return {c[0] + dx, c[1] + dy};
}

Room RoomsEnv::room_of(const State& s) const {
  const int c = std::clamp(static_cast<int>(std::floor(s[0] / layout_.room_side)), 0, layout_.cols - 1);
  const int r = std::clamp(static_cast<int>(std::floor(s[1] / layout_.room_side)), 0, layout_.rows - 1);
  return Room{r, c};
}

// Vertical wall line x = k*L, crossed at height y.
bool RoomsEnv::passes_vertical_line(int k, double y) const {
  if (k <= 0 || k >= layout_.cols) return false;
  const double L = layout_.room_side;
  const int row = static_cast<int>(std::floor(y / L));
  if (row < 0 || row >= layout_.rows) return false;
  if (!layout_.door_open(Room{row, k - 1}, Room{row, k})) return false;
  return std::abs(y - (row + 0.5) * L) < layout_.door_width / 2;
}

// Horizontal wall line y = k*L, crossed at abscissa x.
bool RoomsEnv::passes_horizontal_line(int k, double x) const {
  if (k <= 0 || k >= layout_.rows) return false;
  const double L = layout_.room_side;
  const int col = static_cast<int>(std::floor(x / L));
  if (col < 0 || col >= layout_.cols) return false;
  if (!layout_.door_open(Room{k - 1, col}, Room{k, col})) return false;
  return std::abs(x - (col + 0.5) * L) < layout_.door_width / 2;
}

bool RoomsEnv::crosses_vertical(double x0, double y0, double x1, double y1) const {
  const double L = layout_.room_side;
  const int lo = static_cast<int>(std::ceil(std::min(x0, x1) / L));
  const int hi = static_cast<int>(std::floor(std::max(x0, x1) / L));
  for (int k = lo; k <= hi; ++k) {
    const double x = k * L;
    if (x0 == x1) {
      // Segment runs along the wall line: both ends must sit in one gap.
      if (!passes_vertical_line(k, y0) || !passes_vertical_line(k, y1)) return true;
      if (std::floor(y0 / L) != std::floor(y1 / L)) return true;
      continue;
    }
    const double y = y0 + (x - x0) / (x1 - x0) * (y1 - y0);
    if (!passes_vertical_line(k, y)) return true;
  }
  return false;
}

bool RoomsEnv::crosses_horizontal(double x0, double y0, double x1, double y1) const {
  const double L = layout_.room_side;
  const int lo = static_cast<int>(std::ceil(std::min(y0, y1) / L));
  const int hi = static_cast<int>(std::floor(std::max(y0, y1) / L));
  for (int k = lo; k <= hi; ++k) {
    const double y = k * L;
    if (y0 == y1) {
      if (!passes_horizontal_line(k, x0) || !passes_horizontal_line(k, x1)) return true;
      if (std::floor(x0 / L) != std::floor(x1 / L)) return true;
      continue;
    }
    const double x = x0 + (y - y0) / (y1 - y0) * (x1 - x0);
    if (!passes_horizontal_line(k, x)) return true;
  }
  return false;
}

bool RoomsEnv::blocked(const State& s, const State& t) const {
  return crosses_vertical(s[0], s[1], t[0], t[1]) || crosses_horizontal(s[0], s[1], t[0], t[1]);
}

State RoomsEnv::step(const State& s, const Action& a) const {
  const double v = std::clamp(a[0], 0.0, layout_.max_speed);
  const double theta = std::clamp(a[1], -M_PI, M_PI);
  const State t{s[0] + v * std::cos(theta), s[1] + v * std::sin(theta)};
  if (v == 0.0 || blocked(s, t)) return s;
  return t;
}

PredicateRegistry RoomsEnv::predicates() const {
  PredicateRegistry reg;
  const RoomsLayout l = layout_;
  const double scale = l.room_side / 2;
  auto room_arg = [l](std::span<const double> args, const char* name) {
    const Room r{static_cast<int>(args[0]), static_cast<int>(args[1])};
    if (r.row != args[0] || r.col != args[1] || !l.in_grid(r))
      throw std::invalid_argument(std::string(name) + ": room index outside the grid");
    return r;
  };
  reg.add("reach", 2, [l, scale, room_arg](std::span<const double> args) {
    const State c = l.center(room_arg(args, "reach"));
    return AtomicPredicate("reach", {args.begin(), args.end()}, [c, scale](const State& s) {
      return 1.0 - std::hypot(s[0] - c[0], s[1] - c[1]) / scale;
    });
  });
  reg.add("avoid", 2, [l, scale, room_arg](std::span<const double> args) {
    const State c = l.center(room_arg(args, "avoid"));
    const double r_obs = l.obstacle_radius;
    return AtomicPredicate("avoid", {args.begin(), args.end()}, [c, scale, r_obs](const State& s) {
      return (std::hypot(s[0] - c[0], s[1] - c[1]) - r_obs) / scale;
    });
  });
  reg.add("near", 3, [](std::span<const double> args) {
    const State p{args[0], args[1]};
    const double radius = args[2];
    if (!(radius > 0.0)) throw std::invalid_argument("near: radius must be positive");
    return AtomicPredicate("near", {args.begin(), args.end()}, [p, radius](const State& s) {
      return 1.0 - std::hypot(s[0] - p[0], s[1] - p[1]) / radius;
    });
  });
  return reg;
}

}  // namespace dirl
