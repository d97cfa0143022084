#include "dirl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace dirl {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Spec presets. Must stay identical to data/specs/*.spec.

namespace {

const std::map<std::string, std::string, std::less<>>& spec_table() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"rooms9/phi1", "reach(2,0); reach(0,0)\n"},
      {"rooms9/phi2", "reach(2,0) or reach(0,2)\n"},
      {"rooms9/phi3", "(reach(2,0) or reach(0,2)); reach(2,2)\n"},
      {"rooms9/phi4", "reach(2,0) ensuring avoid(1,0)\n"},
      {"rooms9/phi5", "(reach(2,0) ensuring avoid(1,0) or reach(0,2)); reach(2,2)\n"},
      {"rooms9/phi_ex", "((reach(2,0) or reach(0,2)); reach(2,2)) ensuring avoid(1,0)\n"},
      {"rooms16/phi1", "(reach(0,2) or reach(2,0)) ensuring avoid(1,2)\n"},
      {"rooms16/phi2", "((reach(0,2) or reach(2,0)); reach(2,2)) ensuring avoid(1,2)\n"},
      {"rooms16/phi3",
       "((reach(0,2) or reach(2,0)); reach(2,2);\n"
       " (reach(2,1) or reach(3,2)); reach(3,1)) ensuring avoid(1,2)\n"},
      {"rooms16/phi4",
       "((reach(0,2) or reach(2,0)); reach(2,2);\n"
       " (reach(2,1) or reach(3,2)); reach(3,1);\n"
       " (reach(3,3) or reach(1,1)); reach(1,3)) ensuring avoid(1,2)\n"},
      {"rooms16/phi5",
       "((reach(0,2) or reach(2,0)); reach(2,2);\n"
       " (reach(2,1) or reach(3,2)); reach(3,1);\n"
       " (reach(3,3) or reach(1,1)); reach(1,3);\n"
       " (reach(1,1) or reach(0,3)); reach(0,1)) ensuring avoid(1,2)\n"},
  };
  return table;
}

}  // namespace

std::optional<std::string> preset_spec(std::string_view id) {
  const auto& t = spec_table();
  const auto it = t.find(id);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> preset_spec_ids() {
  std::vector<std::string> ids;
  for (const auto& [k, v] : spec_table()) ids.push_back(k);
  return ids;
}

std::string preset_spec_file(std::string_view id) {
  std::string f(id);
  std::replace(f.begin(), f.end(), '/', '_');
  return f + ".spec";
}

Spec resolve_spec(const std::string& text_or_id, const PredicateRegistry& registry) {
  if (auto text = preset_spec(text_or_id)) return parse_spec(*text, registry);
  return parse_spec(text_or_id, registry);
}

RoomsLayout resolve_layout(const std::string& name_or_path) {
  if (auto l = preset_layout(name_or_path)) return *l;
  if (fs::exists(name_or_path)) return load_layout(name_or_path);
  throw std::invalid_argument("unknown environment '" + name_or_path + "' (not a preset or layout file)");
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  if (name.empty()) throw std::invalid_argument("experiment name is empty");
  if (k_values.empty()) throw std::invalid_argument("k sweep is empty");
  if (!std::is_sorted(k_values.begin(), k_values.end()) ||
      std::adjacent_find(k_values.begin(), k_values.end()) != k_values.end())
    throw std::invalid_argument("k sweep must be strictly ascending");
  if (repetitions == 0) throw std::invalid_argument("repetitions must be positive");
  for (std::size_t k : k_values) {
    DirlConfig d = dirl;
    d.ars.episodes = k;
    d.validate();
  }
}

std::uint64_t ExperimentConfig::run_seed(std::size_t k, std::size_t rep) const {
  return derive_seed(seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(rep)});
}

json to_json(const ExperimentConfig& c) {
  const ArsConfig& a = c.dirl.ars;
  return json{
      {"name", c.name},
      {"environment", c.environment},
      {"spec", c.spec},
      {"k_values", c.k_values},
      {"repetitions", c.repetitions},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
      {"estimate_rollouts", c.dirl.estimate_rollouts},
      {"eval_rollouts", c.dirl.eval_rollouts},
      {"reach_buffer", c.dirl.reach_buffer},
      {"reach_min_successes", c.dirl.reach_min_successes},
      {"reach_rollout_factor", c.dirl.reach_rollout_factor},
      {"parallel", c.dirl.exec == Exec::Parallel},
      {"ars",
       {{"step_size", a.step_size},
        {"noise", a.noise},
        {"directions", a.directions},
        {"top_directions", a.top_directions},
        {"horizon", a.horizon},
        {"hidden", a.hidden},
        {"success_bonus", a.success_bonus}}},
  };
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument("unknown key '" + key + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  reject_unknown(j,
                 {"name", "environment", "spec", "k_values", "repetitions", "seed", "output_dir", "estimate_rollouts",
                  "eval_rollouts", "reach_buffer", "reach_min_successes", "reach_rollout_factor", "parallel", "ars"},
                 "config");
  ExperimentConfig c;
  take(j, "name", c.name);
  take(j, "environment", c.environment);
  take(j, "spec", c.spec);
  take(j, "k_values", c.k_values);
  take(j, "repetitions", c.repetitions);
  take(j, "seed", c.seed);
  take(j, "output_dir", c.output_dir);
  take(j, "estimate_rollouts", c.dirl.estimate_rollouts);
  take(j, "eval_rollouts", c.dirl.eval_rollouts);
  take(j, "reach_buffer", c.dirl.reach_buffer);
  take(j, "reach_min_successes", c.dirl.reach_min_successes);
  take(j, "reach_rollout_factor", c.dirl.reach_rollout_factor);
  if (j.contains("parallel")) c.dirl.exec = j.at("parallel").get<bool>() ? Exec::Parallel : Exec::Serial;
  if (j.contains("ars")) {
    const json& a = j.at("ars");
    reject_unknown(a, {"step_size", "noise", "directions", "top_directions", "horizon", "hidden", "success_bonus"},
                   "ars");
    take(a, "step_size", c.dirl.ars.step_size);
    take(a, "noise", c.dirl.ars.noise);
    take(a, "directions", c.dirl.ars.directions);
    take(a, "top_directions", c.dirl.ars.top_directions);
    take(a, "horizon", c.dirl.ars.horizon);
    take(a, "hidden", c.dirl.ars.hidden);
    take(a, "success_bonus", c.dirl.ars.success_bonus);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return config_from_json(json::parse(f));
}

fs::path output_root() {
  const char* env = std::getenv("DIRL_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("out");
}

// ---------------------------------------------------------------------------
// CSV

const char* const kCsvHeader = "k,total_steps,success_prob,success_se,cost,certificate,seed,path,status";

namespace {

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_unsigned(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw std::runtime_error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  return static_cast<T>(v);
}

double parse_real(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::string path_string(const std::vector<VertexId>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "-" : "") + std::to_string(vs[i]);
  return s;
}

}  // namespace

std::string format_row(const CurveRow& r) {
  std::ostringstream os;
  os << r.k << ',' << r.total_steps << ',' << real(r.success_prob) << ',' << real(r.success_se) << ','
     << real(r.cost) << ',' << real(r.certificate) << ',' << r.seed << ',' << r.path << ',' << r.status;
  return os.str();
}

std::vector<CurveRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header '" + line + "'");
  std::vector<CurveRow> rows;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::runtime_error("csv line " + std::to_string(n) + ": expected 9 fields");
    CurveRow r;
    r.k = parse_unsigned<std::size_t>(f[0], n);
    r.total_steps = parse_unsigned<std::size_t>(f[1], n);
    r.success_prob = parse_real(f[2], n);
    r.success_se = parse_real(f[3], n);
    r.cost = parse_real(f[4], n);
    r.certificate = parse_real(f[5], n);
    r.seed = parse_unsigned<std::uint64_t>(f[6], n);
    r.path = f[7];
    r.status = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CurveRow> read_csv(const fs::path& file) {
  std::ifstream f(file);
  if (!f) throw std::runtime_error("cannot open " + file.string());
  return parse_csv(f);
}

std::size_t append_rows(const fs::path& file, const std::vector<CurveRow>& rows) {
  std::set<std::pair<std::size_t, std::uint64_t>> seen;
  const bool exists = fs::exists(file) && fs::file_size(file) > 0;
  if (exists)
    for (const CurveRow& r : read_csv(file)) seen.insert({r.k, r.seed});
  std::ofstream out(file, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  if (!exists) out << kCsvHeader << '\n';
  std::size_t added = 0;
  for (const CurveRow& r : rows) {
    if (!seen.insert({r.k, r.seed}).second) continue;
    out << format_row(r) << '\n';
    ++added;
  }
  return added;
}

std::vector<CurvePoint> aggregate(const std::vector<CurveRow>& rows) {
  std::map<std::size_t, std::vector<const CurveRow*>> by_k;
  for (const CurveRow& r : rows) by_k[r.k].push_back(&r);
  std::vector<CurvePoint> pts;
  for (const auto& [k, group] : by_k) {
    CurvePoint p;
    p.k = k;
    p.n = group.size();
    const double n = static_cast<double>(group.size());
    for (const CurveRow* r : group) {
      p.steps_mean += static_cast<double>(r->total_steps) / n;
      p.prob_mean += (r->status == "ok" ? r->success_prob : 0.0) / n;
    }
    for (const CurveRow* r : group) {
      const double ds = static_cast<double>(r->total_steps) - p.steps_mean;
      const double dp = (r->status == "ok" ? r->success_prob : 0.0) - p.prob_mean;
      p.steps_std += ds * ds / n;
      p.prob_std += dp * dp / n;
    }
    p.steps_std = std::sqrt(p.steps_std);
    p.prob_std = std::sqrt(p.prob_std);
    pts.push_back(p);
  }
  return pts;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double xmax = 0.0;
  for (const Series& s : series)
    for (const CurvePoint& p : s.points) xmax = std::max(xmax, p.steps_mean + p.steps_std);
  if (xmax <= 0.0) xmax = 1.0;
  const auto X = [&](double v) { return L + (W - L - R) * v / xmax; };
  const auto Y = [&](double v) { return H - B - (H - T - B) * std::clamp(v, 0.0, 1.0); };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << esc(title) << "</text>\n";
  // axes + ticks
  os << "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
     << "\" y2=\"" << H - B << "\"/><line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\"/></g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    os << "<line x1=\"" << L - 4 << "\" y1=\"" << Y(v) << "\" x2=\"" << L << "\" y2=\"" << Y(v)
       << "\" stroke=\"black\"/><text x=\"" << L - 8 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\">" << v
       << "</text>\n";
    const double xv = xmax * v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", xv);
    os << "<line x1=\"" << X(xv) << "\" y1=\"" << H - B << "\" x2=\"" << X(xv) << "\" y2=\"" << H - B + 4
       << "\" stroke=\"black\"/><text x=\"" << X(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
       << buf << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">steps</text>\n";
  os << "<text transform=\"translate(18," << (T + H - B) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">success probability</text>\n";
  os << "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    os << "<g class=\"series\" data-label=\"" << esc(s.label) << "\">\n";
    if (s.points.size() >= 2) {
      os << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (const CurvePoint& p : s.points) os << X(p.steps_mean) << ',' << Y(p.prob_mean + p.prob_std) << ' ';
      for (auto it = s.points.rbegin(); it != s.points.rend(); ++it)
        os << X(it->steps_mean) << ',' << Y(it->prob_mean - it->prob_std) << ' ';
      os << "\"/>\n";
      os << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (const CurvePoint& p : s.points) os << X(p.steps_mean) << ',' << Y(p.prob_mean) << ' ';
      os << "\"/>\n";
    }
    for (const CurvePoint& p : s.points)
      os << "<circle class=\"marker\" cx=\"" << X(p.steps_mean) << "\" cy=\"" << Y(p.prob_mean) << "\" r=\"3\" fill=\""
         << color << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(si);
    os << "<text x=\"" << W - R - 8 << "\" y=\"" << ly + 10
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
       << esc(s.label) << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Runs

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string checkpoint_name(const AbstractGraph& g, EdgeId e) {
  return "edge_" + std::to_string(g.edge(e).from) + "_" + std::to_string(g.edge(e).to) + ".policy";
}

}  // namespace

RunRecord run_once(const ExperimentConfig& cfg, std::size_t k, std::uint64_t seed, const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const RoomsLayout layout = resolve_layout(cfg.environment);
  const RoomsEnv env(layout);
  const Spec phi = resolve_spec(cfg.spec, env.predicates());
  const AbstractGraph g = compile(phi);

  DirlConfig dc = cfg.dirl;
  dc.ars.episodes = k;
  dc.seed = seed;

  fs::create_directories(dir);
  write_text(dir / "graph.txt", to_text(g));
  write_text(dir / "graph.dot", to_dot(g));

  RunRecord rec;
  rec.dir = dir;
  rec.row.k = k;
  rec.row.seed = seed;
  json& m = rec.manifest;
  m["k"] = k;
  m["seed"] = seed;
  m["spec"] = to_string(phi);
  m["layout"] = serialize_layout(layout);
  m["config"] = to_json(cfg);
  m["graph"] = {{"vertices", g.num_vertices()}, {"edges", g.num_edges()}, {"dump", "graph.txt"}};

  try {
    const DirlResult res = run_dirl(g, env, dc);
    const DirlReport& rep = res.report;
    const Evaluation ev =
        evaluate_policy(res.policy, env, dc.ars.horizon, dc.eval_rollouts, derive_seed(seed, {4}), dc.exec);
    const BoundCheck bc = check_certificate(ev, rep);

    json edges = json::array();
    for (const EdgeReport& er : rep.edges) {
      const std::string ck = checkpoint_name(g, er.edge);
      save_policy_file((dir / ck).string(), res.trained.at(er.edge));
      edges.push_back({{"edge", er.edge},
                       {"from", er.from},
                       {"to", er.to},
                       {"prob", er.prob},
                       {"successes", er.successes},
                       {"trials", er.trials},
                       {"train_steps", er.train_steps},
                       {"train_episodes", er.train_episodes},
                       {"estimate_steps", er.estimate_steps},
                       {"checkpoint", ck}});
    }
    m["edges"] = edges;
    m["path"] = {{"vertices", rep.path_vertices}, {"edges", rep.path_edges}};
    m["processed_order"] = rep.processed_order;
    m["cost"] = rep.cost;
    m["certificate"] = rep.certificate;
    m["certificate_se"] = rep.certificate_se;
    m["steps"] = {{"train", rep.steps.train},
                  {"estimate", rep.steps.estimate},
                  {"reach", rep.steps.reach},
                  {"total", rep.steps.total()}};
    m["evaluation"] = {{"success_prob", ev.success_prob},
                       {"success_se", ev.success_se},
                       {"rollouts", ev.rollouts},
                       {"completed", ev.completed},
                       {"greedy_violations", ev.greedy_violations}};
    m["certificate_check"] = {{"bound", bc.bound}, {"slack", bc.slack}, {"holds", bc.holds}};
    m["status"] = "ok";

    rec.row.total_steps = rep.steps.total();
    rec.row.success_prob = ev.success_prob;
    rec.row.success_se = ev.success_se;
    rec.row.cost = rep.cost;
    rec.row.certificate = rep.certificate;
    rec.row.path = path_string(rep.path_vertices);
  } catch (const PlannerFailure& e) {
    m["status"] = "failed";
    m["error"] = e.what();
    rec.row.status = "failed";
    rec.row.cost = std::numeric_limits<double>::infinity();
    rec.row.certificate = 0.0;
    rec.row.path = "none";
  }
  m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text(dir / "manifest.json", m.dump(2) + "\n");
  return rec;
}

SweepSummary run_experiment(const ExperimentConfig& cfg, const fs::path& root, std::ostream* log) {
  cfg.validate();
  const fs::path base = root / cfg.output_dir / cfg.name;
  fs::create_directories(base);
  write_text(base / "config.json", to_json(cfg).dump(2) + "\n");
  SweepSummary sum;
  sum.csv = base / "curve.csv";

  std::set<std::pair<std::size_t, std::uint64_t>> done;
  if (fs::exists(sum.csv) && fs::file_size(sum.csv) > 0)
    for (const CurveRow& r : read_csv(sum.csv)) done.insert({r.k, r.seed});

  for (std::size_t k : cfg.k_values) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      const std::uint64_t seed = cfg.run_seed(k, rep);
      if (done.count({k, seed})) {
        ++sum.skipped;
        continue;
      }
      const fs::path dir = base / "runs" / ("k" + std::to_string(k) + "_r" + std::to_string(rep));
      RunRecord rec = run_once(cfg, k, seed, dir);
      append_rows(sum.csv, {rec.row});
      ++sum.executed;
      if (rec.row.status != "ok") ++sum.failed;
      if (log)
        *log << "k=" << k << " rep=" << rep << " status=" << rec.row.status << " steps=" << rec.row.total_steps
             << " success=" << real(rec.row.success_prob) << " cert=" << real(rec.row.certificate) << '\n';
    }
  }
  return sum;
}

PathPolicy load_run_policy(const fs::path& run_dir) {
  std::ifstream f(run_dir / "manifest.json");
  if (!f) throw std::runtime_error("no manifest in " + run_dir.string());
  const json m = json::parse(f);
  if (m.at("status") != "ok") throw std::runtime_error("run " + run_dir.string() + " did not complete");
  const RoomsEnv env(parse_layout(m.at("layout").get<std::string>()));
  const AbstractGraph g = compile(parse_spec(m.at("spec").get<std::string>(), env.predicates()));
  PathPolicy pp{g, m.at("path").at("vertices").get<std::vector<VertexId>>(),
                m.at("path").at("edges").get<std::vector<EdgeId>>(),
                {}};
  for (EdgeId e : pp.edges) pp.policies.push_back(load_policy_file((run_dir / checkpoint_name(g, e)).string()));
  return pp;
}

Evaluation evaluate_run(const fs::path& run_dir, std::size_t rollouts, std::uint64_t seed) {
  std::ifstream f(run_dir / "manifest.json");
  if (!f) throw std::runtime_error("no manifest in " + run_dir.string());
  const json m = json::parse(f);
  const RoomsEnv env(parse_layout(m.at("layout").get<std::string>()));
  const PathPolicy pp = load_run_policy(run_dir);
  const std::size_t horizon = m.at("config").at("ars").at("horizon").get<std::size_t>();
  return evaluate_policy(pp, env, horizon, rollouts, seed);
}

}  // namespace dirl
