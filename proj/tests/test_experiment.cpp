#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "dirl/experiment.hpp"

using namespace dirl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dirl_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Runs the CLI, returns (exit status, stdout).
std::pair<int, std::string> cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "dirl_cli_out.txt";
  const std::string cmd = std::string("\"") + DIRL_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), slurp(out)};
}

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.name = "tiny";
  c.environment = "rooms9";
  c.spec = "reach(0,1)";
  c.dirl.ars.directions = 4;
  c.dirl.ars.top_directions = 2;
  c.dirl.ars.hidden = 4;
  c.dirl.estimate_rollouts = 20;
  c.dirl.reach_buffer = 20;
  c.dirl.reach_min_successes = 5;
  c.dirl.eval_rollouts = 40;
  c.k_values = {16, 32};
  c.repetitions = 2;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_CASE("experiment config json round trip") {
  ExperimentConfig c = tiny();
  c.dirl.exec = Exec::Serial;
  c.dirl.ars.step_size = 0.125;
  const ExperimentConfig d = config_from_json(to_json(c));
  CHECK(to_json(d) == to_json(c));
  CHECK(d.k_values == c.k_values);
  CHECK(d.dirl.exec == Exec::Serial);
  CHECK(d.dirl.ars.step_size == 0.125);

  const ExperimentConfig partial = config_from_json(nlohmann::json{{"name", "x"}});
  CHECK(partial.name == "x");
  CHECK(partial.dirl.ars.directions == 30);
  CHECK_THROWS(config_from_json(nlohmann::json{{"nmae", "x"}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"ars", {{"stepsize", 1}}}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"k_values", {10}}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"repetitions", 0}}));
  CHECK(c.run_seed(16, 0) != c.run_seed(16, 1));
  CHECK(c.run_seed(16, 0) != c.run_seed(32, 0));
  CHECK(c.run_seed(16, 0) == tiny().run_seed(16, 0));
}

TEST_CASE("curve csv format and parse") {
  CurveRow r{3000, 123456, 0.9375, 0.0076, 0.25, std::exp(-0.25), 17, "0-1-3", "ok"};
  CurveRow f{6000, 0, 0.0, 0.0, INFINITY, 0.0, 18, "none", "failed"};
  std::stringstream ss;
  ss << kCsvHeader << '\n' << format_row(r) << '\n' << format_row(f) << '\n';
  CHECK(ss.str().find("3000,123456,0.9375,0.0076,0.25,") != std::string::npos);
  CHECK(format_row(f) == "6000,0,0,0,inf,0,18,none,failed");
  const auto rows = parse_csv(ss);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == f);
  CHECK(rows[0].k == r.k);
  CHECK(rows[0].certificate == doctest::Approx(r.certificate).epsilon(1e-9));
  std::stringstream bad("k,total_steps\n1,2\n");
  CHECK_THROWS(parse_csv(bad));
  std::stringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  CHECK_THROWS(parse_csv(short_row));
}

TEST_CASE("append rows is idempotent on (k, seed)") {
  const fs::path dir = scratch("append");
  const fs::path file = dir / "curve.csv";
  const std::vector<CurveRow> rows{{10, 1, 0.5, 0.1, 1, 0.3, 1, "0-1", "ok"}, {10, 2, 0.5, 0.1, 1, 0.3, 2, "0-1", "ok"}};
  CHECK(append_rows(file, rows) == 2);
  const std::string once = slurp(file);
  CHECK(append_rows(file, rows) == 0);
  CHECK(slurp(file) == once);
  CHECK(append_rows(file, {{20, 1, 0.5, 0.1, 1, 0.3, 1, "0-1", "ok"}}) == 1);
  CHECK(read_csv(file).size() == 3);
}

TEST_CASE("aggregate: mean and population std per k") {
  std::vector<CurveRow> rows{{20, 100, 0.5, 0, 0, 0, 1, "0-1", "ok"},
                             {10, 10, 1.0, 0, 0, 0, 1, "0-1", "ok"},
                             {20, 300, 0.9, 0, 0, 0, 2, "0-1", "ok"},
                             {20, 200, 0.7, 0, INFINITY, 0, 3, "none", "failed"}};
  rows[3].success_prob = 0.7;  // failed rows are counted as 0 regardless
  const auto pts = aggregate(rows);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].k == 10);
  CHECK(pts[0].steps_std == 0.0);
  CHECK(pts[1].n == 3);
  CHECK(pts[1].steps_mean == doctest::Approx(200));
  CHECK(pts[1].steps_std == doctest::Approx(std::sqrt(20000.0 / 3)));
  CHECK(pts[1].prob_mean == doctest::Approx(1.4 / 3));
  const double m = 1.4 / 3;
  CHECK(pts[1].prob_std ==
        doctest::Approx(std::sqrt(((0.5 - m) * (0.5 - m) + (0.9 - m) * (0.9 - m) + m * m) / 3)));
}

TEST_CASE("svg rendering") {
  const Series one{"a", {{10, 1, 100, 0, 0.5, 0}}};
  const std::string s1 = render_svg({one}, "t");
  CHECK(s1.rfind("<svg", 0) == 0);
  CHECK(s1.find("class=\"marker\"") != std::string::npos);
  CHECK(s1.find("class=\"band\"") == std::string::npos);
  const Series two{"b", {{10, 2, 100, 10, 0.5, 0.1}, {20, 2, 300, 20, 0.8, 0.1}}};
  const std::string s2 = render_svg({one, two});
  CHECK(s2.find("class=\"mean\"") != std::string::npos);
  CHECK(s2.find("class=\"band\"") != std::string::npos);
  CHECK(s2.find(">b<") != std::string::npos);
  CHECK(s2.find("</svg>") != std::string::npos);
}

TEST_CASE("spec presets match the data files and compile") {
  const RoomsEnv e9(*preset_layout("rooms9")), e16(*preset_layout("rooms16_open"));
  CHECK(preset_spec_ids().size() == 11);
  for (const auto& id : preset_spec_ids()) {
    INFO(id);
    const std::string text = *preset_spec(id);
    CHECK(slurp(fs::path(DIRL_SOURCE_DIR) / "data/specs" / preset_spec_file(id)) == text);
    const RoomsEnv& env = id.rfind("rooms16", 0) == 0 ? e16 : e9;
    CHECK_NOTHROW(compile(resolve_spec(id, env.predicates())));
  }
  CHECK(preset_spec_file("rooms16/phi3") == "rooms16_phi3.spec");
  CHECK_FALSE(preset_spec("rooms9/phi9").has_value());
  CHECK_THROWS(resolve_layout("no_such_layout_file.cfg"));
}

TEST_CASE("cli: compile") {
  auto [rc, out] = cli("compile rooms16/phi5");
  CHECK(rc == 0);
  CHECK(out.find("edges 16\n") != std::string::npos);
  std::tie(rc, out) = cli("compile 'achieve reach(1,1)'");
  CHECK(rc == 0);
  CHECK(out.rfind("vertices 2\nedges 1\n", 0) == 0);
  std::tie(rc, out) = cli("compile 'achieve reach(1,1)' --dot");
  CHECK(out.find("digraph") != std::string::npos);
  std::tie(rc, out) = cli("compile 'reach(1,1) ;'");
  CHECK(rc == 1);
}

TEST_CASE("sweep: artifacts, determinism, resume") {
  const fs::path root = scratch("sweep");
  const ExperimentConfig c = tiny();
  std::stringstream log;
  const SweepSummary a = run_experiment(c, root, &log);
  CHECK(a.executed == 4);
  CHECK(a.skipped == 0);
  const auto rows = read_csv(a.csv);
  REQUIRE(rows.size() == 4);
  const fs::path run_dir = root / c.output_dir / c.name / "runs" / "k16_r0";
  for (const char* f : {"manifest.json", "graph.txt", "graph.dot"}) CHECK(fs::exists(run_dir / f));
  CHECK(fs::exists(root / c.output_dir / c.name / "config.json"));
  const auto manifest = nlohmann::json::parse(slurp(run_dir / "manifest.json"));
  CHECK(manifest.contains("wall_time_s"));
  CHECK(manifest.at("k") == 16);
  if (rows[0].status == "ok") {
    CHECK(fs::exists(run_dir / "edge_0_1.policy"));
    const Evaluation ev = evaluate_run(run_dir, 50, 1);
    CHECK(ev.rollouts == 50);
    CHECK(ev.greedy_violations == 0);
  }

  const std::string first = slurp(a.csv);
  const SweepSummary b = run_experiment(c, root, &log);
  CHECK(b.executed == 0);
  CHECK(b.skipped == 4);
  CHECK(slurp(a.csv) == first);

  // A fresh root reproduces the same curve bit for bit.
  const fs::path other = scratch("sweep2");
  const SweepSummary d = run_experiment(c, other, &log);
  CHECK(slurp(d.csv) == first);
}

TEST_CASE("shipped configs load") {
  for (const auto& f : fs::directory_iterator(fs::path(DIRL_SOURCE_DIR) / "configs")) {
    INFO(f.path().string());
    const ExperimentConfig c = load_experiment_config(f.path().string());
    CHECK(c.k_values.size() == 6);
    const RoomsEnv env(resolve_layout(c.environment));
    CHECK_NOTHROW(compile(resolve_spec(c.spec, env.predicates())));
  }
}
