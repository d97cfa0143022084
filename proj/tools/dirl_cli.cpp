// dirl: compile specs, run DiRL sweeps, evaluate runs, plot learning curves.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dirl/experiment.hpp"

namespace fs = std::filesystem;
using namespace dirl;

namespace {

std::string read_spec_source(const std::string& src) {
  if (preset_spec(src)) return *preset_spec(src);
  std::error_code ec;
  if (fs::is_regular_file(src, ec)) {
    std::ifstream f(src);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  return src;
}

std::string default_env_for(const std::string& spec) {
  return spec.rfind("rooms16", 0) == 0 ? "rooms16_open" : "rooms9";
}

int cmd_compile(const std::string& source, std::string env_name, bool dot) {
  if (env_name.empty()) env_name = default_env_for(source);
  const RoomsEnv env(resolve_layout(env_name));
  const std::string text = read_spec_source(source);
  try {
    const AbstractGraph g = compile(parse_spec(text, env.predicates()));
    std::cout << (dot ? to_dot(g) : to_text(g));
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << '\n';
    return 1;
  }
  return 0;
}

struct RunOverrides {
  std::string config;
  std::string name, env, spec, output_dir;
  std::vector<std::size_t> k;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t eval_rollouts = 0;
  bool serial = false;
};

int cmd_run(const RunOverrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_experiment_config(o.config);
  if (!o.name.empty()) cfg.name = o.name;
  if (!o.env.empty()) cfg.environment = o.env;
  if (!o.spec.empty()) cfg.spec = o.spec;
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (!o.k.empty()) cfg.k_values = o.k;
  if (o.reps) cfg.repetitions = o.reps;
  if (o.seed_set) cfg.seed = o.seed;
  if (o.eval_rollouts) cfg.dirl.eval_rollouts = o.eval_rollouts;
  if (o.serial) cfg.dirl.exec = Exec::Serial;
  const SweepSummary s = run_experiment(cfg, output_root(), &std::cerr);
  std::cout << "csv " << s.csv.string() << "\nexecuted " << s.executed << "\nskipped " << s.skipped << "\nfailed "
            << s.failed << '\n';
  return s.failed == 0 ? 0 : 2;
}

int cmd_eval(const std::string& run_dir, std::size_t rollouts, std::uint64_t seed) {
  const Evaluation ev = evaluate_run(run_dir, rollouts, seed);
  nlohmann::json j = {{"success_prob", ev.success_prob},
                      {"success_se", ev.success_se},
                      {"rollouts", ev.rollouts},
                      {"completed", ev.completed},
                      {"greedy_violations", ev.greedy_violations}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out, const std::string& title) {
  std::vector<Series> series;
  for (const auto& c : csvs) series.push_back({fs::path(c).parent_path().filename().string(), aggregate(read_csv(c))});
  if (series.size() == 1 && series[0].label.empty()) series[0].label = fs::path(csvs[0]).stem().string();
  const std::string svg = render_svg(series, title);
  if (out == "-") {
    std::cout << svg;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << svg;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositional RL from task specifications"};
  app.require_subcommand(1);

  std::string source, env_name;
  bool dot = false;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a spec (preset id, file or DSL text) to its abstract graph");
  compile_cmd->add_option("spec", source, "Spec preset id, file, or DSL text")->required();
  compile_cmd->add_option("--env", env_name, "Environment preset or layout file for predicate geometry");
  compile_cmd->add_flag("--dot", dot, "Emit Graphviz instead of the text listing");

  RunOverrides ro;
  auto* run_cmd = app.add_subcommand("run", "Run a DiRL budget sweep; rows already in the CSV are skipped");
  run_cmd->add_option("-c,--config", ro.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--name", ro.name);
  run_cmd->add_option("--env", ro.env);
  run_cmd->add_option("--spec", ro.spec);
  run_cmd->add_option("--output-dir", ro.output_dir, "Relative to $DIRL_OUTPUT_ROOT (default ./out)");
  run_cmd->add_option("-k,--k", ro.k, "Per-edge episode budgets")->delimiter(',');
  run_cmd->add_option("--reps", ro.reps);
  run_cmd->add_option("--seed", ro.seed)->each([&](const std::string&) { ro.seed_set = true; });
  run_cmd->add_option("--eval-rollouts", ro.eval_rollouts);
  run_cmd->add_flag("--serial", ro.serial, "Disable OpenMP kernels");

  std::string run_dir;
  std::size_t rollouts = 1000;
  std::uint64_t eval_seed = 1;
  auto* eval_cmd = app.add_subcommand("eval", "Re-evaluate a finished run directory");
  eval_cmd->add_option("run_dir", run_dir)->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("-n,--rollouts", rollouts);
  eval_cmd->add_option("--seed", eval_seed);

  std::vector<std::string> csvs;
  std::string out = "curve.svg", title;
  auto* plot_cmd = app.add_subcommand("plot", "Render learning curves (one series per CSV) to SVG");
  plot_cmd->add_option("csv", csvs)->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("-o,--output", out, "SVG path or - for stdout");
  plot_cmd->add_option("--title", title);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile_cmd) return cmd_compile(source, env_name, dot);
    if (*run_cmd) return cmd_run(ro);
    if (*eval_cmd) return cmd_eval(run_dir, rollouts, eval_seed);
    if (*plot_cmd) return cmd_plot(csvs, out, title);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
