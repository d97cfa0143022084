#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dirl/dirl.hpp"

namespace dirl {

// ---------------------------------------------------------------------------
// Spec presets ("rooms9/phi1".."phi5", "rooms9/phi_ex", "rooms16/phi1".."phi5")

std::optional<std::string> preset_spec(std::string_view id);
std::vector<std::string> preset_spec_ids();
/// data/specs file name of a preset, e.g. "rooms16_phi3.spec".
std::string preset_spec_file(std::string_view id);

/// Preset id or DSL text.
Spec resolve_spec(const std::string& text_or_id, const PredicateRegistry& registry);
/// Preset name or path to a layout file.
RoomsLayout resolve_layout(const std::string& name_or_path);

// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string name = "run";
  std::string environment = "rooms9";
  std::string spec = "rooms9/phi_ex";
  DirlConfig dirl;
  std::vector<std::size_t> k_values{3000};
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  /// Relative to the output root.
  std::string output_dir = "runs";

  /// Throws std::invalid_argument.
  void validate() const;
  /// Seed of repetition `rep` at budget k.
  std::uint64_t run_seed(std::size_t k, std::size_t rep) const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

/// $DIRL_OUTPUT_ROOT if set, else "out".
std::filesystem::path output_root();

// ---------------------------------------------------------------------------
// Learning-curve CSV

struct CurveRow {
  std::size_t k = 0;
  std::size_t total_steps = 0;
  double success_prob = 0.0;
  double success_se = 0.0;
  double cost = 0.0;
  double certificate = 0.0;
  std::uint64_t seed = 0;
  std::string path;
  std::string status = "ok";

  bool operator==(const CurveRow&) const = default;
};

extern const char* const kCsvHeader;

std::string format_row(const CurveRow& row);
/// Throws std::runtime_error on header or field mismatch.
std::vector<CurveRow> parse_csv(std::istream& is);
std::vector<CurveRow> read_csv(const std::filesystem::path& file);
/// Appends rows whose (k, seed) is not already present; returns how many.
std::size_t append_rows(const std::filesystem::path& file, const std::vector<CurveRow>& rows);

struct CurvePoint {
  std::size_t k = 0;
  std::size_t n = 0;
  double steps_mean = 0.0;
  double steps_std = 0.0;
  double prob_mean = 0.0;
  double prob_std = 0.0;
};

/// Mean and population std per k (ascending); failed rows count as success 0.
std::vector<CurvePoint> aggregate(const std::vector<CurveRow>& rows);

struct Series {
  std::string label;
  std::vector<CurvePoint> points;
};

/// Static learning-curve plot: mean line with a +-1 std band.
std::string render_svg(const std::vector<Series>& series, const std::string& title = "");

// ---------------------------------------------------------------------------
// Runs

struct RunRecord {
  CurveRow row;
  nlohmann::json manifest;
  std::filesystem::path dir;
};

/// One DiRL run at budget k and seed, with evaluation and artifacts written
/// under `dir`. Planner failures produce a row with status "failed".
RunRecord run_once(const ExperimentConfig& cfg, std::size_t k, std::uint64_t seed, const std::filesystem::path& dir);

struct SweepSummary {
  std::size_t executed = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  std::filesystem::path csv;
};

/// Runs every (k, repetition) not yet in the CSV.
SweepSummary run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& root, std::ostream* log = nullptr);

/// Re-evaluates a finished run directory.
Evaluation evaluate_run(const std::filesystem::path& run_dir, std::size_t rollouts, std::uint64_t seed);
PathPolicy load_run_policy(const std::filesystem::path& run_dir);

}  // namespace dirl
