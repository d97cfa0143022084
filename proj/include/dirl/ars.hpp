#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dirl/graph.hpp"
#include "dirl/rng.hpp"
#include "dirl/rooms.hpp"

namespace dirl {

/// Running mean / variance of observations (Chan et al. parallel update).
class ObsNormalizer {
 public:
  explicit ObsNormalizer(std::size_t dim = 2) : mean_(dim, 0.0), m2_(dim, 0.0) {}

  void push(std::span<const double> x);
  void merge(const ObsNormalizer& other);

  std::size_t dim() const { return mean_.size(); }
  double count() const { return count_; }
  const std::vector<double>& mean() const { return mean_; }
  /// Population variance per coordinate.
  std::vector<double> variance() const;
  /// Identity when empty; otherwise (x - mean) / max(std, 1e-8).
  void normalize(std::span<const double> x, std::span<double> out) const;

  /// Sum of squared deviations from the mean.
  const std::vector<double>& m2() const { return m2_; }
  static ObsNormalizer from_raw(double count, std::vector<double> mean, std::vector<double> m2);

  bool operator==(const ObsNormalizer&) const = default;

 private:
  double count_ = 0.0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// Fully connected tanh network: in -> hidden -> hidden -> out, outputs
/// squashed by tanh and mapped to [0, v_max] x [-pi, pi].
struct PolicyParams {
  std::size_t input_dim = 2;
  std::size_t hidden = 30;
  std::size_t output_dim = 2;
  std::vector<double> values;

  static std::size_t size_for(std::size_t in, std::size_t hidden, std::size_t out);
  static PolicyParams zeros(std::size_t in = 2, std::size_t hidden = 30, std::size_t out = 2);
  /// Hidden weights ~ N(0, 1/fan_in), biases and output layer zero, so the
  /// initial action is still the mid-range one.
  static PolicyParams initial(std::size_t in, std::size_t hidden, std::size_t out, std::uint64_t seed);

  /// Raw tanh outputs in [-1, 1].
  void forward(std::span<const double> input, std::span<double> output) const;

  bool operator==(const PolicyParams&) const = default;
};

/// Trained edge controller: network + frozen observation statistics.
struct EdgePolicy {
  PolicyParams params = PolicyParams::zeros();
  ObsNormalizer normalizer;
  double max_speed = 0.25;

  Action act(const State& s) const;

  bool operator==(const EdgePolicy&) const = default;
};

/// act() for an explicit parameter vector.
Action act(const PolicyParams& params, const ObsNormalizer& norm, const State& s, double max_speed);

void save_policy(std::ostream& os, const EdgePolicy& p);
EdgePolicy load_policy(std::istream& is);
void save_policy_file(const std::string& path, const EdgePolicy& p);
EdgePolicy load_policy_file(const std::string& path);

struct ArsConfig {
  double step_size = 0.3;
  double noise = 0.05;
  std::size_t directions = 30;
  std::size_t top_directions = 15;
  /// Episode budget k; one iteration spends 2 * directions episodes.
  std::size_t episodes = 3000;
  std::size_t horizon = 20;
  std::size_t hidden = 30;
  /// Terminal bonus added to the shaped return when the edge is achieved.
  double success_bonus = 10.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument.
  void validate() const;
  std::size_t iterations() const { return episodes / (2 * directions); }
};

/// Initial-state distribution eta_u: environment reset when the buffer is
/// empty, otherwise uniform with replacement over the buffer.
struct StartDistribution {
  const RoomsEnv* env = nullptr;
  std::vector<State> buffer;

  State sample(Rng& rng) const;
  bool is_reset() const { return buffer.empty(); }
};

enum class Exec { Serial, Parallel };

struct EpisodeOutcome {
  double shaped_return = 0.0;
  bool achieved = false;
  std::size_t steps = 0;
  /// States on which the policy was queried.
  std::vector<State> observed;
};

/// One edge episode of at most `horizon` steps, terminated on achievement.
EpisodeOutcome run_edge_episode(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const PolicyParams& params,
                                const ObsNormalizer& norm, const StartDistribution& start, std::size_t horizon,
                                double bonus, Rng& rng, bool record_observations = true);

/// Antithetic evaluations of one ARS iteration: returns[2*i] for +delta_i,
/// returns[2*i+1] for -delta_i.
struct DirectionBatch {
  std::vector<std::vector<double>> deltas;
  std::vector<double> returns;
  std::vector<std::size_t> steps;
  std::vector<std::vector<State>> observed;
};

DirectionBatch evaluate_directions(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const PolicyParams& params,
                                   const ObsNormalizer& norm, const StartDistribution& start, const ArsConfig& cfg,
                                   std::size_t iteration, Exec exec);

/// theta += alpha / (b * sigma_R) * sum_top (r+ - r-) delta over the b best
/// directions ranked by max(r+, r-).
void ars_update(std::vector<double>& theta, const std::vector<std::vector<double>>& deltas,
                std::span<const double> r_plus, std::span<const double> r_minus, double step_size,
                std::size_t top_directions);

struct LearnResult {
  EdgePolicy policy;
  std::size_t steps = 0;
  std::size_t episodes = 0;
};

/// Augmented random search (V2-t) on the shaped return of edge e.
LearnResult learn_edge_policy(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const StartDistribution& start,
                              const ArsConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace dirl
