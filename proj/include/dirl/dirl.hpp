#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirl/ars.hpp"
#include "dirl/graph.hpp"
#include "dirl/rooms.hpp"

namespace dirl {

/// No unprocessed vertex is reachable with the trained policies.
class PlannerFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reach distribution of a path could not collect enough samples.
class EdgeStarvation : public PlannerFailure {
 public:
  EdgeStarvation(const std::string& msg, EdgeId edge) : PlannerFailure(msg), edge_(edge) {}
  EdgeId edge() const { return edge_; }

 private:
  EdgeId edge_;
};

/// c(rho) = -sum log P(e_j). Throws ContractViolation for P outside (0, 1].
double path_cost(std::span<const double> probs);

/// A discovered path u0 -> ... -> u with the edge probabilities it was
/// costed with.
struct PathEntry {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  std::vector<double> probs;
  double cost = 0.0;

  VertexId end() const { return vertices.back(); }
  PathEntry extended(EdgeId e, VertexId to, double p) const;
};

/// Bookkeeping of the lazy Dijkstra loop.
struct PlannerState {
  std::vector<char> processed;
  std::vector<std::vector<PathEntry>> gamma;
  std::vector<VertexId> processed_order;
  std::vector<EdgeId> trained;
  std::map<EdgeId, double> edge_prob;

  explicit PlannerState(const AbstractGraph& g);
};

/// argmin over unprocessed vertices of the cheapest path in Gamma_u; ties by
/// smallest id. Throws PlannerFailure when no candidate exists.
VertexId nearest_vertex(const PlannerState& state, const AbstractGraph& g);
/// Cheapest stored path; ties by fewer edges, then lexicographic vertex ids.
const PathEntry& shortest_path(std::span<const PathEntry> gamma);

/// Callbacks the planner uses for ReachDistribution and LearnPolicy +
/// cost estimation.
struct PlannerHooks {
  /// Called for every non-final vertex before its outgoing edges are trained.
  std::function<void(VertexId, const PathEntry&)> prepare_vertex;
  /// Trains the policy of edge e (source vertex prepared) and returns its
  /// estimated success probability in (0, 1].
  std::function<double(EdgeId)> learn_edge;
};

struct PlanResult {
  PathEntry path;
  PlannerState state;
};

/// Lazy Dijkstra loop over the abstract graph.
PlanResult lazy_dijkstra(const AbstractGraph& g, const PlannerHooks& hooks);

// ---------------------------------------------------------------------------

/// Stateless description of a path policy pi_rho.
struct PathPolicy {
  AbstractGraph graph;
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;
  std::vector<EdgePolicy> policies;
};

/// Executes a PathPolicy: runs the active edge policy until that edge is
/// achieved, then advances.
class PathPolicyRunner {
 public:
  explicit PathPolicyRunner(const PathPolicy& policy);

  /// Feeds the current state; returns true once every edge is achieved.
  bool observe(const State& s);
  Action act(const State& s) const;

  bool done() const { return active_ == policy_->edges.size(); }
  std::size_t active_edge() const { return active_; }
  /// Steps spent on the active edge so far.
  std::size_t steps_on_active() const { return steps_on_active_; }
  /// Trajectory indices i_1 < i_2 < ... at which edges were achieved.
  const std::vector<std::size_t>& achievement_indices() const { return hits_; }

 private:
  const PathPolicy* policy_;
  std::size_t active_ = 0;
  std::optional<EdgeTracker> tracker_;
  std::size_t index_ = 0;
  std::size_t steps_on_active_ = 0;
  std::vector<std::size_t> hits_;
};

struct DirlConfig {
  ArsConfig ars;
  /// Monte Carlo rollouts M per edge-cost estimate.
  std::size_t estimate_rollouts = 200;
  std::size_t reach_buffer = 500;
  std::size_t reach_min_successes = 50;
  std::size_t reach_rollout_factor = 20;
  std::size_t eval_rollouts = 1000;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;

  void validate() const;
};

struct EdgeReport {
  EdgeId edge = 0;
  VertexId from = 0;
  VertexId to = 0;
  double prob = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  std::size_t train_steps = 0;
  std::size_t train_episodes = 0;
  std::size_t estimate_steps = 0;
};

struct StepCounts {
  std::size_t train = 0;
  std::size_t estimate = 0;
  std::size_t reach = 0;
  std::size_t total() const { return train + estimate + reach; }
};

struct DirlReport {
  std::vector<EdgeReport> edges;
  std::vector<VertexId> path_vertices;
  std::vector<EdgeId> path_edges;
  std::vector<VertexId> processed_order;
  double cost = 0.0;
  /// exp(-cost): lower bound on the satisfaction probability.
  double certificate = 1.0;
  /// Delta-method standard error of the certificate.
  double certificate_se = 0.0;
  StepCounts steps;
};

struct DirlResult {
  PathPolicy policy;
  DirlReport report;
  /// Every trained edge policy, including edges off the chosen path.
  std::map<EdgeId, EdgePolicy> trained;
};

/// Monte Carlo estimate of P(trial succeeds), clamped to [1/(2M), 1].
struct ProbabilityEstimate {
  double value = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};
ProbabilityEstimate estimate_success_probability(const std::function<bool(Rng&)>& trial, std::size_t rollouts,
                                                 std::uint64_t seed, Exec exec = Exec::Serial);

/// P(e; pi_e, eta_u) by M sparse-indicator rollouts of `horizon` steps.
struct EdgeEstimate {
  ProbabilityEstimate prob;
  std::size_t steps = 0;
};
EdgeEstimate estimate_edge_prob(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const EdgePolicy& policy,
                                const StartDistribution& start, std::size_t horizon, std::size_t rollouts,
                                std::uint64_t seed, Exec exec = Exec::Parallel);

/// Empirical eta_rho: states at which the path policy achieves the last
/// edge of `path` (each edge limited to `horizon` steps), from env resets.
struct ReachSample {
  StartDistribution dist;
  std::size_t rollouts = 0;
  std::size_t steps = 0;
};
ReachSample reach_distribution(const RoomsEnv& env, const PathPolicy& path, std::size_t horizon,
                               std::size_t buffer_size, std::size_t min_successes, std::size_t max_rollouts,
                               std::uint64_t seed);

/// Full DiRL run on the rooms environment.
DirlResult run_dirl(const AbstractGraph& g, const RoomsEnv& env, const DirlConfig& cfg);

struct Evaluation {
  double success_prob = 0.0;
  double success_se = 0.0;
  std::size_t rollouts = 0;
  /// Rollouts where the path policy completed but satisfies_graph failed.
  std::size_t greedy_violations = 0;
  std::size_t completed = 0;
  std::size_t steps = 0;
};

/// Closed-loop satisfaction probability with horizon m * |path| + 2m.
Evaluation evaluate_policy(const PathPolicy& policy, const RoomsEnv& env, std::size_t horizon_per_edge,
                           std::size_t rollouts, std::uint64_t seed, Exec exec = Exec::Parallel);

/// One closed-loop rollout of a path policy.
Trajectory rollout_path_policy(const RoomsEnv& env, const State& s0, std::size_t steps, PathPolicyRunner& runner);

struct BoundCheck {
  double lhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool holds = false;
};
/// success >= exp(-cost) - 3 (success SE + certificate SE).
BoundCheck check_certificate(const Evaluation& eval, const DirlReport& report);

}  // namespace dirl
