#include "dirl/dirl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dirl {

double path_cost(std::span<const double> probs) {
  double c = 0.0;
  for (double p : probs) {
    if (!(p > 0.0 && p <= 1.0)) throw ContractViolation("path_cost: edge probability outside (0, 1]");
    c -= std::log(p);
  }
  return c;
}

PathEntry PathEntry::extended(EdgeId e, VertexId to, double p) const {
  PathEntry r = *this;
  r.vertices.push_back(to);
  r.edges.push_back(e);
  r.probs.push_back(p);
  r.cost = path_cost(r.probs);
  return r;
}

PlannerState::PlannerState(const AbstractGraph& g) : processed(g.num_vertices(), 0), gamma(g.num_vertices()) {}

namespace {

bool path_less(const PathEntry& a, const PathEntry& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
  return a.vertices < b.vertices;
}

}  // namespace

const PathEntry& shortest_path(std::span<const PathEntry> gamma) {
  if (gamma.empty()) throw ContractViolation("shortest_path: no stored path");
  return *std::min_element(gamma.begin(), gamma.end(), path_less);
}

VertexId nearest_vertex(const PlannerState& state, const AbstractGraph& g) {
  VertexId best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    if (state.processed[u] || state.gamma[u].empty()) continue;
    const double c = shortest_path(state.gamma[u]).cost;
    if (best < 0 || c < best_cost) {
      best = static_cast<VertexId>(u);
      best_cost = c;
    }
  }
  if (best < 0) throw PlannerFailure("no final vertex is reachable from the initial vertex");
  return best;
}

PlanResult lazy_dijkstra(const AbstractGraph& g, const PlannerHooks& hooks) {
  PlannerState state(g);
  PathEntry root;
  root.vertices.push_back(g.initial());
  state.gamma[static_cast<std::size_t>(g.initial())].push_back(root);

  for (;;) {
    const VertexId u = nearest_vertex(state, g);
    const PathEntry rho = shortest_path(state.gamma[static_cast<std::size_t>(u)]);
    state.processed[static_cast<std::size_t>(u)] = 1;
    state.processed_order.push_back(u);
    if (g.is_final(u)) return {rho, std::move(state)};

    if (hooks.prepare_vertex) hooks.prepare_vertex(u, rho);
    for (EdgeId e : g.outgoing(u)) {
      const double p = hooks.learn_edge(e);
      if (!(p > 0.0 && p <= 1.0)) throw ContractViolation("learn_edge returned a probability outside (0, 1]");
      state.trained.push_back(e);
      state.edge_prob[e] = p;
      const VertexId to = g.edge(e).to;
      state.gamma[static_cast<std::size_t>(to)].push_back(rho.extended(e, to, p));
    }
  }
}

// ---------------------------------------------------------------------------

PathPolicyRunner::PathPolicyRunner(const PathPolicy& policy) : policy_(&policy) {
  if (policy.policies.size() != policy.edges.size())
    throw ContractViolation("PathPolicy: one edge policy per edge required");
}

bool PathPolicyRunner::observe(const State& s) {
  if (done()) {
    ++index_;
    return true;
  }
  if (!tracker_) {
    tracker_.emplace(policy_->graph, policy_->edges[active_]);
    steps_on_active_ = 0;
  } else {
    ++steps_on_active_;
  }
  while (tracker_->observe(s)) {
    hits_.push_back(index_);
    ++active_;
    if (done()) {
      tracker_.reset();
      break;
    }
    tracker_.emplace(policy_->graph, policy_->edges[active_]);
    steps_on_active_ = 0;
  }
  ++index_;
  return done();
}

Action PathPolicyRunner::act(const State& s) const {
  if (done()) throw ContractViolation("PathPolicyRunner::act after the last edge");
  return policy_->policies[active_].act(s);
}

Trajectory rollout_path_policy(const RoomsEnv& env, const State& s0, std::size_t steps, PathPolicyRunner& runner) {
  return rollout(
      env, [&](const State& s) { return runner.act(s); }, s0, steps,
      [&](const State& s) { return runner.observe(s); });
}

// ---------------------------------------------------------------------------

void DirlConfig::validate() const {
  ars.validate();
  if (estimate_rollouts == 0) throw std::invalid_argument("estimate_rollouts must be positive");
  if (reach_min_successes == 0) throw std::invalid_argument("reach_min_successes must be positive");
  if (reach_buffer < reach_min_successes) throw std::invalid_argument("reach_buffer is below reach_min_successes");
  if (reach_rollout_factor == 0) throw std::invalid_argument("reach_rollout_factor must be positive");
  if (eval_rollouts == 0) throw std::invalid_argument("eval_rollouts must be positive");
}

namespace {

template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  const auto count = static_cast<long>(n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  }
}

ProbabilityEstimate clamp_estimate(std::size_t successes, std::size_t trials) {
  ProbabilityEstimate p;
  p.successes = successes;
  p.trials = trials;
  const double m = static_cast<double>(trials);
  p.value = std::max(static_cast<double>(successes) / m, 1.0 / (2.0 * m));
  return p;
}

}  // namespace

ProbabilityEstimate estimate_success_probability(const std::function<bool(Rng&)>& trial, std::size_t rollouts,
                                                 std::uint64_t seed, Exec exec) {
  if (rollouts == 0) throw std::invalid_argument("estimate_success_probability: zero rollouts");
  std::vector<char> ok(rollouts, 0);
  for_each_index(rollouts, exec, [&](std::size_t i) {
    Rng rng = make_rng(seed, {i});
    ok[i] = trial(rng) ? 1 : 0;
  });
  return clamp_estimate(static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), rollouts);
}

EdgeEstimate estimate_edge_prob(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const EdgePolicy& policy,
                                const StartDistribution& start, std::size_t horizon, std::size_t rollouts,
                                std::uint64_t seed, Exec exec) {
  if (rollouts == 0) throw std::invalid_argument("estimate_edge_prob: zero rollouts");
  std::vector<char> ok(rollouts, 0);
  std::vector<std::size_t> steps(rollouts, 0);
  for_each_index(rollouts, exec, [&](std::size_t i) {
    Rng rng = make_rng(seed, {i});
    const EpisodeOutcome o =
        run_edge_episode(env, g, e, policy.params, policy.normalizer, start, horizon, 0.0, rng, false);
    ok[i] = o.achieved ? 1 : 0;
    steps[i] = o.steps;
  });
  EdgeEstimate est;
  est.prob = clamp_estimate(static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), rollouts);
  for (std::size_t s : steps) est.steps += s;
  return est;
}

namespace {

struct PathRollout {
  bool reached = false;
  State last{};
  std::size_t steps = 0;
  std::size_t failed_at = 0;
};

// Path policy from a reset, each edge limited to `horizon` steps.
PathRollout run_path_once(const RoomsEnv& env, const PathPolicy& path, std::size_t horizon, Rng& rng) {
  PathRollout out;
  PathPolicyRunner runner(path);
  State s = env.reset(rng);
  bool done = runner.observe(s);
  while (!done) {
    if (runner.steps_on_active() >= horizon) {
      out.failed_at = runner.active_edge();
      return out;
    }
    s = env.step(s, runner.act(s));
    ++out.steps;
    done = runner.observe(s);
  }
  out.reached = true;
  out.last = s;
  return out;
}

}  // namespace

ReachSample reach_distribution(const RoomsEnv& env, const PathPolicy& path, std::size_t horizon,
                               std::size_t buffer_size, std::size_t min_successes, std::size_t max_rollouts,
                               std::uint64_t seed) {
  ReachSample out;
  out.dist.env = &env;
  if (path.edges.empty()) return out;

  std::vector<std::size_t> failures(path.edges.size(), 0);
  constexpr std::size_t kBatch = 64;
  while (out.dist.buffer.size() < buffer_size && out.rollouts < max_rollouts) {
    const std::size_t n = std::min(kBatch, max_rollouts - out.rollouts);
    std::vector<PathRollout> batch(n);
    const std::size_t base = out.rollouts;
    for_each_index(n, Exec::Parallel, [&](std::size_t i) {
      Rng rng = make_rng(seed, {base + i});
      batch[i] = run_path_once(env, path, horizon, rng);
    });
    // Consume in rollout order so the buffer does not depend on scheduling.
    for (const PathRollout& r : batch) {
      if (out.dist.buffer.size() >= buffer_size) break;
      ++out.rollouts;
      out.steps += r.steps;
      if (r.reached)
        out.dist.buffer.push_back(r.last);
      else
        ++failures[r.failed_at];
    }
  }

  if (out.dist.buffer.size() < min_successes) {
    const auto worst = static_cast<std::size_t>(std::max_element(failures.begin(), failures.end()) - failures.begin());
    const EdgeId e = path.edges[worst];
    throw EdgeStarvation("reach distribution starved: " + std::to_string(out.dist.buffer.size()) + " of " +
                             std::to_string(out.rollouts) + " rollouts reached vertex " +
                             std::to_string(path.vertices.back()) + "; most failures on edge " +
                             std::to_string(path.graph.edge(e).from) + "->" + std::to_string(path.graph.edge(e).to),
                         e);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

PathPolicy make_path_policy(const AbstractGraph& g, const PathEntry& rho, const std::map<EdgeId, EdgePolicy>& pol) {
  PathPolicy pp{g, rho.vertices, rho.edges, {}};
  for (EdgeId e : rho.edges) pp.policies.push_back(pol.at(e));
  return pp;
}

}  // namespace

DirlResult run_dirl(const AbstractGraph& g, const RoomsEnv& env, const DirlConfig& cfg) {
  cfg.validate();
  DirlReport report;
  std::map<VertexId, StartDistribution> eta;
  std::map<EdgeId, EdgePolicy> policies;
  const std::size_t m = cfg.ars.horizon;

  PlannerHooks hooks;
  hooks.prepare_vertex = [&](VertexId u, const PathEntry& rho) {
    if (rho.edges.empty()) {
      eta[u] = StartDistribution{&env, {}};
      return;
    }
    ReachSample rs = reach_distribution(env, make_path_policy(g, rho, policies), m, cfg.reach_buffer,
                                        cfg.reach_min_successes, cfg.reach_rollout_factor * cfg.reach_buffer,
                                        derive_seed(cfg.seed, {3, static_cast<std::uint64_t>(u)}));
    report.steps.reach += rs.steps;
    eta[u] = std::move(rs.dist);
  };
  hooks.learn_edge = [&](EdgeId e) {
    const Edge& edge = g.edge(e);
    const StartDistribution& start = eta.at(edge.from);
    ArsConfig ac = cfg.ars;
    ac.seed = derive_seed(cfg.seed, {1, static_cast<std::uint64_t>(e)});
    LearnResult lr = learn_edge_policy(env, g, e, start, ac, cfg.exec);
    const EdgeEstimate est = estimate_edge_prob(env, g, e, lr.policy, start, m, cfg.estimate_rollouts,
                                                derive_seed(cfg.seed, {2, static_cast<std::uint64_t>(e)}), cfg.exec);
    EdgeReport er;
    er.edge = e;
    er.from = edge.from;
    er.to = edge.to;
    er.prob = est.prob.value;
    er.successes = est.prob.successes;
    er.trials = est.prob.trials;
    er.train_steps = lr.steps;
    er.train_episodes = lr.episodes;
    er.estimate_steps = est.steps;
    report.edges.push_back(er);
    report.steps.train += lr.steps;
    report.steps.estimate += est.steps;
    policies[e] = std::move(lr.policy);
    return est.prob.value;
  };

  PlanResult plan = lazy_dijkstra(g, hooks);
  report.path_vertices = plan.path.vertices;
  report.path_edges = plan.path.edges;
  report.processed_order = plan.state.processed_order;
  report.cost = plan.path.cost;
  report.certificate = std::exp(-plan.path.cost);
  double rel = 0.0;
  for (EdgeId e : plan.path.edges) {
    const auto it = std::find_if(report.edges.begin(), report.edges.end(), [&](const EdgeReport& r) { return r.edge == e; });
    rel += (1.0 - it->prob) / (static_cast<double>(it->trials) * it->prob);
  }
  report.certificate_se = report.certificate * std::sqrt(rel);

  PathPolicy chosen = make_path_policy(g, plan.path, policies);
  return {std::move(chosen), std::move(report), std::move(policies)};
}

Evaluation evaluate_policy(const PathPolicy& policy, const RoomsEnv& env, std::size_t horizon_per_edge,
                           std::size_t rollouts, std::uint64_t seed, Exec exec) {
  if (rollouts == 0) throw std::invalid_argument("evaluate_policy: zero rollouts");
  const std::size_t horizon = horizon_per_edge * policy.edges.size() + 2 * horizon_per_edge;
  std::vector<char> sat(rollouts, 0), completed(rollouts, 0);
  std::vector<std::size_t> steps(rollouts, 0);
  for_each_index(rollouts, exec, [&](std::size_t i) {
    Rng rng = make_rng(seed, {i});
    PathPolicyRunner runner(policy);
    const Trajectory z = rollout_path_policy(env, env.reset(rng), horizon, runner);
    sat[i] = satisfies_graph(z, policy.graph) ? 1 : 0;
    completed[i] = runner.done() ? 1 : 0;
    steps[i] = z.last_index();
  });
  Evaluation ev;
  ev.rollouts = rollouts;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < rollouts; ++i) {
    ok += static_cast<std::size_t>(sat[i]);
    ev.completed += static_cast<std::size_t>(completed[i]);
    if (completed[i] && !sat[i]) ++ev.greedy_violations;
    ev.steps += steps[i];
  }
  const double n = static_cast<double>(rollouts);
  ev.success_prob = static_cast<double>(ok) / n;
  ev.success_se = std::sqrt(ev.success_prob * (1.0 - ev.success_prob) / n);
  return ev;
}

BoundCheck check_certificate(const Evaluation& eval, const DirlReport& report) {
  BoundCheck b;
  b.lhs = eval.success_prob;
  b.bound = report.certificate - 3.0 * (eval.success_se + report.certificate_se);
  b.slack = b.lhs - b.bound;
  b.holds = b.lhs >= b.bound;
  return b;
}

}  // namespace dirl
