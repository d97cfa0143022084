#include "dirl/ars.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dirl/shaping.hpp"

namespace dirl {

// ---------------------------------------------------------------------------
// Observation normalizer

void ObsNormalizer::push(std::span<const double> x) {
  if (x.size() != dim()) throw std::invalid_argument("ObsNormalizer: dimension mismatch");
  count_ += 1.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double d = x[i] - mean_[i];
    mean_[i] += d / count_;
    m2_[i] += d * (x[i] - mean_[i]);
  }
}

void ObsNormalizer::merge(const ObsNormalizer& other) {
  if (other.dim() != dim()) throw std::invalid_argument("ObsNormalizer: dimension mismatch");
  if (other.count_ == 0.0) return;
  if (count_ == 0.0) {
    *this = other;
    return;
  }
  const double n = count_ + other.count_;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double d = other.mean_[i] - mean_[i];
    mean_[i] += d * other.count_ / n;
    m2_[i] += other.m2_[i] + d * d * count_ * other.count_ / n;
  }
  count_ = n;
}

std::vector<double> ObsNormalizer::variance() const {
  std::vector<double> v(dim(), 0.0);
  if (count_ > 0.0)
    for (std::size_t i = 0; i < dim(); ++i) v[i] = std::max(0.0, m2_[i] / count_);
  return v;
}

void ObsNormalizer::normalize(std::span<const double> x, std::span<double> out) const {
  if (count_ == 0.0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < dim(); ++i) {
    const double sd = std::max(std::sqrt(std::max(0.0, m2_[i] / count_)), 1e-8);
    out[i] = (x[i] - mean_[i]) / sd;
  }
}

ObsNormalizer ObsNormalizer::from_raw(double count, std::vector<double> mean, std::vector<double> m2) {
  if (mean.size() != m2.size()) throw std::invalid_argument("ObsNormalizer: dimension mismatch");
  ObsNormalizer n(mean.size());
  n.count_ = count;
  n.mean_ = std::move(mean);
  n.m2_ = std::move(m2);
  return n;
}

// ---------------------------------------------------------------------------
// Policy network

std::size_t PolicyParams::size_for(std::size_t in, std::size_t hidden, std::size_t out) {
  return hidden * in + hidden + hidden * hidden + hidden + out * hidden + out;
}

PolicyParams PolicyParams::zeros(std::size_t in, std::size_t hidden, std::size_t out) {
  PolicyParams p;
  p.input_dim = in;
  p.hidden = hidden;
  p.output_dim = out;
  p.values.assign(size_for(in, hidden, out), 0.0);
  return p;
}

PolicyParams PolicyParams::initial(std::size_t in, std::size_t hidden, std::size_t out, std::uint64_t seed) {
  PolicyParams p = zeros(in, hidden, out);
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  double* w = p.values.data();
  for (std::size_t i = 0; i < hidden * in; ++i) w[i] = n01(rng) / std::sqrt(static_cast<double>(in));
  w += hidden * in + hidden;
  for (std::size_t i = 0; i < hidden * hidden; ++i) w[i] = n01(rng) / std::sqrt(static_cast<double>(hidden));
  return p;
}

namespace {
constexpr std::size_t kMaxWidth = 512;
}

void PolicyParams::forward(std::span<const double> input, std::span<double> output) const {
  if (hidden > kMaxWidth) throw std::invalid_argument("hidden layer too wide");
  std::array<double, kMaxWidth> h1{};
  std::array<double, kMaxWidth> h2{};
  const double* w = values.data();
  for (std::size_t j = 0; j < hidden; ++j) {
    double acc = w[hidden * input_dim + j];
    for (std::size_t i = 0; i < input_dim; ++i) acc += w[j * input_dim + i] * input[i];
    h1[j] = std::tanh(acc);
  }
  w += hidden * input_dim + hidden;
  for (std::size_t j = 0; j < hidden; ++j) {
    double acc = w[hidden * hidden + j];
    const double* row = w + j * hidden;
    for (std::size_t i = 0; i < hidden; ++i) acc += row[i] * h1[i];
    h2[j] = std::tanh(acc);
  }
  w += hidden * hidden + hidden;
  for (std::size_t j = 0; j < output_dim; ++j) {
    double acc = w[output_dim * hidden + j];
    const double* row = w + j * hidden;
    for (std::size_t i = 0; i < hidden; ++i) acc += row[i] * h2[i];
    output[j] = std::tanh(acc);
  }
}

Action act(const PolicyParams& params, const ObsNormalizer& norm, const State& s, double max_speed) {
  std::array<double, 2> x{};
  std::array<double, 2> y{};
  norm.normalize(s, x);
  params.forward(x, y);
  return {(y[0] + 1.0) * 0.5 * max_speed, y[1] * M_PI};
}

Action EdgePolicy::act(const State& s) const { return dirl::act(params, normalizer, s, max_speed); }

// ---------------------------------------------------------------------------
// Checkpoints: line-oriented text, reals as hex floats for exact reload.

namespace {

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double read_real(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw std::runtime_error("policy checkpoint: truncated");
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) throw std::runtime_error("policy checkpoint: bad number '" + tok + "'");
  return v;
}

void expect_word(std::istream& is, const std::string& w) {
  std::string tok;
  if (!(is >> tok) || tok != w) throw std::runtime_error("policy checkpoint: expected '" + w + "'");
}

}  // namespace

void save_policy(std::ostream& os, const EdgePolicy& p) {
  os << "dirl-policy 1\n";
  os << "arch " << p.params.input_dim << ' ' << p.params.hidden << ' ' << p.params.output_dim << "\n";
  os << "max_speed " << hex(p.max_speed) << "\n";
  os << "normalizer " << p.normalizer.dim() << ' ' << hex(p.normalizer.count());
  for (double m : p.normalizer.mean()) os << ' ' << hex(m);
  for (double m : p.normalizer.m2()) os << ' ' << hex(m);
  os << "\n";
  os << "params " << p.params.values.size() << "\n";
  for (std::size_t i = 0; i < p.params.values.size(); ++i)
    os << hex(p.params.values[i]) << ((i + 1) % 8 == 0 || i + 1 == p.params.values.size() ? '\n' : ' ');
}

EdgePolicy load_policy(std::istream& is) {
  expect_word(is, "dirl-policy");
  int version = 0;
  if (!(is >> version) || version != 1) throw std::runtime_error("policy checkpoint: unsupported version");
  EdgePolicy p;
  expect_word(is, "arch");
  std::size_t in = 0, hidden = 0, out = 0;
  if (!(is >> in >> hidden >> out)) throw std::runtime_error("policy checkpoint: bad arch");
  expect_word(is, "max_speed");
  p.max_speed = read_real(is);
  expect_word(is, "normalizer");
  std::size_t dim = 0;
  if (!(is >> dim)) throw std::runtime_error("policy checkpoint: bad normalizer");
  const double count = read_real(is);
  std::vector<double> mean(dim), m2(dim);
  for (auto& m : mean) m = read_real(is);
  for (auto& m : m2) m = read_real(is);
  p.normalizer = ObsNormalizer::from_raw(count, std::move(mean), std::move(m2));
  expect_word(is, "params");
  std::size_t n = 0;
  if (!(is >> n) || n != PolicyParams::size_for(in, hidden, out))
    throw std::runtime_error("policy checkpoint: parameter count does not match arch");
  p.params = PolicyParams::zeros(in, hidden, out);
  for (auto& v : p.params.values) v = read_real(is);
  return p;
}

void save_policy_file(const std::string& path, const EdgePolicy& p) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  save_policy(f, p);
}

EdgePolicy load_policy_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_policy(f);
}

// ---------------------------------------------------------------------------
// ARS

void ArsConfig::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("ARS step size must be positive");
  if (!(noise > 0.0)) throw std::invalid_argument("ARS exploration noise must be positive");
  if (directions == 0) throw std::invalid_argument("ARS needs at least one direction");
  if (top_directions < 1 || top_directions > directions)
    throw std::invalid_argument("ARS top directions must lie in [1, directions]");
  if (horizon == 0) throw std::invalid_argument("episode horizon must be positive");
  if (episodes < 2 * directions)
    throw std::invalid_argument("episode budget " + std::to_string(episodes) + " is below one ARS iteration (" +
                                std::to_string(2 * directions) + " episodes)");
}

State StartDistribution::sample(Rng& rng) const {
  if (buffer.empty()) {
    if (!env) throw ContractViolation("StartDistribution without environment or buffer");
    return env->reset(rng);
  }
  std::uniform_int_distribution<std::size_t> pick(0, buffer.size() - 1);
  return buffer[pick(rng)];
}

EpisodeOutcome run_edge_episode(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const PolicyParams& params,
                                const ObsNormalizer& norm, const StartDistribution& start, std::size_t horizon,
                                double bonus, Rng& rng, bool record_observations) {
  EpisodeOutcome out;
  State s = start.sample(rng);
  EdgeTracker tracker(g, e);
  ShapingMonitor shaping(g, e);
  const double vmax = env.layout().max_speed;
  if (tracker.observe(s)) {
    out.achieved = true;
    out.shaped_return = bonus;
    return out;
  }
  if (record_observations) out.observed.reserve(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    if (record_observations) out.observed.push_back(s);
    const Action a = act(params, norm, s, vmax);
    const State next = env.step(s, a);
    const double r = shaping.step_reward(s, a, next);
    out.shaped_return += r;
    ++out.steps;
    s = next;
    const bool hit = tracker.observe(s);
    if (hit || tracker.dead()) {
      // absorbing from here: the remaining steps repeat the last reward
      out.shaped_return += r * static_cast<double>(horizon - out.steps);
      if (hit) {
        out.achieved = true;
        out.shaped_return += bonus;
      }
      break;
    }
  }
  return out;
}

namespace {

std::vector<double> sample_delta(std::size_t dim, std::uint64_t seed, std::size_t iteration, std::size_t dir) {
  Rng rng = make_rng(seed, {iteration, dir, 0xde17aULL});
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> d(dim);
  for (auto& x : d) x = n01(rng);
  return d;
}

}  // namespace

DirectionBatch evaluate_directions(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const PolicyParams& params,
                                   const ObsNormalizer& norm, const StartDistribution& start, const ArsConfig& cfg,
                                   std::size_t iteration, Exec exec) {
  const std::size_t n = cfg.directions;
  DirectionBatch batch;
  batch.deltas.resize(n);
  batch.returns.assign(2 * n, 0.0);
  batch.steps.assign(2 * n, 0);
  batch.observed.resize(2 * n);

  auto run = [&](std::size_t job) {
    const std::size_t dir = job / 2;
    const std::size_t sign = job % 2;
    // Both jobs of a pair re-derive delta from the (iteration, direction) key.
    const std::vector<double> delta = sample_delta(params.values.size(), cfg.seed, iteration, dir);
    if (sign == 0) batch.deltas[dir] = delta;
    PolicyParams perturbed = params;
    const double scale = sign == 0 ? cfg.noise : -cfg.noise;
    for (std::size_t i = 0; i < delta.size(); ++i) perturbed.values[i] += scale * delta[i];
    Rng rng = make_rng(cfg.seed, {iteration, dir, sign + 1});
    EpisodeOutcome o = run_edge_episode(env, g, e, perturbed, norm, start, cfg.horizon, cfg.success_bonus, rng);
    batch.returns[job] = o.shaped_return;
    batch.steps[job] = o.steps;
    batch.observed[job] = std::move(o.observed);
  };

  const auto jobs = static_cast<long>(2 * n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long job = 0; job < jobs; ++job) run(static_cast<std::size_t>(job));
  } else {
    for (long job = 0; job < jobs; ++job) run(static_cast<std::size_t>(job));
  }
  return batch;
}

void ars_update(std::vector<double>& theta, const std::vector<std::vector<double>>& deltas,
                std::span<const double> r_plus, std::span<const double> r_minus, double step_size,
                std::size_t top_directions) {
  const std::size_t n = deltas.size();
  if (r_plus.size() != n || r_minus.size() != n) throw std::invalid_argument("ars_update: size mismatch");
  if (top_directions < 1 || top_directions > n) throw std::invalid_argument("ars_update: bad top count");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::max(r_plus[a], r_minus[a]) > std::max(r_plus[b], r_minus[b]);
  });
  order.resize(top_directions);

  double mean = 0.0;
  for (std::size_t k : order) mean += r_plus[k] + r_minus[k];
  mean /= static_cast<double>(2 * top_directions);
  double var = 0.0;
  for (std::size_t k : order)
    var += (r_plus[k] - mean) * (r_plus[k] - mean) + (r_minus[k] - mean) * (r_minus[k] - mean);
  var /= static_cast<double>(2 * top_directions);
  const double sigma = std::max(std::sqrt(var), 1e-8);

  const double scale = step_size / (static_cast<double>(top_directions) * sigma);
  for (std::size_t k : order) {
    const double w = scale * (r_plus[k] - r_minus[k]);
    const auto& d = deltas[k];
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += w * d[i];
  }
}

LearnResult learn_edge_policy(const RoomsEnv& env, const AbstractGraph& g, EdgeId e, const StartDistribution& start,
                              const ArsConfig& cfg, Exec exec) {
  cfg.validate();
  LearnResult result;
  result.policy.params = PolicyParams::initial(2, cfg.hidden, 2, derive_seed(cfg.seed, {0x1417ULL}));
  result.policy.max_speed = env.layout().max_speed;
  ObsNormalizer& norm = result.policy.normalizer;
  std::vector<double> r_plus(cfg.directions), r_minus(cfg.directions);

  for (std::size_t it = 0; it < cfg.iterations(); ++it) {
    DirectionBatch batch = evaluate_directions(env, g, e, result.policy.params, norm, start, cfg, it, exec);
    for (std::size_t d = 0; d < cfg.directions; ++d) {
      r_plus[d] = batch.returns[2 * d];
      r_minus[d] = batch.returns[2 * d + 1];
    }
    // update along the applied perturbation nu * delta
    for (auto& d : batch.deltas)
      for (double& x : d) x *= cfg.noise;
    ars_update(result.policy.params.values, batch.deltas, r_plus, r_minus, cfg.step_size, cfg.top_directions);
    for (std::size_t job = 0; job < batch.observed.size(); ++job) {
      for (const State& s : batch.observed[job]) norm.push(s);
      result.steps += batch.steps[job];
    }
    result.episodes += batch.returns.size();
  }
  return result;
}

}  // namespace dirl
