#pragma once
// Brute-force reference implementations used only by tests. Deliberately
// slow and written straight from the definitions.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "dirl/dirl.hpp"
#include "dirl/shaping.hpp"

namespace oracle {

using dirl::AbstractGraph;
using dirl::Edge;
using dirl::EdgeId;
using dirl::Predicate;
using dirl::SafeSet;
using dirl::Spec;
using dirl::State;
using dirl::VertexId;

// zeta_{i:j} |= phi, by direct recursion on the semantics.
inline bool spec_sat(const std::vector<State>& z, std::size_t i, std::size_t j, const Spec& phi) {
  switch (phi.kind()) {
    case Spec::Kind::Achieve:
      for (std::size_t k = i; k <= j; ++k)
        if (phi.pred().holds(z[k])) return true;
      return false;
    case Spec::Kind::Ensuring:
      for (std::size_t k = i; k <= j; ++k)
        if (!phi.pred().holds(z[k])) return false;
      return spec_sat(z, i, j, phi.lhs());
    case Spec::Kind::Seq:
      for (std::size_t k = i; k < j; ++k)
        if (spec_sat(z, i, k, phi.lhs()) && spec_sat(z, k + 1, j, phi.rhs())) return true;
      return false;
    case Spec::Kind::Choice:
      return spec_sat(z, i, j, phi.lhs()) || spec_sat(z, i, j, phi.rhs());
  }
  return false;
}

inline bool spec_sat(const std::vector<State>& z, const Spec& phi) { return spec_sat(z, 0, z.size() - 1, phi); }

// Z_{b1} . Z_{b2} membership by trying every split point.
inline bool concat_member(const std::vector<bool>& b1, const std::vector<bool>& b2) {
  const std::size_t n = b1.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    bool ok = true;
    for (std::size_t i = 0; i <= k && ok; ++i) ok = b1[i];
    for (std::size_t i = k + 1; i < n && ok; ++i) ok = b2[i];
    if (ok) return true;
  }
  return false;
}

inline bool safe_member(const SafeSet& z, const std::vector<State>& seg) {
  std::vector<bool> b1, b2;
  for (const State& s : seg) {
    b1.push_back(z.first().holds(s));
    b2.push_back(z.second().holds(s));
  }
  if (z.kind() == SafeSet::Kind::Always) {
    for (bool b : b1)
      if (!b) return false;
    return true;
  }
  return concat_member(b1, b2);
}

inline std::vector<State> slice(const std::vector<State>& z, std::size_t i, std::size_t j) {
  return {z.begin() + static_cast<long>(i), z.begin() + static_cast<long>(j) + 1};
}

// zeta |= G: some path u0 -> ... -> f and indices 0 = i0 <= i1 < i2 < ...
// with every segment safe, every reached state in beta, and a terminal tail.
inline bool graph_sat_from(const std::vector<State>& z, const AbstractGraph& g, VertexId u, std::size_t i) {
  if (g.is_final(u) && safe_member(g.term(u), slice(z, i, z.size() - 1))) return true;
  for (EdgeId e : g.outgoing(u)) {
    const Edge& edge = g.edge(e);
    const std::size_t first = u == g.initial() ? i : i + 1;
    for (std::size_t k = first; k < z.size(); ++k) {
      if (!g.beta(edge.to).holds(z[k])) continue;
      if (!safe_member(edge.safe, slice(z, i, k))) continue;
      if (graph_sat_from(z, g, edge.to, k)) return true;
    }
  }
  return false;
}

inline bool graph_sat(const std::vector<State>& z, const AbstractGraph& g) {
  return graph_sat_from(z, g, g.initial(), 0);
}

// Smallest index achieving e: target holds and the prefix is safe.
inline std::optional<std::size_t> edge_hit(const std::vector<State>& z, const AbstractGraph& g, EdgeId e) {
  const Edge& edge = g.edge(e);
  for (std::size_t k = edge.from == g.initial() ? 0 : 1; k < z.size(); ++k)
    if (g.beta(edge.to).holds(z[k]) && safe_member(edge.safe, slice(z, 0, k))) return k;
  return std::nullopt;
}

// Minimum -sum log p over every u0 -> F path, by exhaustive DFS.
inline double best_path_cost(const AbstractGraph& g, const std::vector<double>& prob) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(VertexId, double)> dfs = [&](VertexId u, double c) {
    if (g.is_final(u)) best = std::min(best, c);
    for (EdgeId e : g.outgoing(u)) dfs(g.edge(e).to, c - std::log(prob[static_cast<std::size_t>(e)]));
  };
  dfs(g.initial(), 0.0);
  return best;
}

// Shaped reward step written as a single expression per case.
inline double shaped_step(const Predicate& target, const SafeSet& safe, bool psi_before, const State& s,
                          const State& next) {
  const bool psi = psi_before && safe.first().holds(s);
  double safety;
  if (safe.kind() == SafeSet::Kind::Always)
    safety = safe.first().quant(next);
  else if (psi)
    safety = std::max(safe.first().quant(next), safe.second().quant(next));
  else
    safety = safe.second().quant(next);
  return target.quant(next) + (safety < 0.0 ? safety : 0.0);
}

// One ARS V2-t update from its textbook form.
inline std::vector<double> ars_step(std::vector<double> theta, const std::vector<std::vector<double>>& deltas,
                                    const std::vector<double>& rp, const std::vector<double>& rm, double alpha,
                                    std::size_t b) {
  const std::size_t n = deltas.size();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; ++k) idx.push_back(k);
  // selection sort, stable on ties
  for (std::size_t a = 0; a < b; ++a) {
    std::size_t best = a;
    for (std::size_t c = a + 1; c < n; ++c)
      if (std::max(rp[idx[c]], rm[idx[c]]) > std::max(rp[idx[best]], rm[idx[best]])) best = c;
    const std::size_t v = idx[best];
    idx.erase(idx.begin() + static_cast<long>(best));
    idx.insert(idx.begin() + static_cast<long>(a), v);
  }
  std::vector<double> all;
  for (std::size_t a = 0; a < b; ++a) {
    all.push_back(rp[idx[a]]);
    all.push_back(rm[idx[a]]);
  }
  double mean = 0;
  for (double r : all) mean += r;
  mean /= static_cast<double>(all.size());
  double var = 0;
  for (double r : all) var += (r - mean) * (r - mean);
  var /= static_cast<double>(all.size());
  const double sd = std::max(std::sqrt(var), 1e-8);
  for (std::size_t a = 0; a < b; ++a)
    for (std::size_t i = 0; i < theta.size(); ++i)
      theta[i] += alpha / (static_cast<double>(b) * sd) * (rp[idx[a]] - rm[idx[a]]) * deltas[idx[a]][i];
  return theta;
}

}  // namespace oracle
