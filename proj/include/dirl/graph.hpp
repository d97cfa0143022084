#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirl/spec_lang.hpp"

namespace dirl {

using VertexId = int;
using EdgeId = int;

/// Thrown when a documented precondition of an operation does not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Safe-trajectory set: either Z_b (every state satisfies b) or the
/// concatenation Z_b1 . Z_b2.
class SafeSet {
 public:
  enum class Kind { Always, Concat };

  static SafeSet always(Predicate b);
  static SafeSet concat(Predicate first, Predicate second);

  Kind kind() const { return kind_; }
  /// b for Always, b1 for Concat.
  const Predicate& first() const { return first_; }
  /// b2 for Concat; `true` for Always.
  const Predicate& second() const { return second_; }

  /// Z intersected with Z_b.
  SafeSet intersect(const Predicate& b) const;

  bool operator==(const SafeSet& other) const;

 private:
  SafeSet(Kind k, Predicate a, Predicate b) : kind_(k), first_(std::move(a)), second_(std::move(b)) {}
  Kind kind_;
  Predicate first_;
  Predicate second_;
};

std::string to_string(const SafeSet& z);

/// Online membership monitor for a SafeSet. Fed states s_i, s_{i+1}, ...;
/// after each call `member()` tells whether the prefix fed so far is in Z.
class SafeMonitor {
 public:
  explicit SafeMonitor(const SafeSet& z) : z_(&z) {}

  void feed(const State& s) { feed_bits(z_->first().holds(s), z_->kind() == SafeSet::Kind::Concat && z_->second().holds(s)); }

  /// Feed pre-evaluated predicate values (b1, b2); b2 is ignored for Always.
  void feed_bits(bool b1, bool b2) {
    if (count_ == 0) {
      a_ = b1;
      c_ = false;
    } else {
      c_ = b2 && (a_ || c_);
      a_ = a_ && b1;
    }
    ++count_;
  }

  bool member() const { return z_->kind() == SafeSet::Kind::Always ? a_ : c_; }
  /// No extension of the current prefix can be a member.
  bool dead() const { return z_->kind() == SafeSet::Kind::Always ? !a_ : (!a_ && !c_); }
  /// "b1 has held on every state so far".
  bool first_phase_intact() const { return a_; }
  std::size_t count() const { return count_; }

 private:
  const SafeSet* z_;
  bool a_ = true;
  bool c_ = false;
  std::size_t count_ = 0;
};

bool safe_membership(const SafeSet& z, std::span<const State> states);

struct Edge {
  VertexId from;
  VertexId to;
  SafeSet safe;
};

/// Abstract graph (U, E, u0, F, beta, Z_safe) plus terminal sets Z_term.
/// Vertex ids are a topological order; edges are sorted by (from, to).
class AbstractGraph {
 public:
  AbstractGraph(std::vector<Predicate> beta, std::vector<Edge> edges, VertexId initial,
                std::vector<VertexId> finals, std::vector<std::optional<SafeSet>> term);

  std::size_t num_vertices() const { return beta_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  VertexId initial() const { return initial_; }
  const std::vector<VertexId>& finals() const { return finals_; }
  bool is_final(VertexId u) const;

  const Predicate& beta(VertexId u) const { return beta_.at(static_cast<std::size_t>(u)); }
  const Edge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& outgoing(VertexId u) const { return out_.at(static_cast<std::size_t>(u)); }
  std::optional<EdgeId> find_edge(VertexId from, VertexId to) const;
  /// Z_term of a final vertex.
  const SafeSet& term(VertexId u) const;

  /// Kahn topological sort succeeds.
  bool is_acyclic() const;
  std::size_t num_incoming(VertexId u) const;

 private:
  std::vector<Predicate> beta_;
  std::vector<Edge> edges_;
  VertexId initial_;
  std::vector<VertexId> finals_;
  std::vector<std::optional<SafeSet>> term_;
  std::vector<std::vector<EdgeId>> out_;
};

/// Builds (G_phi, Z_term) by structural induction on phi.
AbstractGraph compile(const Spec& phi);

/// Abstract graph with `true` everywhere, used for planner tests over
/// arbitrary DAG topologies.
AbstractGraph make_topology(std::size_t num_vertices, const std::vector<std::pair<VertexId, VertexId>>& edges,
                            VertexId initial, std::vector<VertexId> finals);

/// Incremental detector for i(zeta, e): fed the states of a rollout that
/// starts in beta(u), fires at the smallest qualifying index.
class EdgeTracker {
 public:
  EdgeTracker(const AbstractGraph& g, EdgeId e);

  /// Feeds the next state; returns true exactly when the edge is achieved
  /// at this state (and on every later call once achieved).
  bool observe(const State& s);

  bool achieved() const { return hit_.has_value(); }
  /// Offset from the tracker's first state of the achieving state.
  std::optional<std::size_t> hit_index() const { return hit_; }
  /// Edge can no longer be achieved on any continuation.
  bool dead() const { return !hit_ && monitor_.dead(); }
  EdgeId edge() const { return edge_; }

 private:
  const AbstractGraph* g_;
  EdgeId edge_;
  bool from_initial_;
  SafeMonitor monitor_;
  std::optional<std::size_t> hit_;
};

/// i(zeta, e) relative to the first state of `states`. Throws
/// ContractViolation if states[0] is not in beta(u).
std::optional<std::size_t> achieves_edge(std::span<const State> states, EdgeId e, const AbstractGraph& g);
std::optional<std::size_t> achieves_edge(const Trajectory& zeta, EdgeId e, const AbstractGraph& g);

/// Finite-trajectory satisfaction of (G, Z_term).
bool satisfies_graph(std::span<const State> states, const AbstractGraph& g);
bool satisfies_graph(const Trajectory& zeta, const AbstractGraph& g);

/// Plain-text adjacency listing.
std::string to_text(const AbstractGraph& g);
/// Graphviz dump.
std::string to_dot(const AbstractGraph& g);

}  // namespace dirl
