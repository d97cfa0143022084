#include "dirl/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace dirl {

SafeSet SafeSet::always(Predicate b) { return SafeSet(Kind::Always, std::move(b), Predicate::truth()); }

SafeSet SafeSet::concat(Predicate first, Predicate second) {
  return SafeSet(Kind::Concat, std::move(first), std::move(second));
}

SafeSet SafeSet::intersect(const Predicate& b) const {
  if (kind_ == Kind::Always) return always(Predicate::conj(first_, b));
  return concat(Predicate::conj(first_, b), Predicate::conj(second_, b));
}

bool SafeSet::operator==(const SafeSet& other) const {
  return kind_ == other.kind_ && first_ == other.first_ && second_ == other.second_;
}

std::string to_string(const SafeSet& z) {
  if (z.kind() == SafeSet::Kind::Always) return "always(" + to_string(z.first()) + ")";
  return "concat(" + to_string(z.first()) + " | " + to_string(z.second()) + ")";
}

bool safe_membership(const SafeSet& z, std::span<const State> states) {
  if (states.empty()) throw ContractViolation("safe_membership: empty trajectory");
  SafeMonitor m(z);
  for (const State& s : states) m.feed(s);
  return m.member();
}

// ---------------------------------------------------------------------------

AbstractGraph::AbstractGraph(std::vector<Predicate> beta, std::vector<Edge> edges, VertexId initial,
                             std::vector<VertexId> finals, std::vector<std::optional<SafeSet>> term)
    : beta_(std::move(beta)),
      edges_(std::move(edges)),
      initial_(initial),
      finals_(std::move(finals)),
      term_(std::move(term)) {
  const auto n = beta_.size();
  if (initial_ < 0 || static_cast<std::size_t>(initial_) >= n) throw ContractViolation("initial vertex out of range");
  if (term_.size() != n) throw ContractViolation("term map must have one slot per vertex");
  std::sort(finals_.begin(), finals_.end());
  finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const Edge& a, const Edge& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
  out_.assign(n, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= n || static_cast<std::size_t>(e.to) >= n) {
      throw ContractViolation("edge endpoint out of range");
    }
    if (i > 0 && edges_[i - 1].from == e.from && edges_[i - 1].to == e.to) throw ContractViolation("duplicate edge");
    out_[static_cast<std::size_t>(e.from)].push_back(static_cast<EdgeId>(i));
  }
  for (VertexId f : finals_) {
    if (f < 0 || static_cast<std::size_t>(f) >= n) throw ContractViolation("final vertex out of range");
    if (!term_[static_cast<std::size_t>(f)]) term_[static_cast<std::size_t>(f)] = SafeSet::always(Predicate::truth());
  }
}

bool AbstractGraph::is_final(VertexId u) const { return std::binary_search(finals_.begin(), finals_.end(), u); }

std::optional<EdgeId> AbstractGraph::find_edge(VertexId from, VertexId to) const {
  for (EdgeId e : outgoing(from))
    if (edges_[static_cast<std::size_t>(e)].to == to) return e;
  return std::nullopt;
}

const SafeSet& AbstractGraph::term(VertexId u) const {
  const auto& t = term_.at(static_cast<std::size_t>(u));
  if (!t || !is_final(u)) throw ContractViolation("term() requires a final vertex");
  return *t;
}

std::size_t AbstractGraph::num_incoming(VertexId u) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [u](const Edge& e) { return e.to == u; }));
}

bool AbstractGraph::is_acyclic() const {
  std::vector<std::size_t> indeg(num_vertices(), 0);
  for (const Edge& e : edges_) ++indeg[static_cast<std::size_t>(e.to)];
  std::vector<VertexId> ready;
  for (std::size_t u = 0; u < indeg.size(); ++u)
    if (indeg[u] == 0) ready.push_back(static_cast<VertexId>(u));
  std::size_t seen = 0;
  while (!ready.empty()) {
    const VertexId u = ready.back();
    ready.pop_back();
    ++seen;
    for (EdgeId e : outgoing(u))
      if (--indeg[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].to)] == 0)
        ready.push_back(edges_[static_cast<std::size_t>(e)].to);
  }
  return seen == num_vertices();
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

// Intermediate graph with local vertex ids.
struct RawGraph {
  std::vector<Predicate> beta;
  std::vector<Edge> edges;
  VertexId initial = 0;
  std::vector<VertexId> finals;
  std::map<VertexId, SafeSet> term;
};

void require_no_incoming(const RawGraph& g) {
  for (const Edge& e : g.edges)
    if (e.to == g.initial) throw ContractViolation("compiled graph has an edge into its initial vertex");
}

RawGraph build(const Spec& phi) {
  switch (phi.kind()) {
    case Spec::Kind::Achieve: {
      RawGraph g;
      g.beta = {Predicate::truth(), phi.pred()};
      g.edges = {Edge{0, 1, SafeSet::always(Predicate::truth())}};
      g.initial = 0;
      g.finals = {1};
      g.term.emplace(1, SafeSet::always(Predicate::truth()));
      return g;
    }
    case Spec::Kind::Ensuring: {
      RawGraph g = build(phi.lhs());
      const Predicate& b = phi.pred();
      for (std::size_t u = 0; u < g.beta.size(); ++u)
        if (static_cast<VertexId>(u) != g.initial) g.beta[u] = Predicate::conj(g.beta[u], b);
      for (Edge& e : g.edges) e.safe = e.safe.intersect(b);
      for (auto& [u, z] : g.term) z = z.intersect(b);
      return g;
    }
    case Spec::Kind::Seq: {
      RawGraph g1 = build(phi.lhs());
      RawGraph g2 = build(phi.rhs());
      require_no_incoming(g2);
      RawGraph g;
      g.beta = g1.beta;
      g.initial = g1.initial;
      g.edges = g1.edges;
      // Map g2 vertices (minus its initial vertex) after g1's.
      std::vector<VertexId> map2(g2.beta.size(), -1);
      for (std::size_t u = 0; u < g2.beta.size(); ++u) {
        if (static_cast<VertexId>(u) == g2.initial) continue;
        map2[u] = static_cast<VertexId>(g.beta.size());
        g.beta.push_back(g2.beta[u]);
      }
      for (const Edge& e : g2.edges)
        if (e.from != g2.initial) g.edges.push_back(Edge{map2[e.from], map2[e.to], e.safe});
      for (VertexId f1 : g1.finals) {
        const SafeSet& t1 = g1.term.at(f1);
        if (t1.kind() != SafeSet::Kind::Always) throw ContractViolation("terminal set is not of the form Z_b");
        for (const Edge& e : g2.edges) {
          if (e.from != g2.initial) continue;
          if (e.safe.kind() != SafeSet::Kind::Always)
            throw ContractViolation("initial edge safe set is not of the form Z_b");
          g.edges.push_back(Edge{f1, map2[e.to], SafeSet::concat(t1.first(), e.safe.first())});
        }
      }
      for (VertexId f2 : g2.finals) {
        g.finals.push_back(map2[f2]);
        g.term.emplace(map2[f2], g2.term.at(f2));
      }
      return g;
    }
    case Spec::Kind::Choice: {
      RawGraph parts[2] = {build(phi.lhs()), build(phi.rhs())};
      RawGraph g;
      g.initial = 0;
      g.beta.push_back(Predicate::truth());
      for (const RawGraph& p : parts) {
        require_no_incoming(p);
        std::vector<VertexId> map(p.beta.size(), -1);
        map[p.initial] = g.initial;
        for (std::size_t u = 0; u < p.beta.size(); ++u) {
          if (static_cast<VertexId>(u) == p.initial) continue;
          map[u] = static_cast<VertexId>(g.beta.size());
          g.beta.push_back(p.beta[u]);
        }
        for (const Edge& e : p.edges) g.edges.push_back(Edge{map[e.from], map[e.to], e.safe});
        for (VertexId f : p.finals) {
          g.finals.push_back(map[f]);
          g.term.emplace(map[f], p.term.at(f));
        }
      }
      return g;
    }
  }
  throw ContractViolation("unknown specification node");
}

// Renumbers vertices in topological order, smallest raw id first.
AbstractGraph finalize(const RawGraph& raw) {
  const std::size_t n = raw.beta.size();
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<VertexId>> succ(n);
  for (const Edge& e : raw.edges) {
    ++indeg[static_cast<std::size_t>(e.to)];
    succ[static_cast<std::size_t>(e.from)].push_back(e.to);
  }
  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (std::size_t u = 0; u < n; ++u)
    if (indeg[u] == 0) ready.push(static_cast<VertexId>(u));
  std::vector<VertexId> order;
  while (!ready.empty()) {
    const VertexId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (VertexId v : succ[static_cast<std::size_t>(u)])
      if (--indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
  }
  if (order.size() != n) throw ContractViolation("compiled graph is cyclic");
  std::vector<VertexId> id(n);
  for (std::size_t i = 0; i < n; ++i) id[static_cast<std::size_t>(order[i])] = static_cast<VertexId>(i);

  std::vector<Predicate> beta(n, Predicate::truth());
  for (std::size_t u = 0; u < n; ++u) beta[static_cast<std::size_t>(id[u])] = raw.beta[u];
  std::vector<Edge> edges;
  for (const Edge& e : raw.edges) edges.push_back(Edge{id[e.from], id[e.to], e.safe});
  std::vector<VertexId> finals;
  std::vector<std::optional<SafeSet>> term(n);
  for (VertexId f : raw.finals) {
    finals.push_back(id[f]);
    term[static_cast<std::size_t>(id[f])] = raw.term.at(f);
  }
  return AbstractGraph(std::move(beta), std::move(edges), id[raw.initial], std::move(finals), std::move(term));
}

}  // namespace

AbstractGraph compile(const Spec& phi) {
  RawGraph raw = build(phi);
  for (VertexId f : raw.finals)
    if (f == raw.initial) throw ContractViolation("compiled graph has an initial final vertex");
  return finalize(raw);
}

AbstractGraph make_topology(std::size_t num_vertices, const std::vector<std::pair<VertexId, VertexId>>& edges,
                            VertexId initial, std::vector<VertexId> finals) {
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.push_back(Edge{a, b, SafeSet::always(Predicate::truth())});
  return AbstractGraph(std::vector<Predicate>(num_vertices, Predicate::truth()), std::move(es), initial,
                       std::move(finals), std::vector<std::optional<SafeSet>>(num_vertices));
}

// ---------------------------------------------------------------------------
// Monitors

EdgeTracker::EdgeTracker(const AbstractGraph& g, EdgeId e)
    : g_(&g), edge_(e), from_initial_(g.edge(e).from == g.initial()), monitor_(g.edge(e).safe) {}

bool EdgeTracker::observe(const State& s) {
  if (hit_) return true;
  const std::size_t k = monitor_.count();
  monitor_.feed(s);
  if (monitor_.member() && (k > 0 || from_initial_) && g_->beta(g_->edge(edge_).to).holds(s)) {
    hit_ = k;
    return true;
  }
  return false;
}

std::optional<std::size_t> achieves_edge(std::span<const State> states, EdgeId e, const AbstractGraph& g) {
  if (states.empty()) throw ContractViolation("achieves_edge: empty trajectory");
  if (!g.beta(g.edge(e).from).holds(states.front()))
    throw ContractViolation("achieves_edge: initial state is outside the source region");
  EdgeTracker t(g, e);
  for (const State& s : states) {
    if (t.observe(s)) return t.hit_index();
    if (t.dead()) break;
  }
  return std::nullopt;
}

std::optional<std::size_t> achieves_edge(const Trajectory& zeta, EdgeId e, const AbstractGraph& g) {
  return achieves_edge(zeta.states, e, g);
}

bool satisfies_graph(std::span<const State> states, const AbstractGraph& g) {
  if (states.empty()) throw ContractViolation("satisfies_graph: empty trajectory");
  const std::size_t n = states.size();
  const std::size_t nv = g.num_vertices();
  // reached[u][i]: some valid index/path prefix ends at vertex u at index i.
  std::vector<std::vector<char>> reached(nv, std::vector<char>(n, 0));
  reached[static_cast<std::size_t>(g.initial())][0] = 1;
  // Vertex ids are topological, so one ascending sweep suffices.
  for (std::size_t u = 0; u < nv; ++u) {
    const auto uid = static_cast<VertexId>(u);
    for (std::size_t i = 0; i < n; ++i) {
      if (!reached[u][i]) continue;
      if (g.is_final(uid) && safe_membership(g.term(uid), states.subspan(i))) return true;
      for (EdgeId e : g.outgoing(uid)) {
        const Edge& edge = g.edge(e);
        const Predicate& target = g.beta(edge.to);
        SafeMonitor m(edge.safe);
        for (std::size_t k = i; k < n; ++k) {
          m.feed(states[k]);
          if (m.dead()) break;
          if ((k > i || uid == g.initial()) && m.member() && target.holds(states[k]))
            reached[static_cast<std::size_t>(edge.to)][k] = 1;
        }
      }
    }
  }
  return false;
}

bool satisfies_graph(const Trajectory& zeta, const AbstractGraph& g) { return satisfies_graph(zeta.states, g); }

// ---------------------------------------------------------------------------
// Export

std::string to_text(const AbstractGraph& g) {
  std::ostringstream os;
  os << "vertices " << g.num_vertices() << "\n";
  os << "edges " << g.num_edges() << "\n";
  os << "initial " << g.initial() << "\n";
  os << "finals";
  for (VertexId f : g.finals()) os << ' ' << f;
  os << "\n";
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    const auto uid = static_cast<VertexId>(u);
    os << "vertex " << u << " beta " << to_string(g.beta(uid));
    if (g.is_final(uid)) os << " term " << to_string(g.term(uid));
    os << "\n";
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(static_cast<EdgeId>(e));
    os << "edge " << e << ' ' << edge.from << " -> " << edge.to << " safe " << to_string(edge.safe) << "\n";
  }
  return os.str();
}

namespace {
std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace

std::string to_dot(const AbstractGraph& g) {
  std::ostringstream os;
  os << "digraph abstract_graph {\n  rankdir=LR;\n";
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    const auto uid = static_cast<VertexId>(u);
    os << "  u" << u << " [label=\"u" << u << "\\n" << dot_escape(to_string(g.beta(uid))) << "\"";
    if (g.is_final(uid)) os << ", shape=doublecircle";
    if (uid == g.initial()) os << ", style=bold";
    os << "];\n";
  }
  for (const Edge& e : g.edges()) {
    os << "  u" << e.from << " -> u" << e.to << " [label=\"" << dot_escape(to_string(e.safe)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dirl
