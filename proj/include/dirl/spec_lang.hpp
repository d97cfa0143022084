#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dirl {

/// Environment state: 2D position.
using State = std::array<double, 2>;
/// Environment action: (speed, heading).
using Action = std::array<double, 2>;

/// Finite trajectory s_0 -> ... -> s_t. `actions` is either empty or has one
/// entry per transition.
struct Trajectory {
  std::vector<State> states;
  std::vector<Action> actions;

  std::size_t last_index() const { return states.size() - 1; }
};

/// Atomic predicate p with quantitative semantics; the Boolean value is the
/// sign of the quantitative one.
class AtomicPredicate {
 public:
  using Evaluator = std::function<double(const State&)>;

  AtomicPredicate(std::string name, std::vector<double> args, Evaluator eval);

  const std::string& name() const { return name_; }
  const std::vector<double>& args() const { return args_; }

  double quant(const State& s) const { return (*eval_)(s); }
  bool holds(const State& s) const { return quant(s) > 0.0; }

  /// Same name and arguments.
  bool same_as(const AtomicPredicate& other) const;

 private:
  std::string name_;
  std::vector<double> args_;
  std::shared_ptr<const Evaluator> eval_;
};

/// Predicate b ::= true | p | b1 and b2 | b1 or b2. Immutable, cheap to copy.
class Predicate {
 public:
  enum class Kind { True, Atom, And, Or };

  /// The predicate satisfied by every state (quantitative value +inf).
  static Predicate truth();
  static Predicate atom(AtomicPredicate p);
  /// Conjunction; `true` operands are dropped.
  static Predicate conj(const Predicate& a, const Predicate& b);
  static Predicate disj(const Predicate& a, const Predicate& b);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  const AtomicPredicate& atomic() const;
  const Predicate& lhs() const;
  const Predicate& rhs() const;

  double quant(const State& s) const;
  bool holds(const State& s) const { return quant(s) > 0.0; }

  /// Structural equality.
  bool operator==(const Predicate& other) const;

  /// Number of nodes in the tree; used by generators and tests.
  std::size_t size() const;

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// SPECTRL specification: achieve b | phi ensuring b | phi1; phi2 | phi1 or phi2.
class Spec {
 public:
  enum class Kind { Achieve, Ensuring, Seq, Choice };

  static Spec achieve(Predicate b);
  static Spec ensuring(Spec phi, Predicate b);
  static Spec seq(Spec first, Spec second);
  static Spec choice(Spec left, Spec right);

  Kind kind() const;
  /// Predicate of Achieve / Ensuring nodes.
  const Predicate& pred() const;
  /// Sub-specification of Ensuring, first operand of Seq/Choice.
  const Spec& lhs() const;
  /// Second operand of Seq/Choice.
  const Spec& rhs() const;

  /// Number of operators |phi| (achieve, ensuring, ;, or).
  std::size_t size() const;
  std::size_t depth() const;

  bool operator==(const Spec& other) const;

 private:
  struct Node;
  explicit Spec(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Error from the DSL front end, carrying a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Named atomic predicate factories available to the parser.
class PredicateRegistry {
 public:
  using Factory = std::function<AtomicPredicate(std::span<const double>)>;

  /// `arity` < 0 accepts any argument count.
  void add(std::string name, int arity, Factory factory);
  bool contains(std::string_view name) const;
  /// Throws std::invalid_argument on unknown name or arity mismatch.
  AtomicPredicate make(std::string_view name, std::span<const double> args) const;

 private:
  struct Entry {
    int arity;
    Factory factory;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

Spec parse_spec(std::string_view text, const PredicateRegistry& registry);
Predicate parse_predicate(std::string_view text, const PredicateRegistry& registry);

/// Canonical DSL text; parse_spec(to_string(phi)) reproduces phi.
std::string to_string(const Spec& phi);
std::string to_string(const Predicate& b);

double eval_quant(const Predicate& b, const State& s);
bool eval_bool(const Predicate& b, const State& s);

/// Finite-trajectory satisfaction zeta |= phi, by dynamic programming over
/// (sub-specification, interval).
bool satisfies_spec(const Trajectory& zeta, const Spec& phi);
bool satisfies_spec(std::span<const State> states, const Spec& phi);

}  // namespace dirl
