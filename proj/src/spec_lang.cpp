#include "dirl/spec_lang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace dirl {

// ---------------------------------------------------------------------------
// Predicates

AtomicPredicate::AtomicPredicate(std::string name, std::vector<double> args, Evaluator eval)
    : name_(std::move(name)),
      args_(std::move(args)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))) {}

bool AtomicPredicate::same_as(const AtomicPredicate& other) const {
  return name_ == other.name_ && args_ == other.args_;
}

struct Predicate::Node {
  Kind kind;
  std::optional<AtomicPredicate> atom;
  Predicate lhs{nullptr};
  Predicate rhs{nullptr};
};

Predicate Predicate::truth() {
  static const Predicate t{std::make_shared<const Node>(Node{Kind::True, std::nullopt, Predicate{nullptr},
                                                             Predicate{nullptr}})};
  return t;
}

Predicate Predicate::atom(AtomicPredicate p) {
  return Predicate{std::make_shared<const Node>(Node{Kind::Atom, std::move(p), Predicate{nullptr},
                                                     Predicate{nullptr}})};
}

Predicate Predicate::conj(const Predicate& a, const Predicate& b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  return Predicate{std::make_shared<const Node>(Node{Kind::And, std::nullopt, a, b})};
}

Predicate Predicate::disj(const Predicate& a, const Predicate& b) {
  return Predicate{std::make_shared<const Node>(Node{Kind::Or, std::nullopt, a, b})};
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
const AtomicPredicate& Predicate::atomic() const { return *node_->atom; }
const Predicate& Predicate::lhs() const { return node_->lhs; }
const Predicate& Predicate::rhs() const { return node_->rhs; }

double Predicate::quant(const State& s) const {
  switch (node_->kind) {
    case Kind::True:
      return std::numeric_limits<double>::infinity();
    case Kind::Atom:
      return node_->atom->quant(s);
    case Kind::And:
      return std::min(node_->lhs.quant(s), node_->rhs.quant(s));
    case Kind::Or:
      return std::max(node_->lhs.quant(s), node_->rhs.quant(s));
  }
  return 0.0;
}

bool Predicate::operator==(const Predicate& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::True:
      return true;
    case Kind::Atom:
      return atomic().same_as(other.atomic());
    case Kind::And:
    case Kind::Or:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
  return false;
}

std::size_t Predicate::size() const {
  switch (kind()) {
    case Kind::True:
    case Kind::Atom:
      return 1;
    default:
      return 1 + lhs().size() + rhs().size();
  }
}

double eval_quant(const Predicate& b, const State& s) { return b.quant(s); }
bool eval_bool(const Predicate& b, const State& s) { return b.holds(s); }

// ---------------------------------------------------------------------------
// Specifications

struct Spec::Node {
  Kind kind;
  Predicate pred{Predicate::truth()};
  std::optional<Spec> lhs;
  std::optional<Spec> rhs;
};

Spec Spec::achieve(Predicate b) {
  return Spec{std::make_shared<const Node>(Node{Kind::Achieve, std::move(b), std::nullopt, std::nullopt})};
}

Spec Spec::ensuring(Spec phi, Predicate b) {
  return Spec{std::make_shared<const Node>(Node{Kind::Ensuring, std::move(b), std::move(phi), std::nullopt})};
}

Spec Spec::seq(Spec first, Spec second) {
  return Spec{std::make_shared<const Node>(
      Node{Kind::Seq, Predicate::truth(), std::move(first), std::move(second)})};
}

Spec Spec::choice(Spec left, Spec right) {
  return Spec{std::make_shared<const Node>(
      Node{Kind::Choice, Predicate::truth(), std::move(left), std::move(right)})};
}

Spec::Kind Spec::kind() const { return node_->kind; }
const Predicate& Spec::pred() const { return node_->pred; }
const Spec& Spec::lhs() const { return *node_->lhs; }
const Spec& Spec::rhs() const { return *node_->rhs; }

std::size_t Spec::size() const {
  switch (kind()) {
    case Kind::Achieve:
      return 1;
    case Kind::Ensuring:
      return 1 + lhs().size();
    default:
      return 1 + lhs().size() + rhs().size();
  }
}

std::size_t Spec::depth() const {
  switch (kind()) {
    case Kind::Achieve:
      return 1;
    case Kind::Ensuring:
      return 1 + lhs().depth();
    default:
      return 1 + std::max(lhs().depth(), rhs().depth());
  }
}

bool Spec::operator==(const Spec& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Achieve:
      return pred() == other.pred();
    case Kind::Ensuring:
      return pred() == other.pred() && lhs() == other.lhs();
    default:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
}

// ---------------------------------------------------------------------------
// Registry

void PredicateRegistry::add(std::string name, int arity, Factory factory) {
  entries_[std::move(name)] = Entry{arity, std::move(factory)};
}

bool PredicateRegistry::contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }

AtomicPredicate PredicateRegistry::make(std::string_view name, std::span<const double> args) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::invalid_argument("unknown atomic predicate '" + std::string(name) + "'");
  if (it->second.arity >= 0 && static_cast<std::size_t>(it->second.arity) != args.size()) {
    throw std::invalid_argument("predicate '" + std::string(name) + "' expects " +
                                std::to_string(it->second.arity) + " arguments, got " +
                                std::to_string(args.size()));
  }
  return it->second.factory(args);
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, LParen, RParen, Comma, Semi, Or, And, Ensuring, Achieve, True, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::End, {}, 0.0, line, col};
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      out.push_back(t);
      advance(1);
    };
    switch (c) {
      case '(':
        single(Tok::LParen);
        continue;
      case ')':
        single(Tok::RParen);
        continue;
      case ',':
        single(Tok::Comma);
        continue;
      case ';':
        single(Tok::Semi);
        continue;
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.text = std::string(src.substr(i, j - i));
      if (t.text == "or")
        t.kind = Tok::Or;
      else if (t.text == "and")
        t.kind = Tok::And;
      else if (t.text == "ensuring")
        t.kind = Tok::Ensuring;
      else if (t.text == "achieve")
        t.kind = Tok::Achieve;
      else if (t.text == "true")
        t.kind = Tok::True;
      else
        t.kind = Tok::Ident;
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      std::size_t j = i;
      if (src[j] == '+') ++j;
      const char* first = src.data() + j;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, src.data() + src.size(), v);
      if (ec != std::errc{} || ptr == first) throw ParseError("malformed number", line, col);
      t.kind = Tok::Number;
      t.number = v;
      t.text = std::string(src.substr(i, static_cast<std::size_t>(ptr - src.data()) - i));
      out.push_back(t);
      advance(static_cast<std::size_t>(ptr - src.data()) - i);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back(Token{Tok::End, "<end of input>", 0.0, line, col});
  return out;
}

// Recursive descent over
//   spec   := seq { "or" seq }
//   seq    := ens { ";" ens }            (right-associative)
//   ens    := base { "ensuring" term }
//   base   := "achieve" term | "(" spec ")" | term
//   pred   := term { "or" term }
//   term   := factor { "and" factor }
//   factor := atom | "true" | "(" pred ")"
// A bare `or` between specification operands is choice; a predicate-level
// disjunction must be parenthesized after `achieve`/`ensuring`.
class Parser {
 public:
  Parser(std::string_view src, const PredicateRegistry& reg) : toks_(tokenize(src)), reg_(reg) {}

  Spec parse_spec_all() {
    Spec s = spec();
    expect_end();
    return s;
  }

  Predicate parse_pred_all() {
    Predicate p = pred();
    expect_end();
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " near '" + peek().text + "'", peek().line, peek().column);
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected trailing input");
  }

  Spec spec() {
    Spec s = seq();
    while (accept(Tok::Or)) s = Spec::choice(s, seq());
    return s;
  }

  Spec seq() {
    Spec first = ens();
    if (accept(Tok::Semi)) return Spec::seq(first, seq());
    return first;
  }

  Spec ens() {
    Spec s = base();
    while (accept(Tok::Ensuring)) s = Spec::ensuring(s, term());
    return s;
  }

  Spec base() {
    if (accept(Tok::Achieve)) return Spec::achieve(term());
    if (accept(Tok::LParen)) {
      Spec s = spec();
      expect(Tok::RParen, "')'");
      return s;
    }
    return Spec::achieve(term());
  }

  Predicate pred() {
    Predicate p = term();
    while (accept(Tok::Or)) p = Predicate::disj(p, term());
    return p;
  }

  Predicate term() {
    Predicate p = factor();
    while (accept(Tok::And)) p = Predicate::conj(p, factor());
    return p;
  }

  Predicate factor() {
    if (accept(Tok::True)) return Predicate::truth();
    if (accept(Tok::LParen)) {
      Predicate p = pred();
      expect(Tok::RParen, "')'");
      return p;
    }
    if (peek().kind != Tok::Ident) fail("expected atomic predicate");
    const Token name = next();
    if (!reg_.contains(name.text)) {
      throw ParseError("unknown atomic predicate '" + name.text + "'", name.line, name.column);
    }
    expect(Tok::LParen, "'('");
    std::vector<double> args;
    do {
      if (peek().kind != Tok::Number) fail("expected number");
      args.push_back(next().number);
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    try {
      return Predicate::atom(reg_.make(name.text, args));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), name.line, name.column);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const PredicateRegistry& reg_;
};

// ---------------------------------------------------------------------------
// Printer

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void print_pred(std::ostream& os, const Predicate& b, int level);

// level 0: pred (or allowed), 1: term (and allowed), 2: factor.
void print_pred(std::ostream& os, const Predicate& b, int level) {
  switch (b.kind()) {
    case Predicate::Kind::True:
      os << "true";
      return;
    case Predicate::Kind::Atom: {
      const auto& a = b.atomic();
      os << a.name() << '(';
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (i) os << ", ";
        os << format_number(a.args()[i]);
      }
      os << ')';
      return;
    }
    case Predicate::Kind::And: {
      const bool paren = level > 1;
      if (paren) os << '(';
      print_pred(os, b.lhs(), 1);
      os << " and ";
      print_pred(os, b.rhs(), 2);
      if (paren) os << ')';
      return;
    }
    case Predicate::Kind::Or: {
      const bool paren = level > 0;
      if (paren) os << '(';
      print_pred(os, b.lhs(), 0);
      os << " or ";
      print_pred(os, b.rhs(), 1);
      if (paren) os << ')';
      return;
    }
  }
}

// A bare operand starting with '(' would be read as a nested specification.
bool leads_with_disjunction(const Predicate& b) {
  if (b.kind() == Predicate::Kind::Or) return true;
  if (b.kind() == Predicate::Kind::And) return leads_with_disjunction(b.lhs());
  return false;
}

// level 0: choice, 1: seq, 2: ensuring operand, 3: base.
void print_spec(std::ostream& os, const Spec& phi, int level) {
  switch (phi.kind()) {
    case Spec::Kind::Achieve:
      if (leads_with_disjunction(phi.pred())) os << "achieve ";
      print_pred(os, phi.pred(), 1);
      return;
    case Spec::Kind::Ensuring: {
      const bool paren = level > 2;
      if (paren) os << '(';
      print_spec(os, phi.lhs(), 2);
      os << " ensuring ";
      print_pred(os, phi.pred(), 1);
      if (paren) os << ')';
      return;
    }
    case Spec::Kind::Seq: {
      const bool paren = level > 1;
      if (paren) os << '(';
      print_spec(os, phi.lhs(), 2);
      os << "; ";
      print_spec(os, phi.rhs(), 1);
      if (paren) os << ')';
      return;
    }
    case Spec::Kind::Choice: {
      const bool paren = level > 0;
      if (paren) os << '(';
      print_spec(os, phi.lhs(), 0);
      os << " or ";
      print_spec(os, phi.rhs(), 1);
      if (paren) os << ')';
      return;
    }
  }
}

}  // namespace

Spec parse_spec(std::string_view text, const PredicateRegistry& registry) {
  return Parser(text, registry).parse_spec_all();
}

Predicate parse_predicate(std::string_view text, const PredicateRegistry& registry) {
  return Parser(text, registry).parse_pred_all();
}

std::string to_string(const Spec& phi) {
  std::ostringstream os;
  print_spec(os, phi, 0);
  return os.str();
}

std::string to_string(const Predicate& b) {
  std::ostringstream os;
  print_pred(os, b, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Satisfaction

namespace {

class SpecChecker {
 public:
  SpecChecker(std::span<const State> states, const Spec& phi) : states_(states), n_(states.size()) {
    index(phi);
    memo_.assign(nodes_.size() * n_ * n_, -1);
  }

  bool run() { return sat(0, 0, n_ - 1); }

 private:
  struct Entry {
    const Spec* spec;
    int lhs = -1;
    int rhs = -1;
    std::vector<char> holds;  // per-state truth of the node's predicate
  };

  int index(const Spec& phi) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Entry{&phi, -1, -1, {}});
    if (phi.kind() == Spec::Kind::Achieve || phi.kind() == Spec::Kind::Ensuring) {
      std::vector<char> h(n_);
      for (std::size_t i = 0; i < n_; ++i) h[i] = phi.pred().holds(states_[i]) ? 1 : 0;
      nodes_[id].holds = std::move(h);
    }
    if (phi.kind() != Spec::Kind::Achieve) {
      const int l = index(phi.lhs());
      nodes_[id].lhs = l;
    }
    if (phi.kind() == Spec::Kind::Seq || phi.kind() == Spec::Kind::Choice) {
      const int r = index(phi.rhs());
      nodes_[id].rhs = r;
    }
    return id;
  }

  bool sat(int node, std::size_t i, std::size_t j) {
    signed char& m = memo_[(static_cast<std::size_t>(node) * n_ + i) * n_ + j];
    if (m >= 0) return m != 0;
    const Entry& e = nodes_[node];
    bool r = false;
    switch (e.spec->kind()) {
      case Spec::Kind::Achieve:
        for (std::size_t k = i; k <= j && !r; ++k) r = e.holds[k] != 0;
        break;
      case Spec::Kind::Ensuring:
        r = true;
        for (std::size_t k = i; k <= j && r; ++k) r = e.holds[k] != 0;
        r = r && sat(e.lhs, i, j);
        break;
      case Spec::Kind::Seq:
        for (std::size_t k = i; k < j && !r; ++k) r = sat(e.lhs, i, k) && sat(e.rhs, k + 1, j);
        break;
      case Spec::Kind::Choice:
        r = sat(e.lhs, i, j) || sat(e.rhs, i, j);
        break;
    }
    m = r ? 1 : 0;
    return r;
  }

  std::span<const State> states_;
  std::size_t n_;
  std::vector<Entry> nodes_;
  std::vector<signed char> memo_;
};

}  // namespace

bool satisfies_spec(std::span<const State> states, const Spec& phi) {
  if (states.empty()) throw std::invalid_argument("satisfies_spec: empty trajectory");
  return SpecChecker(states, phi).run();
}

bool satisfies_spec(const Trajectory& zeta, const Spec& phi) { return satisfies_spec(zeta.states, phi); }

}  // namespace dirl
