#pragma once

// Formulas of the bimodal language: p | bot | a -> b | [0]a | [1]a.
// Immutable shared nodes; structural equality; a fixed total order used
// everywhere a canonical arrangement is needed (multisets, folds, output).

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bimodal {

enum class Kind : uint8_t { Var, Bot, Imp, Box };

enum class Polarity : uint8_t { Pos, Neg };

inline Polarity flip(Polarity b) {
  return b == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
}

struct shape_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a guarantee the theory promises was observed to fail; always a bug report
struct theorem_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Formula {
  struct Node {
    Kind kind;
    int index = -1;                    // Box
    std::string name;                  // Var
    std::shared_ptr<const Node> a, b;  // Imp: a -> b; Box: a
    uint32_t size = 1;
    uint64_t hash = 0;
  };

  std::shared_ptr<const Node> n_;

  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static uint64_t mix(uint64_t h, uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

  static const Node& deref(const Formula& f) { return *f.n_; }

public:
  static Formula var(std::string name) {
    if (name.empty()) throw shape_error("empty variable name");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    n->size = 1;
    n->hash = mix(0x56, std::hash<std::string>{}(n->name));
    return Formula(std::move(n));
  }

  static Formula bot() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bot;
    n->size = 1;
    n->hash = 0xb07;
    return Formula(std::move(n));
  }

  static Formula imp(const Formula& a, const Formula& b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Imp;
    n->a = a.n_;
    n->b = b.n_;
    n->size = a.size() + b.size() + 1;
    n->hash = mix(mix(0x17, a.hash()), b.hash());
    return Formula(std::move(n));
  }

  static Formula box(int index, const Formula& a) {
    if (index != 0 && index != 1) throw shape_error("box index must be 0 or 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Box;
    n->index = index;
    n->a = a.n_;
    n->size = a.size() + 1;
    n->hash = mix(mix(0xb0, uint64_t(index)), a.hash());
    return Formula(std::move(n));
  }

  // sugar
  static Formula top() { return imp(bot(), bot()); }
  static Formula neg(const Formula& a) { return imp(a, bot()); }
  static Formula disj(const Formula& a, const Formula& b) { return imp(neg(a), b); }
  static Formula conj(const Formula& a, const Formula& b) {
    return neg(disj(neg(a), neg(b)));
  }
  static Formula dia(int index, const Formula& a) { return neg(box(index, neg(a))); }

  Kind kind() const { return n_->kind; }

  const std::string& name() const {
    if (kind() != Kind::Var) throw shape_error("name() on non-variable");
    return n_->name;
  }

  int index() const {
    if (kind() != Kind::Box) throw shape_error("index() on non-box");
    return n_->index;
  }

  Formula left() const {
    if (kind() != Kind::Imp) throw shape_error("left() on non-implication");
    return Formula(n_->a);
  }

  Formula right() const {
    if (kind() != Kind::Imp) throw shape_error("right() on non-implication");
    return Formula(n_->b);
  }

  Formula body() const {
    if (kind() != Kind::Box) throw shape_error("body() on non-box");
    return Formula(n_->a);
  }

  uint32_t size() const { return n_->size; }
  uint64_t hash() const { return n_->hash; }

  // node identity; distinct pointers may still be structurally equal.  Memo
  // key for the recursive walkers below, which otherwise take time in the
  // tree size of a formula even when sharing keeps the node count small
  const void* id() const { return n_.get(); }

  bool operator==(const Formula& o) const {
    if (n_ == o.n_) return true;
    if (n_->hash != o.n_->hash || n_->kind != o.n_->kind || n_->size != o.n_->size)
      return false;
    switch (n_->kind) {
      case Kind::Var: return n_->name == o.n_->name;
      case Kind::Bot: return true;
      case Kind::Imp:
        return Formula(n_->a) == Formula(o.n_->a) && Formula(n_->b) == Formula(o.n_->b);
      case Kind::Box:
        return n_->index == o.n_->index && Formula(n_->a) == Formula(o.n_->a);
    }
    return false;
  }

  bool operator!=(const Formula& o) const { return !(*this == o); }

  // canonical order: Var < Bot < Imp < Box, then componentwise
  bool operator<(const Formula& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const Formula& o) const { return cmp(*this, o) <= 0; }

  static int cmp(const Formula& x, const Formula& y) {
    if (x.n_ == y.n_) return 0;
    if (x.kind() != y.kind()) return int(x.kind()) < int(y.kind()) ? -1 : 1;
    switch (x.kind()) {
      case Kind::Var: return x.n_->name.compare(y.n_->name);
      case Kind::Bot: return 0;
      case Kind::Imp: {
        int c = cmp(Formula(x.n_->a), Formula(y.n_->a));
        if (c) return c;
        return cmp(Formula(x.n_->b), Formula(y.n_->b));
      }
      case Kind::Box: {
        if (x.n_->index != y.n_->index) return x.n_->index < y.n_->index ? -1 : 1;
        return cmp(Formula(x.n_->a), Formula(y.n_->a));
      }
    }
    return 0;
  }
};

inline uint32_t complexity(const Formula& f) { return f.size(); }

struct parse_error : std::runtime_error {
  size_t offset;
  parse_error(size_t off, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(off) + ")"),
        offset(off) {}
};

namespace detail {

class Parser {
  std::string_view s_;
  size_t i_ = 0;

public:
  explicit Parser(std::string_view s) : s_(s) {}

  size_t pos() const { return i_; }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' ||
                              s_[i_] == '\r'))
      ++i_;
  }

  bool eof() {
    skip_ws();
    return i_ >= s_.size();
  }

  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  bool lit(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) == w) {
      i_ += w.size();
      return true;
    }
    return false;
  }

  // '|' only when not the start of a turnstile '|-'
  bool or_token() {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '|' &&
        !(i_ + 1 < s_.size() && s_[i_ + 1] == '-')) {
      ++i_;
      return true;
    }
    return lit("\\/");
  }

  bool turnstile(int& mode) {  // mode: -1 plain, 0, 1
    skip_ws();
    if (s_.substr(i_, 2) != "|-") return false;
    i_ += 2;
    mode = -1;
    if (i_ < s_.size() && (s_[i_] == '0' || s_[i_] == '1')) {
      mode = s_[i_] - '0';
      ++i_;
    }
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(i_, msg); }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (i_ >= s_.size() || !ident_start(s_[i_])) fail("expected identifier");
    size_t j = i_;
    while (j < s_.size() && ident_char(s_[j])) ++j;
    std::string w(s_.substr(i_, j - i_));
    i_ = j;
    return w;
  }

  Formula formula() { return imp_level(); }

  Formula imp_level() {
    Formula a = or_level();
    skip_ws();
    if (lit("->")) return Formula::imp(a, imp_level());  // right associative
    return a;
  }

  Formula or_level() {
    Formula a = and_level();
    while (or_token()) a = Formula::disj(a, and_level());
    return a;
  }

  Formula and_level() {
    Formula a = unary_level();
    while (true) {
      skip_ws();
      if (i_ < s_.size() && s_[i_] == '&') {
        ++i_;
        a = Formula::conj(a, unary_level());
      } else {
        break;
      }
    }
    return a;
  }

  Formula unary_level() {
    skip_ws();
    if (lit("~")) return Formula::neg(unary_level());
    if (lit("[0]")) return Formula::box(0, unary_level());
    if (lit("[1]")) return Formula::box(1, unary_level());
    if (lit("<0>")) return Formula::dia(0, unary_level());
    if (lit("<1>")) return Formula::dia(1, unary_level());
    return atom();
  }

  Formula atom() {
    skip_ws();
    if (i_ >= s_.size()) fail("unexpected end of input");
    if (s_[i_] == '(') {
      ++i_;
      Formula a = formula();
      skip_ws();
      if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
      ++i_;
      return a;
    }
    if (s_[i_] == '$') fail("'$' prefix is reserved for generated variables");
    std::string w = ident();
    if (w == "bot") return Formula::bot();
    if (w == "top") return Formula::top();
    return Formula::var(std::move(w));
  }
};

inline void print_rec(const Formula& f, std::string& out, int parent_prec) {
  // precedence: atoms 4, box 3, -> 0; only core syntax is emitted
  switch (f.kind()) {
    case Kind::Var: out += f.name(); return;
    case Kind::Bot: out += "bot"; return;
    case Kind::Box: {
      out += f.index() == 0 ? "[0]" : "[1]";
      print_rec(f.body(), out, 3);
      return;
    }
    case Kind::Imp: {
      bool paren = parent_prec > 0;
      if (paren) out += '(';
      print_rec(f.left(), out, 1);  // left operand needs parens if itself an ->
      out += " -> ";
      print_rec(f.right(), out, 0);
      if (paren) out += ')';
      return;
    }
  }
}

}  // namespace detail

inline Formula parse(std::string_view text) {
  detail::Parser p(text);
  Formula f = p.formula();
  if (!p.eof()) throw parse_error(p.pos(), "trailing input");
  return f;
}

inline std::string print(const Formula& f) {
  std::string out;
  detail::print_rec(f, out, 0);
  return out;
}

inline void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case Kind::Var:
    case Kind::Bot: return;
    case Kind::Imp:
      collect_subformulas(f.left(), out);
      collect_subformulas(f.right(), out);
      return;
    case Kind::Box: collect_subformulas(f.body(), out);
  }
}

inline std::vector<Formula> subformulas(const Formula& f) {
  std::set<Formula> s;
  collect_subformulas(f, s);
  return std::vector<Formula>(s.begin(), s.end());
}

namespace detail {

inline void voc_rec(const Formula& f, Polarity b, std::set<std::string>& pos,
                    std::set<std::string>& neg,
                    std::set<std::pair<const void*, Polarity>>& seen) {
  if (!seen.emplace(f.id(), b).second) return;
  switch (f.kind()) {
    case Kind::Var:
      (b == Polarity::Pos ? pos : neg).insert(f.name());
      return;
    case Kind::Bot: return;
    case Kind::Imp:
      voc_rec(f.left(), flip(b), pos, neg, seen);
      voc_rec(f.right(), b, pos, neg, seen);
      return;
    case Kind::Box: voc_rec(f.body(), b, pos, neg, seen);
  }
}

}  // namespace detail

inline std::set<std::string> voc(const Formula& f, Polarity b) {
  std::set<std::string> pos, neg;
  std::set<std::pair<const void*, Polarity>> seen;
  detail::voc_rec(f, Polarity::Pos, pos, neg, seen);
  return b == Polarity::Pos ? pos : neg;
}

inline std::set<std::string> vars(const Formula& f) {
  std::set<std::string> pos, neg;
  std::set<std::pair<const void*, Polarity>> seen;
  detail::voc_rec(f, Polarity::Pos, pos, neg, seen);
  pos.insert(neg.begin(), neg.end());
  return pos;
}

namespace detail {

struct Substituter {
  const std::map<std::string, Formula>& m;
  std::map<const void*, Formula> memo;

  Formula walk(const Formula& f) {
    switch (f.kind()) {
      case Kind::Var: {
        auto it = m.find(f.name());
        return it == m.end() ? f : it->second;
      }
      case Kind::Bot: return f;
      default: break;
    }
    auto hit = memo.find(f.id());
    if (hit != memo.end()) return hit->second;
    Formula out = f;
    if (f.kind() == Kind::Imp) {
      Formula a = walk(f.left()), b = walk(f.right());
      if (a != f.left() || b != f.right()) out = Formula::imp(a, b);
    } else {
      Formula a = walk(f.body());
      if (a != f.body()) out = Formula::box(f.index(), a);
    }
    memo.emplace(f.id(), out);
    return out;
  }
};

}  // namespace detail

// simultaneous substitution of variables
inline Formula substitute(const Formula& f, const std::map<std::string, Formula>& m) {
  detail::Substituter s{m, {}};
  return s.walk(f);
}

namespace detail {

inline bool is_modalized_rec(const Formula& f, const std::string& v,
                             std::map<const void*, bool>& memo) {
  switch (f.kind()) {
    case Kind::Var: return f.name() != v;
    case Kind::Bot: return true;
    case Kind::Box: return true;
    case Kind::Imp: break;
  }
  auto hit = memo.find(f.id());
  if (hit != memo.end()) return hit->second;
  bool out = is_modalized_rec(f.left(), v, memo) && is_modalized_rec(f.right(), v, memo);
  memo.emplace(f.id(), out);
  return out;
}

}  // namespace detail

// every occurrence of v lies strictly under a box
inline bool is_modalized(const Formula& f, const std::string& v) {
  std::map<const void*, bool> memo;
  return detail::is_modalized_rec(f, v, memo);
}

}  // namespace bimodal
