#pragma once

// Lyndon fixpoints and equational systems.
//
// An equational system is a list of equations  x_i = body_i  with a sign per
// equation and pairwise distinct unknowns x_i.  The sign twists the vocabulary
// discipline: inside body_i, an unknown met at the polarity of the equation's
// sign must itself be +-signed, an unknown met at the opposite polarity must
// be --signed.  A solution replaces every unknown by an unknown-free formula
// making each equation a provable equivalence, with the components staying
// inside the free vocabulary of the system on the matching signed side.
//
// Two solvers, both by sequential elimination and back-substitution:
//   - solve_simple: every body is a box formula.  For a box formula f(x) the
//     formula f(top) is a fixpoint of f with respect to x (it needs, per box
//     index i, the axioms K_i and the Loeb axiom plus the mixed and same-index
//     transitivity schemes, all available in every calculus handled here).
//   - solve_positive_modalized: all signs are +, and body_i keeps the unknowns
//     x_0..x_i under boxes.  Each elimination step goes through
//     modalized_fixpoint, which replaces maximal boxed subformulas containing
//     the variable by fresh placeholders and solves the induced simple system.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bimodal/formula.hpp"

namespace bimodal {

namespace detail {

struct ConstSimplifier {
  Formula bot = Formula::bot();
  Formula top = Formula::top();
  std::map<const void*, Formula> memo;

  Formula walk(const Formula& f) {
    switch (f.kind()) {
      case Kind::Var:
      case Kind::Bot: return f;
      default: break;
    }
    auto hit = memo.find(f.id());
    if (hit != memo.end()) return hit->second;
    Formula out = step(f);
    memo.emplace(f.id(), out);
    return out;
  }

  Formula step(const Formula& f) {
    if (f.kind() == Kind::Box) {
      Formula a = walk(f.body());
      if (a == top) return top;
      if (a == f.body()) return f;
      return Formula::box(f.index(), a);
    }
    Formula a = walk(f.left()), b = walk(f.right());
    if (a == bot) return top;
    if (b == top) return top;
    if (a == top) return b;
    if (a == b) return top;
    if (b == bot && a.kind() == Kind::Imp && a.right() == bot)
      return a.left();  // ~~c becomes c
    if (a == f.left() && b == f.right()) return f;
    return Formula::imp(a, b);
  }
};

}  // namespace detail

// bottom-up top/bot propagation plus double negation removal; preserves
// provable equivalence, never introduces a variable, never unguards one
inline Formula simplify_consts(const Formula& f) {
  detail::ConstSimplifier s;
  return s.walk(f);
}

namespace detail {

// the conjunction sugar spelled out:  a & b  is  ~((~~a -> ~b))  hmm no:
// conj(a,b) = neg(disj(neg a, neg b)) with disj(x,y) = ~x -> y
inline bool match_neg(const Formula& f, Formula& a) {
  if (f.kind() != Kind::Imp || f.right().kind() != Kind::Bot) return false;
  a = f.left();
  return true;
}

inline bool match_disj(const Formula& f, Formula& a, Formula& b) {
  Formula na = Formula::bot();
  if (f.kind() != Kind::Imp || !match_neg(f.left(), na)) return false;
  a = na;
  b = f.right();
  return true;
}

inline bool match_conj(const Formula& f, Formula& a, Formula& b) {
  Formula inner = Formula::bot(), x = Formula::bot(), y = Formula::bot();
  if (!match_neg(f, inner) || !match_disj(inner, x, y)) return false;
  Formula na = Formula::bot(), nb = Formula::bot();
  if (!match_neg(x, na) || !match_neg(y, nb)) return false;
  a = na;
  b = nb;
  return true;
}

// stronger compaction than simplify_consts: additionally flattens nests of
// the conjunction/disjunction encodings, sorts the parts, and removes
// duplicates (idempotence).  Same guarantees: provable equivalence, no new
// variables, surviving occurrences keep their polarity and their boxes
struct Compactor {
  Formula bot = Formula::bot();
  Formula top = Formula::top();
  std::map<const void*, Formula> memo;

  Formula walk(const Formula& f) {
    switch (f.kind()) {
      case Kind::Var:
      case Kind::Bot: return f;
      default: break;
    }
    auto hit = memo.find(f.id());
    if (hit != memo.end()) return hit->second;
    Formula out = step(f);
    memo.emplace(f.id(), out);
    return out;
  }

  void conj_parts(const Formula& f, std::vector<Formula>& out) {
    Formula a = bot, b = bot;
    if (match_conj(f, a, b)) {
      conj_parts(walk(a), out);
      conj_parts(walk(b), out);
    } else {
      out.push_back(f);
    }
  }

  void disj_parts(const Formula& f, std::vector<Formula>& out) {
    Formula a = bot, b = bot;
    if (match_disj(f, a, b)) {
      disj_parts(walk(a), out);
      disj_parts(walk(b), out);
    } else {
      out.push_back(f);
    }
  }

  Formula step(const Formula& f) {
    if (f.kind() == Kind::Box) {
      Formula a = walk(f.body());
      if (a == top) return top;
      if (a == f.body()) return f;
      return Formula::box(f.index(), a);
    }
    Formula a = bot, b = bot;
    if (match_conj(f, a, b)) {
      std::vector<Formula> parts;
      conj_parts(walk(a), parts);
      conj_parts(walk(b), parts);
      std::sort(parts.begin(), parts.end());
      parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
      std::vector<Formula> kept;
      for (const Formula& p : parts) {
        if (p == bot) return bot;
        if (p != top) kept.push_back(p);
      }
      if (kept.empty()) return top;
      Formula acc = kept.back();
      for (size_t i = kept.size() - 1; i-- > 0;) acc = Formula::conj(kept[i], acc);
      return acc;
    }
    if (match_disj(f, a, b)) {
      std::vector<Formula> parts;
      disj_parts(walk(a), parts);
      disj_parts(walk(b), parts);
      std::sort(parts.begin(), parts.end());
      parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
      std::vector<Formula> kept;
      for (const Formula& p : parts) {
        if (p == top) return top;
        if (p != bot) kept.push_back(p);
      }
      if (kept.empty()) return bot;
      Formula acc = kept.back();
      for (size_t i = kept.size() - 1; i-- > 0;) acc = Formula::disj(kept[i], acc);
      return acc;
    }
    Formula l = walk(f.left()), r = walk(f.right());
    if (l == bot) return top;
    if (r == top) return top;
    if (l == top) return r;
    if (l == r) return top;
    if (r == bot && l.kind() == Kind::Imp && l.right() == bot)
      return l.left();  // ~~c becomes c
    if (l == f.left() && r == f.right()) return f;
    return Formula::imp(l, r);
  }
};

}  // namespace detail

inline Formula compact(const Formula& f) {
  detail::Compactor c;
  return c.walk(f);
}

struct Equation {
  std::string unknown;
  Polarity sign;
  Formula body;
};

using EquationalSystem = std::vector<Equation>;

namespace detail {

inline std::map<std::string, size_t> unknown_index(const EquationalSystem& sys) {
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < sys.size(); ++i)
    if (!idx.emplace(sys[i].unknown, i).second)
      throw shape_error("duplicate unknown " + sys[i].unknown);
  return idx;
}

inline bool mentions_rec(const Formula& f, const std::string& v,
                         std::map<const void*, bool>& memo) {
  switch (f.kind()) {
    case Kind::Var: return f.name() == v;
    case Kind::Bot: return false;
    default: break;
  }
  auto hit = memo.find(f.id());
  if (hit != memo.end()) return hit->second;
  bool out = f.kind() == Kind::Imp
                 ? mentions_rec(f.left(), v, memo) || mentions_rec(f.right(), v, memo)
                 : mentions_rec(f.body(), v, memo);
  memo.emplace(f.id(), out);
  return out;
}

inline bool mentions(const Formula& f, const std::string& v) {
  std::map<const void*, bool> memo;
  return mentions_rec(f, v, memo);
}

}  // namespace detail

// free vocabulary of the system on the given signed side: variables other
// than the unknowns, collected from the side of each body its sign selects
inline std::set<std::string> system_voc(const EquationalSystem& sys, Polarity b) {
  std::set<std::string> out;
  for (const Equation& e : sys) {
    Polarity side = b == Polarity::Pos ? e.sign : flip(e.sign);
    for (const std::string& v : voc(e.body, side)) out.insert(v);
  }
  for (const Equation& e : sys) out.erase(e.unknown);
  return out;
}

// the sign discipline described at the top of the file
inline void validate_system(const EquationalSystem& sys) {
  auto idx = detail::unknown_index(sys);
  for (const Equation& e : sys) {
    for (const std::string& v : voc(e.body, e.sign)) {
      auto it = idx.find(v);
      if (it != idx.end() && sys[it->second].sign != Polarity::Pos)
        throw shape_error("unknown " + v + " needs sign + given how it occurs in " +
                          print(e.body));
    }
    for (const std::string& v : voc(e.body, flip(e.sign))) {
      auto it = idx.find(v);
      if (it != idx.end() && sys[it->second].sign != Polarity::Neg)
        throw shape_error("unknown " + v + " needs sign - given how it occurs in " +
                          print(e.body));
    }
  }
}

inline bool is_simple_system(const EquationalSystem& sys) {
  for (const Equation& e : sys)
    if (e.body.kind() != Kind::Box) return false;
  return true;
}

// body_i may use the unknowns x_0..x_i only under a box
inline bool is_modalized_system(const EquationalSystem& sys) {
  for (size_t i = 0; i < sys.size(); ++i)
    for (size_t j = 0; j <= i; ++j)
      if (!is_modalized(sys[i].body, sys[j].unknown)) return false;
  return true;
}

inline bool is_positive_system(const EquationalSystem& sys) {
  for (const Equation& e : sys)
    if (e.sign != Polarity::Pos) return false;
  return true;
}

// vocabulary half of the solution conditions: every component stays inside
// the free vocabulary per signed side, so in particular mentions no unknown
inline bool solution_vocabulary_ok(const EquationalSystem& sys,
                                   const std::vector<Formula>& sol) {
  if (sol.size() != sys.size()) return false;
  std::set<std::string> vp = system_voc(sys, Polarity::Pos);
  std::set<std::string> vn = system_voc(sys, Polarity::Neg);
  auto inside = [](const std::set<std::string>& sub, const std::set<std::string>& sup) {
    return std::includes(sup.begin(), sup.end(), sub.begin(), sub.end());
  };
  for (size_t i = 0; i < sys.size(); ++i) {
    if (!inside(voc(sol[i], sys[i].sign), vp)) return false;
    if (!inside(voc(sol[i], flip(sys[i].sign)), vn)) return false;
  }
  return true;
}

// for a box formula f the substitution instance f[top/v] is a fixpoint of f
// with respect to v; returned verbatim, callers simplify if they want to
inline Formula basic_fixpoint(const Formula& f, const std::string& v) {
  if (f.kind() != Kind::Box) throw shape_error("basic_fixpoint needs a box formula");
  return substitute(f, {{v, Formula::top()}});
}

namespace detail {

// rewrites every maximal boxed subformula containing v into a placeholder
// variable, one per (subformula, occurrence polarity) pair; the collected
// equations still carry v and get the skeleton plugged back in by the caller
struct Skeletonizer {
  const std::string& v;
  const std::set<std::string>& taken;  // variables of the original formula
  std::map<std::pair<Formula, bool>, Formula> memo;
  EquationalSystem eqs;
  std::map<std::pair<const void*, bool>, Formula> cache;
  std::map<const void*, bool> vseen;

  Formula fresh(Polarity sign) {
    std::string name =
        (sign == Polarity::Pos ? "$q" : "$r") + std::to_string(eqs.size());
    while (taken.count(name)) name += '\'';
    return Formula::var(name);
  }

  Formula walk(const Formula& f, Polarity sign) {
    switch (f.kind()) {
      case Kind::Var:
        if (f.name() == v) throw shape_error("fixpoint variable is not modalized");
        return f;
      case Kind::Bot: return f;
      case Kind::Imp: {
        auto key = std::make_pair(f.id(), sign == Polarity::Neg);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Formula a = walk(f.left(), flip(sign));
        Formula b = walk(f.right(), sign);
        Formula out = a == f.left() && b == f.right() ? f : Formula::imp(a, b);
        cache.emplace(key, out);
        return out;
      }
      case Kind::Box: {
        if (!mentions_rec(f, v, vseen)) return f;
        auto key = std::make_pair(f, sign == Polarity::Neg);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Formula ph = fresh(sign);
        memo.emplace(key, ph);
        eqs.push_back(Equation{ph.name(), sign, f});
        return ph;
      }
    }
    throw shape_error("unreachable");
  }
};

// eliminate unknowns left to right, then back-substitute; fix(body, x) must
// return an x-free formula e with  |- e <-> body[e/x].  simp is applied after
// every elimination and substitution step and must preserve provable
// equivalence, introduce no variable, and keep occurrences under their boxes
template <class Fix, class Simp>
std::vector<Formula> solve_sequential(const EquationalSystem& sys, Fix fix, Simp simp) {
  std::vector<Formula> bodies;
  bodies.reserve(sys.size());
  for (const Equation& e : sys) bodies.push_back(e.body);
  std::vector<Formula> sol;
  sol.reserve(sys.size());
  for (size_t i = 0; i < sys.size(); ++i) {
    const std::string& x = sys[i].unknown;
    // substitution may have collapsed the body to a formula without x, which
    // is then trivially its own fixpoint
    Formula psi = simp(detail::mentions(bodies[i], x) ? fix(bodies[i], x) : bodies[i]);
    std::map<std::string, Formula> m{{x, psi}};
    for (size_t k = i + 1; k < sys.size(); ++k)
      bodies[k] = simp(substitute(bodies[k], m));
    sol.push_back(std::move(psi));
  }
  for (size_t i = sys.size(); i-- > 0;) {
    std::map<std::string, Formula> m;
    for (size_t k = i + 1; k < sys.size(); ++k) m.emplace(sys[k].unknown, sol[k]);
    if (!m.empty()) sol[i] = simp(substitute(sol[i], m));
  }
  return sol;
}

}  // namespace detail

// solution of a system whose bodies are all box formulas
template <class Simp>
std::vector<Formula> solve_simple(const EquationalSystem& sys, Simp simp) {
  validate_system(sys);
  if (!is_simple_system(sys)) throw shape_error("solve_simple needs box bodies");
  return detail::solve_sequential(sys, basic_fixpoint, simp);
}

inline std::vector<Formula> solve_simple(const EquationalSystem& sys) {
  return solve_simple(sys, simplify_consts);
}

// Lyndon fixpoint of f with respect to v, for f modalized in v and without
// negative occurrences of v: the result e satisfies |- e <-> f[e/v] and only
// uses variables of f other than v, on the signed side they already had
template <class Simp>
Formula modalized_fixpoint(const Formula& f, const std::string& v, Simp simp) {
  if (!is_modalized(f, v)) throw shape_error("formula is not modalized in " + v);
  if (voc(f, Polarity::Neg).count(v))
    throw shape_error("fixpoint variable " + v + " occurs negatively");
  std::set<std::string> taken = vars(f);
  detail::Skeletonizer sk{v, taken, {}, {}, {}, {}};
  Formula skel = sk.walk(f, Polarity::Pos);
  for (Equation& e : sk.eqs) e.body = substitute(e.body, {{v, skel}});
  std::vector<Formula> sol = solve_simple(sk.eqs, simp);
  std::map<std::string, Formula> m;
  for (size_t i = 0; i < sk.eqs.size(); ++i) m.emplace(sk.eqs[i].unknown, sol[i]);
  return simp(substitute(skel, m));
}

inline Formula modalized_fixpoint(const Formula& f, const std::string& v) {
  return modalized_fixpoint(f, v, simplify_consts);
}

// solution of a +-signed system where body_i is modalized in x_0..x_i; the
// left-to-right elimination order is what makes every step well defined
template <class Simp>
std::vector<Formula> solve_positive_modalized(const EquationalSystem& sys, Simp simp) {
  validate_system(sys);
  if (!is_positive_system(sys))
    throw shape_error("solve_positive_modalized needs +-signed equations");
  if (!is_modalized_system(sys))
    throw shape_error("body i must be modalized in unknowns 0..i");
  return detail::solve_sequential(
      sys, [&simp](const Formula& b, const std::string& x) {
        return modalized_fixpoint(b, x, simp);
      },
      simp);
}

inline std::vector<Formula> solve_positive_modalized(const EquationalSystem& sys) {
  return solve_positive_modalized(sys, simplify_consts);
}

}  // namespace bimodal
