#pragma once

// Multiset sequents with an optional mode marker used by the ER systems:
// Plain "|-", ER0 "|-0", ER1 "|-1".  Multisets are kept canonically sorted.

#include <algorithm>
#include <string>
#include <vector>

#include "bimodal/formula.hpp"

namespace bimodal {

enum class Mode : uint8_t { Plain, ER0, ER1 };

using Multiset = std::vector<Formula>;  // invariant: sorted by canonical order

inline Multiset ms(std::vector<Formula> v = {}) {
  std::sort(v.begin(), v.end());
  return v;
}

namespace msops {

inline Multiset sum(const Multiset& a, const Multiset& b) {
  Multiset out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// removes one occurrence per element of b; throws if missing
inline Multiset diff(const Multiset& a, const Multiset& b) {
  Multiset out = a;
  for (const Formula& f : b) {
    auto it = std::lower_bound(out.begin(), out.end(), f);
    if (it == out.end() || *it != f) throw shape_error("multiset difference underflow");
    out.erase(it);
  }
  return out;
}

inline size_t count(const Multiset& a, const Formula& f) {
  auto [lo, hi] = std::equal_range(a.begin(), a.end(), f);
  return size_t(hi - lo);
}

inline bool contains(const Multiset& a, const Formula& f) { return count(a, f) > 0; }

// a subseteq b as multisets
inline bool subset(const Multiset& a, const Multiset& b) {
  size_t j = 0;
  for (const Formula& f : a) {
    while (j < b.size() && b[j] < f) ++j;
    if (j >= b.size() || b[j] != f) return false;
    ++j;
  }
  return true;
}

inline Multiset dedup(const Multiset& a) {
  Multiset out;
  for (const Formula& f : a)
    if (out.empty() || out.back() != f) out.push_back(f);
  return out;
}

inline Multiset added(const Multiset& whole, const Multiset& part) {
  return diff(whole, part);
}

}  // namespace msops

struct Sequent {
  Multiset left, right;
  Mode mode = Mode::Plain;

  bool operator==(const Sequent& o) const {
    return mode == o.mode && left == o.left && right == o.right;
  }
  bool operator!=(const Sequent& o) const { return !(*this == o); }
  bool operator<(const Sequent& o) const {
    if (mode != o.mode) return int(mode) < int(o.mode);
    if (left != o.left)
      return std::lexicographical_compare(left.begin(), left.end(), o.left.begin(),
                                          o.left.end());
    return std::lexicographical_compare(right.begin(), right.end(), o.right.begin(),
                                        o.right.end());
  }
};

inline Sequent make_sequent(std::vector<Formula> l, std::vector<Formula> r,
                            Mode m = Mode::Plain) {
  return Sequent{ms(std::move(l)), ms(std::move(r)), m};
}

inline Sequent dedup(const Sequent& s) {
  return Sequent{msops::dedup(s.left), msops::dedup(s.right), s.mode};
}

// [i]S for every member
inline Multiset box_prefix(int i, const Multiset& m) {
  Multiset out;
  out.reserve(m.size());
  for (const Formula& f : m) out.push_back(Formula::box(i, f));
  return ms(std::move(out));
}

// S together with [i]S
inline Multiset dot_box(int i, const Multiset& m) {
  return msops::sum(m, box_prefix(i, m));
}

namespace detail {
inline Formula fold_right(const std::vector<Formula>& fs, bool conj, const Formula& empty) {
  if (fs.empty()) return empty;
  Formula acc = fs.back();
  for (size_t k = fs.size() - 1; k-- > 0;)
    acc = conj ? Formula::conj(fs[k], acc) : Formula::disj(fs[k], acc);
  return acc;
}
}  // namespace detail

// single-formula reading of a sequent; the ER1 mode adds an outer [1]
inline Formula flat(const Sequent& s) {
  Formula core = Formula::imp(detail::fold_right(s.left, true, Formula::top()),
                              detail::fold_right(s.right, false, Formula::bot()));
  if (s.mode == Mode::ER1) return Formula::box(1, core);
  return core;
}

inline std::vector<Formula> subformulas(const Sequent& s) {
  std::set<Formula> acc;
  for (const Formula& f : s.left) collect_subformulas(f, acc);
  for (const Formula& f : s.right) collect_subformulas(f, acc);
  return std::vector<Formula>(acc.begin(), acc.end());
}

inline Sequent parse_sequent(std::string_view text) {
  detail::Parser p(text);
  std::vector<Formula> l, r;
  int mode = -2;
  if (!p.turnstile(mode)) {
    l.push_back(p.formula());
    while (p.lit(",")) l.push_back(p.formula());
    if (!p.turnstile(mode)) p.fail("expected '|-'");
  }
  if (!p.eof()) {
    r.push_back(p.formula());
    while (p.lit(",")) r.push_back(p.formula());
  }
  if (!p.eof()) p.fail("trailing input");
  Mode m = mode == 0 ? Mode::ER0 : mode == 1 ? Mode::ER1 : Mode::Plain;
  return make_sequent(std::move(l), std::move(r), m);
}

inline std::string print(const Sequent& s) {
  std::string out;
  for (size_t k = 0; k < s.left.size(); ++k) {
    if (k) out += ", ";
    out += print(s.left[k]);
  }
  if (!s.left.empty()) out += ' ';
  out += s.mode == Mode::ER0 ? "|-0" : s.mode == Mode::ER1 ? "|-1" : "|-";
  for (size_t k = 0; k < s.right.size(); ++k) {
    out += k ? ", " : " ";
    out += print(s.right[k]);
  }
  return out;
}

}  // namespace bimodal
