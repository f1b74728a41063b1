#pragma once

// Deterministic formula/sequent generators used by the self-check corpus and
// the tests: exhaustive enumeration by complexity and a seeded random source.

#include <cstdint>
#include <random>
#include <vector>

#include "bimodal/sequent.hpp"

namespace bimodal {

// all formulas over the given variables with complexity <= max_c,
// ordered by complexity, then construction order (deterministic)
inline std::vector<Formula> enumerate_formulas(const std::vector<std::string>& vars,
                                               unsigned max_c) {
  std::vector<std::vector<Formula>> by_c(max_c + 1);
  if (max_c >= 1) {
    for (const auto& v : vars) by_c[1].push_back(Formula::var(v));
    by_c[1].push_back(Formula::bot());
  }
  for (unsigned c = 2; c <= max_c; ++c) {
    for (unsigned ca = 1; ca + 2 <= c; ++ca) {
      unsigned cb = c - ca - 1;
      for (const Formula& a : by_c[ca])
        for (const Formula& b : by_c[cb]) by_c[c].push_back(Formula::imp(a, b));
    }
    for (const Formula& a : by_c[c - 1]) {
      by_c[c].push_back(Formula::box(0, a));
      by_c[c].push_back(Formula::box(1, a));
    }
  }
  std::vector<Formula> out;
  for (unsigned c = 1; c <= max_c; ++c)
    out.insert(out.end(), by_c[c].begin(), by_c[c].end());
  return out;
}

class Rng {
  std::mt19937_64 g_;

public:
  explicit Rng(uint64_t seed) : g_(seed) {}
  uint64_t next(uint64_t bound) {  // uniform in [0, bound)
    return std::uniform_int_distribution<uint64_t>(0, bound - 1)(g_);
  }
  bool flip() { return next(2) == 1; }
};

inline Formula random_formula(Rng& rng, const std::vector<std::string>& vars,
                              unsigned max_c) {
  if (max_c <= 1) {
    uint64_t k = rng.next(vars.size() + 1);
    return k < vars.size() ? Formula::var(vars[k]) : Formula::bot();
  }
  switch (rng.next(4)) {
    case 0: {
      uint64_t k = rng.next(vars.size() + 1);
      return k < vars.size() ? Formula::var(vars[k]) : Formula::bot();
    }
    case 1: {
      if (max_c < 3) return random_formula(rng, vars, max_c);
      unsigned ca = 1 + unsigned(rng.next(max_c - 2));
      return Formula::imp(random_formula(rng, vars, ca),
                          random_formula(rng, vars, max_c - 1 - ca));
    }
    default:
      return Formula::box(int(rng.next(2)), random_formula(rng, vars, max_c - 1));
  }
}

inline Multiset random_multiset(Rng& rng, const std::vector<std::string>& vars,
                                unsigned max_c, unsigned max_n) {
  std::vector<Formula> v;
  uint64_t n = rng.next(max_n + 1);
  for (uint64_t k = 0; k < n; ++k) v.push_back(random_formula(rng, vars, max_c));
  return ms(std::move(v));
}

inline Sequent random_sequent(Rng& rng, const std::vector<std::string>& vars,
                              unsigned max_c, unsigned max_n, Mode mode) {
  return Sequent{random_multiset(rng, vars, max_c, max_n),
                 random_multiset(rng, vars, max_c, max_n), mode};
}

}  // namespace bimodal
