#pragma once
// Backward proof search for the wellfounded and the cyclic calculi.
//
// The wellfounded engine works on dedup'd sequents: rule instances are built
// on the dedup'd conclusion and duplicated premise occurrences are restored
// by weakening the found subproof.  Branch repeats are pruned; successes and
// context-free failures are memoised.
//
// The cyclic engine keeps exact multisets so that a fold target matches its
// companion on the nose.  A branch folds at the deepest ancestor carrying an
// identical sequent with a modal edge in between, and gives up when an
// ancestor subsumes the current sequent (same underlying set, no more
// copies anywhere) — that keeps paths finite without a contraction rule.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "bimodal/proof.hpp"
#include "bimodal/transform.hpp"

namespace bimodal {

enum class Status { Proved, Unprovable, Budget };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Proved: return "proved";
    case Status::Unprovable: return "unprovable";
    default: return "budget";
  }
}

struct SearchResult {
  Status status = Status::Unprovable;
  CyclicProof proof;  // meaningful iff status == Proved
  uint64_t expanded = 0;
};

inline uint64_t default_budget() {
  if (const char* e = std::getenv("BIMODAL_BUDGET")) {
    uint64_t v = std::strtoull(e, nullptr, 10);
    if (v > 0) return v;
  }
  return 1000000;
}

namespace detail {

struct budget_out {};

// Candidate steps at a saturated sequent: er10 on each distinct left-hand
// [0]-formula whose body is absent (mode 1 of the ER family only), then the
// modal rule on each distinct right-hand box, index 0 before index 1.  The
// sigma groups take one copy per distinct box; surplus copies stay behind as
// conclusion context, so premises never carry duplicates a cyclic fold would
// have to match.
inline std::vector<RuleInstance> stable_alternatives(const Calculus& c,
                                                     const Sequent& s) {
  std::vector<RuleInstance> out;
  if (er_family(c.id) && s.mode == Mode::ER1) {
    std::set<Formula> seen;
    for (const Formula& f : s.left) {
      if (f.kind() != Kind::Box || f.index() != 0) continue;
      if (!seen.insert(f).second) continue;
      if (msops::contains(s.left, f.body())) continue;
      out.push_back(rules::er10(f, msops::diff(s.left, {f}), s.right));
    }
  }
  Multiset sig0, sig1, rest;
  std::set<Formula> seen_box;
  for (const Formula& f : s.left) {
    if (f.kind() == Kind::Box && seen_box.insert(f).second)
      (f.index() == 0 ? sig0 : sig1).push_back(f.body());
    else
      rest.push_back(f);
  }
  for (int i : {0, 1}) {
    std::set<Formula> seen;
    for (const Formula& f : s.right) {
      if (f.kind() != Kind::Box || f.index() != i) continue;
      if (!seen.insert(f).second) continue;
      out.push_back(rules::modal(c.id, i, f.body(), sig0, sig1, rest,
                                 msops::diff(s.right, {f}), s.mode));
    }
  }
  return out;
}

// closures and the committed invertible steps, shared by both engines
//
// Beyond the leaf rules, a sequent with the same formula on both sides closes
// by the admissible general identity; the expanded derivation is attached so
// the result stays a plain checkable proof.
inline ProofPtr identity_close(const Calculus& c, const Sequent& s) {
  std::set<Formula> right(s.right.begin(), s.right.end());
  for (const Formula& f : s.left)
    if (f.kind() != Kind::Var && right.count(f))
      return identity_proof(c, f, msops::diff(s.left, {f}),
                            msops::diff(s.right, {f}), s.mode);
  return nullptr;
}

inline bool close_instance(const Sequent& s, RuleInstance& out) {
  if (msops::contains(s.left, Formula::bot())) {
    out = rules::botL(msops::diff(s.left, {Formula::bot()}), s.right, s.mode);
    return true;
  }
  for (const Formula& f : s.left)
    if (f.kind() == Kind::Var && msops::contains(s.right, f)) {
      out = rules::ax(f, msops::diff(s.left, {f}), msops::diff(s.right, {f}),
                      s.mode);
      return true;
    }
  return false;
}

inline bool committed_instance(const Sequent& s, RuleInstance& out) {
  if (msops::contains(s.right, Formula::bot())) {
    out = rules::botR(s.left, msops::diff(s.right, {Formula::bot()}), s.mode);
    return true;
  }
  for (const Formula& f : s.right)
    if (f.kind() == Kind::Imp) {
      out = rules::impR(f, s.left, msops::diff(s.right, {f}), s.mode);
      return true;
    }
  for (const Formula& f : s.left)
    if (f.kind() == Kind::Imp) {
      out = rules::impL(f, msops::diff(s.left, {f}), s.right, s.mode);
      return true;
    }
  return false;
}

struct SearcherG {
  Calculus calc;
  uint64_t budget;
  uint64_t expanded = 0;

  std::set<Sequent> on_path{};
  std::map<Sequent, ProofPtr> proved{};
  std::set<Sequent> failed{};

  // proof of the dedup'd sequent s, or null; `tainted` is set when the
  // failure leaned on a branch repeat and must not be memoised
  ProofPtr search(const Sequent& s, bool& tainted) {
    if (++expanded > budget) throw budget_out{};
    if (auto it = proved.find(s); it != proved.end()) return it->second;
    RuleInstance inst;
    if (close_instance(s, inst)) return proved[s] = pnode(inst);
    if (failed.count(s)) return nullptr;
    if (on_path.count(s)) {
      tainted = true;
      return nullptr;
    }
    if (ProofPtr idp = identity_close(calc, s)) return proved[s] = idp;

    bool taint = false;
    ProofPtr result;
    on_path.insert(s);
    if (committed_instance(s, inst)) {
      result = attempt(inst, taint);
    } else {
      for (RuleInstance& alt : stable_alternatives(calc, s))
        if ((result = attempt(alt, taint))) break;
    }
    on_path.erase(s);

    if (result) return proved[s] = result;
    if (!taint) failed.insert(s);
    tainted |= taint;
    return nullptr;
  }

 private:
  ProofPtr attempt(const RuleInstance& inst, bool& taint) {
    std::vector<ProofPtr> kids;
    for (const Sequent& p : inst.premises) {
      ProofPtr k = child(p, taint);
      if (!k) return nullptr;
      kids.push_back(std::move(k));
    }
    return pnode(inst, std::move(kids));
  }

  ProofPtr child(const Sequent& premise, bool& taint) {
    Sequent d{msops::dedup(premise.left), msops::dedup(premise.right),
              premise.mode};
    ProofPtr p = search(d, taint);
    if (!p) return nullptr;
    Multiset exl = msops::diff(premise.left, d.left);
    Multiset exr = msops::diff(premise.right, d.right);
    if (exl.empty() && exr.empty()) return p;
    return wk_proof(calc, CyclicProof{p, {}}, exl, exr).root;
  }
};

struct NRes {
  ProofPtr proof;  // null on failure
  std::map<Path, Path> resolved;
  std::vector<std::pair<Path, size_t>> pending;  // rep path -> ancestor depth
  bool tainted = false;  // failure leaned on the ancestor stack
};

struct SearcherN {
  Calculus calc;
  uint64_t budget;
  uint64_t expanded = 0;

  std::vector<std::pair<Sequent, uint64_t>> path{};  // exact sequent, modal edges
  std::map<Sequent, std::vector<size_t>> by_exact{};
  std::map<Sequent, std::vector<size_t>> by_class{};  // key: dedup'd sequent
  std::map<Sequent, std::pair<ProofPtr, std::map<Path, Path>>> proved{};
  std::set<Sequent> failed{};

  NRes search(const Sequent& s, uint64_t cum) {
    if (++expanded > budget) throw budget_out{};
    if (auto it = proved.find(s); it != proved.end())
      return NRes{it->second.first, it->second.second, {}, false};
    RuleInstance inst;
    if (close_instance(s, inst)) {
      ProofPtr p = pnode(inst);
      proved[s] = {p, {}};
      return NRes{p, {}, {}, false};
    }
    if (failed.count(s)) return NRes{};
    if (ProofPtr idp = identity_close(calc, s)) {
      proved[s] = {idp, {}};
      return NRes{idp, {}, {}, false};
    }

    if (auto it = by_exact.find(s); it != by_exact.end())
      for (auto r = it->second.rbegin(); r != it->second.rend(); ++r)
        if (path[*r].second < cum) {
          NRes fold{pnode(rules::rep(s)), {}, {{{}, *r}}, false};
          return fold;
        }
    // without a progressing edge in between, a subsumed repeat can only keep
    // growing; with one, the next modal premise contracts the surplus and the
    // exact fold above gets its chance, so the branch stays open
    Sequent cls{msops::dedup(s.left), msops::dedup(s.right), s.mode};
    if (auto it = by_class.find(cls); it != by_class.end())
      for (size_t idx : it->second) {
        const Sequent& a = path[idx].first;
        if (path[idx].second == cum && msops::subset(a.left, s.left) &&
            msops::subset(a.right, s.right)) {
          NRes pruned;
          pruned.tainted = true;
          return pruned;
        }
      }

    bool taint = false;
    NRes result;
    if (committed_instance(s, inst)) {
      result = attempt(s, cum, cls, inst, taint);
    } else {
      for (RuleInstance& alt : stable_alternatives(calc, s)) {
        result = attempt(s, cum, cls, alt, taint);
        if (result.proof) break;
      }
    }

    if (result.proof) {
      if (result.pending.empty()) proved[s] = {result.proof, result.resolved};
      return result;
    }
    if (!taint) failed.insert(s);
    result.tainted = taint;
    return result;
  }

 private:
  NRes attempt(const Sequent& s, uint64_t cum, const Sequent& cls,
               const RuleInstance& inst, bool& taint) {
    const size_t my_depth = path.size();
    path.push_back({s, cum});
    by_exact[s].push_back(my_depth);
    by_class[cls].push_back(my_depth);

    std::vector<NRes> kids;
    bool ok = true;
    for (size_t k = 0; k < inst.premises.size(); ++k) {
      bool prog = false;
      for (size_t pk : inst.progressing) prog |= pk == k;
      NRes kr = search(inst.premises[k], cum + (prog ? 1 : 0));
      if (!kr.proof) {
        taint |= kr.tainted;
        ok = false;
        break;
      }
      kids.push_back(std::move(kr));
    }

    by_class[cls].pop_back();
    by_exact[s].pop_back();
    path.pop_back();
    if (!ok) return NRes{};

    NRes out;
    std::vector<ProofPtr> ps;
    for (size_t k = 0; k < kids.size(); ++k) {
      ps.push_back(kids[k].proof);
      for (const auto& [rp, tp] : kids[k].resolved)
        out.resolved[prefixed(k, rp)] = prefixed(k, tp);
      for (const auto& [rp, d] : kids[k].pending) {
        Path nk = prefixed(k, rp);
        if (d == my_depth)
          out.resolved[nk] = {};
        else
          out.pending.push_back({nk, d});
      }
    }
    out.proof = pnode(inst, std::move(ps));
    return out;
  }

  static Path prefixed(size_t k, const Path& p) {
    Path out{k};
    out.insert(out.end(), p.begin(), p.end());
    return out;
  }
};

}  // namespace detail

// Search for a proof of `goal` in the cut-free part of a G or N calculus.
// The returned proof concludes exactly `goal`; N proofs may be cyclic.
inline SearchResult prove(const Calculus& c, const Sequent& goal,
                          uint64_t budget = 0) {
  if (is_tpl(c.id)) throw shape_error("prove(): not a G or N calculus");
  if (!mode_allowed(c.id, goal.mode))
    throw shape_error("prove(): sequent mode not available in this calculus");
  if (budget == 0) budget = default_budget();
  Calculus base = plain(c.id);
  SearchResult res;
  if (is_g(c.id)) {
    detail::SearcherG s{base, budget};
    try {
      bool taint = false;
      Sequent d{msops::dedup(goal.left), msops::dedup(goal.right), goal.mode};
      ProofPtr p = s.search(d, taint);
      if (p) {
        CyclicProof cp{p, {}};
        Multiset exl = msops::diff(goal.left, d.left);
        Multiset exr = msops::diff(goal.right, d.right);
        if (!exl.empty() || !exr.empty()) cp = wk_proof(base, cp, exl, exr);
        res = {Status::Proved, std::move(cp), s.expanded};
      } else {
        res = {Status::Unprovable, {}, s.expanded};
      }
    } catch (const detail::budget_out&) {
      res = {Status::Budget, {}, s.expanded};
    }
  } else {
    detail::SearcherN s{base, budget};
    try {
      detail::NRes r = s.search(goal, 0);
      if (r.proof) {
        if (!r.pending.empty())
          throw shape_error("prove(): fold escaped the search root");
        res = {Status::Proved, CyclicProof{r.proof, std::move(r.resolved)},
               s.expanded};
      } else {
        res = {Status::Unprovable, {}, s.expanded};
      }
    } catch (const detail::budget_out&) {
      res = {Status::Budget, {}, s.expanded};
    }
  }
  return res;
}

// provability of a formula: at mode 0 for the ER family, plain otherwise
inline SearchResult prove_formula(const Calculus& c, const Formula& f,
                                  uint64_t budget = 0) {
  Mode m = er_family(c.id) ? Mode::ER0 : Mode::Plain;
  return prove(c, Sequent{ms(), ms({f}), m}, budget);
}

}  // namespace bimodal
