#pragma once

// Structural transformations on proofs: weakening, contraction, rule
// inversions, the mode shift for ER, the Löb-style modal unfolding, and the
// translations between the cyclic and wellfounded calculi.
//
// Transformers accept proofs built from the base rules plus cut.  Proofs
// containing wk/ctr/to1 *nodes* are rejected; those rules exist so that
// emitted proofs can be spelled with them, not as transformer inputs.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "bimodal/proof.hpp"

namespace bimodal {

inline CalculusId g_of(CalculusId n) {
  switch (n) {
    case CalculusId::NCS: return CalculusId::GCS;
    case CalculusId::NCSM: return CalculusId::GCSM;
    case CalculusId::NER: return CalculusId::GER;
    default: throw shape_error("g_of: not a cyclic calculus");
  }
}

inline CalculusId n_of(CalculusId g) {
  switch (g) {
    case CalculusId::GCS: return CalculusId::NCS;
    case CalculusId::GCSM: return CalculusId::NCSM;
    case CalculusId::GER: return CalculusId::NER;
    default: throw shape_error("n_of: not a wellfounded calculus");
  }
}

namespace detail {

inline void reject_structural(const RuleInstance& r) {
  if (is_structural_rule(r.rule) || r.rule == "boxKTplus" || r.rule == "emp" ||
      r.rule == "er10sat" || r.rule == "impLsat" || r.rule == "impRsat")
    throw shape_error("transformers do not accept '" + r.rule + "' nodes");
}

// same rule, new context fields (and optionally a new mode)
inline RuleInstance with_context(const Calculus& c, const RuleInstance& r,
                                 Multiset wl, Multiset wr, Mode m) {
  reject_structural(r);
  if (r.rule == "ax") return rules::ax(*r.principal, std::move(wl), std::move(wr), m);
  if (r.rule == "botL") return rules::botL(std::move(wl), std::move(wr), m);
  if (r.rule == "botR") return rules::botR(std::move(wl), std::move(wr), m);
  if (r.rule == "impL") return rules::impL(*r.principal, std::move(wl), std::move(wr), m);
  if (r.rule == "impR") return rules::impR(*r.principal, std::move(wl), std::move(wr), m);
  if (r.rule == "er10") return rules::er10(*r.principal, std::move(wl), std::move(wr));
  if (r.rule == "cut") return rules::cut(*r.principal, std::move(wl), std::move(wr), m);
  if (is_modal_rule(r.rule))
    return rules::modal(c.id, r.principal->index(), r.principal->body(), r.sigma[0],
                        r.sigma[1], std::move(wl), std::move(wr), m);
  throw shape_error("with_context: unsupported rule '" + r.rule + "'");
}

// ---- crossing-backedge preamble --------------------------------------------

// Nodes whose sequents a region transformer will change: everything reachable
// from the root without passing *through* a stopping node (stopping nodes
// themselves belong to the region, their subtrees do not).
inline std::set<Path> compute_region(const CyclicProof& p,
                                     const std::function<bool(const Proof&)>& stop) {
  std::set<Path> region;
  std::function<void(const Proof*, Path)> walk = [&](const Proof* v, Path path) {
    region.insert(path);
    if (stop(*v)) return;
    for (size_t i = 0; i < v->children.size(); ++i) {
      Path q = path;
      q.push_back(i);
      walk(v->children[i].get(), std::move(q));
    }
  };
  walk(p.root.get(), {});
  return region;
}

inline ProofPtr replace_at(const ProofPtr& root, const Path& path, ProofPtr sub,
                           size_t k = 0) {
  if (k == path.size()) return sub;
  std::vector<ProofPtr> kids = root->children;
  kids[path[k]] = replace_at(kids[path[k]], path, std::move(sub), k + 1);
  return pnode(root->node, std::move(kids));
}

// Replace every rep that sits outside the region but whose companion lies
// inside by an inlined copy of the companion's subtree.  Afterwards no
// backedge crosses the region boundary from below.
inline CyclicProof unfold_crossing(CyclicProof p,
                                   const std::function<bool(const Proof&)>& stop) {
  for (;;) {
    std::set<Path> region = compute_region(p, stop);
    std::vector<Path> crossing;
    for (const auto& [w, t] : p.backedges)
      if (!region.count(w) && region.count(t)) crossing.push_back(w);
    if (crossing.empty()) return p;
    for (const Path& w : crossing) {
      CyclicProof sub = extract_subproof(p, p.backedges.at(w));
      p.root = replace_at(p.root, w, sub.root);
      p.backedges.erase(w);
      for (const auto& [k, v] : sub.backedges) {
        Path nk = w, nv = w;
        nk.insert(nk.end(), k.begin(), k.end());
        nv.insert(nv.end(), v.begin(), v.end());
        p.backedges[nk] = nv;
      }
    }
  }
}

// ---- generic region walker --------------------------------------------------

// Rebuilds the region: `splice` drops a node in favour of one child subtree,
// `stop` keeps a node's subtrees but lets `rebuild` adjust the node itself,
// everything else is rebuilt and recursed.  Kept subtrees are shared and
// their backedges rebased; in-region reps are resolved through a scope map.
struct RegionWalker {
  const Calculus& calc;
  const CyclicProof& p;
  std::function<bool(const Proof&)> stop;
  std::function<std::optional<size_t>(const Proof&)> splice;
  std::function<RuleInstance(const RuleInstance&)> rebuild;

  std::map<Path, Path> out;
  std::map<const Proof*, Path> scope;

  CyclicProof run() {
    auto region_stop = [this](const Proof& v) {
      if (stop(v)) return true;
      return splice && splice(v).has_value();
    };
    CyclicProof q = unfold_crossing(p, region_stop);
    RegionWalker inner{calc, q, stop, splice, rebuild, {}, {}};
    ProofPtr root = inner.go(q, {}, {});
    return CyclicProof{root, std::move(inner.out)};
  }

 private:
  ProofPtr adopt(const CyclicProof& q, const Path& orig, const Path& here) {
    for (const auto& [w, t] : q.backedges) {
      if (!proper_prefix(orig, w) && orig != w) continue;
      if (!proper_prefix(orig, t) && orig != t)
        throw shape_error("crossing backedge survived the preamble");
      Path nk = here, nv = here;
      nk.insert(nk.end(), w.begin() + orig.size(), w.end());
      nv.insert(nv.end(), t.begin() + orig.size(), t.end());
      out[nk] = nv;
    }
    // aliasing: share ownership of the whole preamble tree
    return ProofPtr(q.root, node_at(q.root, orig));
  }

  ProofPtr go(const CyclicProof& q, const Path& orig, const Path& here) {
    const Proof* v = node_at(q.root, orig);
    if (splice) {
      if (auto s = splice(*v)) {
        Path co = orig;
        co.push_back(*s);
        return adopt(q, co, here);
      }
    }
    if (v->node.rule == "rep") {
      auto it = q.backedges.find(orig);
      if (it == q.backedges.end()) throw shape_error("rep leaf without backedge");
      const Proof* comp = node_at(q.root, it->second);
      auto sc = scope.find(comp);
      if (sc == scope.end())
        throw shape_error("region rep resolves outside the region");
      out[here] = sc->second;
      return pnode(rebuild(v->node));
    }
    RuleInstance inst = rebuild(v->node);
    std::vector<ProofPtr> kids;
    if (stop(*v)) {
      for (size_t i = 0; i < v->children.size(); ++i) {
        Path co = orig;
        co.push_back(i);
        Path h = here;
        h.push_back(i);
        kids.push_back(adopt(q, co, h));
      }
    } else {
      scope[v] = here;
      for (size_t i = 0; i < v->children.size(); ++i) {
        Path co = orig;
        co.push_back(i);
        Path h = here;
        h.push_back(i);
        kids.push_back(go(q, co, h));
      }
      scope.erase(v);
    }
    return pnode(std::move(inst), std::move(kids));
  }
};

inline bool modal_stop(const Proof& v) { return is_modal_rule(v.node.rule); }

}  // namespace detail

// ---- weakening --------------------------------------------------------------

inline CyclicProof wk_proof(const Calculus& c, const CyclicProof& p,
                            const Multiset& addL, const Multiset& addR) {
  if (addL.empty() && addR.empty()) return p;
  detail::RegionWalker w{
      c, p, detail::modal_stop, nullptr,
      [&](const RuleInstance& r) -> RuleInstance {
        if (r.rule == "rep" || r.rule == "open") {
          Sequent s{msops::sum(r.conclusion.left, addL),
                    msops::sum(r.conclusion.right, addR), r.conclusion.mode};
          return r.rule == "rep" ? rules::rep(s) : rules::open(s);
        }
        detail::reject_structural(r);
        return detail::with_context(c, r, msops::sum(r.wk_left, addL),
                                    msops::sum(r.wk_right, addR),
                                    r.conclusion.mode);
      },
      {}, {}};
  return w.run();
}

// ---- inversions -------------------------------------------------------------

namespace detail {

struct Inversion {
  // how the tracked occurrence reshapes a sequent
  std::function<Sequent(const Sequent&)> map_seq;
  // context rewrite at surviving nodes
  std::function<std::pair<Multiset, Multiset>(const RuleInstance&)> map_ctx;
  // nodes consumed by the inversion, replaced by one of their children
  std::function<std::optional<size_t>(const Proof&)> splice;
};

inline CyclicProof run_inversion(const Calculus& c, const CyclicProof& p,
                                 const Inversion& inv) {
  detail::RegionWalker w{
      c, p, detail::modal_stop, inv.splice,
      [&](const RuleInstance& r) -> RuleInstance {
        if (r.rule == "rep") return rules::rep(inv.map_seq(r.conclusion));
        if (r.rule == "open") return rules::open(inv.map_seq(r.conclusion));
        detail::reject_structural(r);
        auto [wl, wr] = inv.map_ctx(r);
        return detail::with_context(c, r, std::move(wl), std::move(wr),
                                    r.conclusion.mode);
      },
      {}, {}};
  return w.run();
}

}  // namespace detail

// proof of G => D, (f -> g)  to a proof of  f, G => D, g
inline CyclicProof inv_impR(const Calculus& c, const CyclicProof& p,
                            const Formula& t) {
  if (t.kind() != Kind::Imp) throw shape_error("inv_impR needs an implication");
  detail::Inversion inv{
      [&](const Sequent& s) {
        return Sequent{msops::sum(s.left, {t.left()}),
                       msops::sum(msops::diff(s.right, {t}), {t.right()}), s.mode};
      },
      [&](const RuleInstance& r) {
        return std::pair{msops::sum(r.wk_left, {t.left()}),
                         msops::sum(msops::diff(r.wk_right, {t}), {t.right()})};
      },
      [&](const Proof& v) -> std::optional<size_t> {
        if (v.node.rule == "impR" && v.node.principal && *v.node.principal == t)
          return size_t{0};
        return std::nullopt;
      }};
  return detail::run_inversion(c, p, inv);
}

// proof of  (f -> g), G => D  to a proof of  G => D, f
inline CyclicProof inv_impL_0(const Calculus& c, const CyclicProof& p,
                              const Formula& t) {
  if (t.kind() != Kind::Imp) throw shape_error("inv_impL_0 needs an implication");
  detail::Inversion inv{
      [&](const Sequent& s) {
        return Sequent{msops::diff(s.left, {t}),
                       msops::sum(s.right, {t.left()}), s.mode};
      },
      [&](const RuleInstance& r) {
        return std::pair{msops::diff(r.wk_left, {t}),
                         msops::sum(r.wk_right, {t.left()})};
      },
      [&](const Proof& v) -> std::optional<size_t> {
        if (v.node.rule == "impL" && v.node.principal && *v.node.principal == t)
          return size_t{0};
        return std::nullopt;
      }};
  return detail::run_inversion(c, p, inv);
}

// proof of  (f -> g), G => D  to a proof of  g, G => D
inline CyclicProof inv_impL_1(const Calculus& c, const CyclicProof& p,
                              const Formula& t) {
  if (t.kind() != Kind::Imp) throw shape_error("inv_impL_1 needs an implication");
  detail::Inversion inv{
      [&](const Sequent& s) {
        return Sequent{msops::sum(msops::diff(s.left, {t}), {t.right()}), s.right,
                       s.mode};
      },
      [&](const RuleInstance& r) {
        return std::pair{msops::sum(msops::diff(r.wk_left, {t}), {t.right()}),
                         r.wk_right};
      },
      [&](const Proof& v) -> std::optional<size_t> {
        if (v.node.rule == "impL" && v.node.principal && *v.node.principal == t)
          return size_t{1};
        return std::nullopt;
      }};
  return detail::run_inversion(c, p, inv);
}

// proof of  G => D, bot  to a proof of  G => D
inline CyclicProof inv_botR(const Calculus& c, const CyclicProof& p) {
  detail::Inversion inv{
      [&](const Sequent& s) {
        return Sequent{s.left, msops::diff(s.right, {Formula::bot()}), s.mode};
      },
      [&](const RuleInstance& r) {
        return std::pair{r.wk_left, msops::diff(r.wk_right, {Formula::bot()})};
      },
      [&](const Proof& v) -> std::optional<size_t> {
        if (v.node.rule == "botR") return size_t{0};
        return std::nullopt;
      }};
  return detail::run_inversion(c, p, inv);
}

// ---- ER mode shift ----------------------------------------------------------

// proof of  G =>0 D  to a proof of  G =>1 D
inline CyclicProof to1_proof(const Calculus& c, const CyclicProof& p) {
  if (!er_family(c.id)) throw shape_error("to1_proof: ER calculi only");
  if (conclusion_of(p).mode != Mode::ER0)
    throw shape_error("to1_proof: root must have mode 0");
  detail::RegionWalker w{
      c, p, detail::modal_stop, nullptr,
      [&](const RuleInstance& r) -> RuleInstance {
        if (r.rule == "rep" || r.rule == "open") {
          Sequent s{r.conclusion.left, r.conclusion.right, Mode::ER1};
          return r.rule == "rep" ? rules::rep(s) : rules::open(s);
        }
        detail::reject_structural(r);
        return detail::with_context(c, r, r.wk_left, r.wk_right, Mode::ER1);
      },
      {}, {}};
  return w.run();
}

// ---- contraction ------------------------------------------------------------

namespace detail {

// Contraction pushes removals through the proof.  Modal nodes forward group
// removals into their premise (boxed copy, and the naked copy for dotted
// groups), which can travel around cycles; an in-progress memo keyed on
// (node, request) closes such walks with fresh backedges.
struct Contractor {
  const Calculus& calc;
  const CyclicProof& p;
  std::map<std::tuple<Path, Multiset, Multiset>, Path> in_progress;
  std::map<Path, Path> out;

  ProofPtr go(const Path& orig, Multiset remL, Multiset remR, const Path& here) {
    const Proof* v = node_at(p.root, orig);
    if (v->node.rule == "rep") {
      auto be = p.backedges.find(orig);
      if (be == p.backedges.end()) throw shape_error("rep leaf without backedge");
      auto key = std::make_tuple(be->second, remL, remR);
      if (auto it = in_progress.find(key); it != in_progress.end()) {
        out[here] = it->second;
        return pnode(rules::rep(shrink(v->node.conclusion, remL, remR)));
      }
      return go(be->second, std::move(remL), std::move(remR), here);
    }
    if (v->node.rule == "open")
      return pnode(rules::open(shrink(v->node.conclusion, remL, remR)));
    reject_structural(v->node);
    auto key = std::make_tuple(orig, remL, remR);
    std::optional<Path> prev;
    if (auto it = in_progress.find(key); it != in_progress.end()) prev = it->second;
    in_progress[key] = here;
    ProofPtr result = rebuild(v, orig, remL, remR, here);
    if (prev)
      in_progress[key] = *prev;
    else
      in_progress.erase(key);
    return result;
  }

 private:
  static Sequent shrink(const Sequent& s, const Multiset& remL, const Multiset& remR) {
    return Sequent{msops::diff(s.left, remL), msops::diff(s.right, remR), s.mode};
  }

  // split removals: as much as possible from the context, the rest from `pool`
  static std::pair<Multiset, Multiset> split_removals(const Multiset& rem,
                                                      const Multiset& ctx) {
    Multiset from_ctx, rest;
    Multiset avail = ctx;
    for (const Formula& f : rem) {
      if (msops::contains(avail, f)) {
        avail = msops::diff(avail, {f});
        from_ctx.push_back(f);
      } else {
        rest.push_back(f);
      }
    }
    return {ms(std::move(from_ctx)), ms(std::move(rest))};
  }

  ProofPtr rebuild(const Proof* v, const Path& orig, const Multiset& remL,
                   const Multiset& remR, const Path& here) {
    const RuleInstance& r = v->node;
    if (is_modal_rule(r.rule)) {
      auto [ctxL, groupL] = split_removals(remL, r.wk_left);
      Multiset wr = msops::diff(r.wk_right, remR);  // principal survives
      Multiset sigma[2] = {r.sigma[0], r.sigma[1]};
      Multiset prem_rem;
      auto dots = dotted_groups(calc.id, r.principal->index());
      for (const Formula& f : groupL) {
        if (f.kind() != Kind::Box)
          throw shape_error("contraction exceeds the context multiplicity");
        int j = f.index();
        if (!msops::contains(sigma[j], f.body()))
          throw shape_error("contraction exceeds the group multiplicity");
        sigma[j] = msops::diff(sigma[j], {f.body()});
        prem_rem.push_back(f);
        bool dotted = j == 0 ? dots.first : dots.second;
        if (dotted) prem_rem.push_back(f.body());
      }
      RuleInstance inst =
          rules::modal(calc.id, r.principal->index(), r.principal->body(), sigma[0],
                       sigma[1], msops::diff(r.wk_left, ctxL), std::move(wr),
                       r.conclusion.mode);
      Path o = orig, h = here;
      o.push_back(0);
      h.push_back(0);
      ProofPtr kid = go(o, ms(std::move(prem_rem)), {}, h);
      return pnode(std::move(inst), {kid});
    }
    // all other base rules keep their principal and shed context copies only
    RuleInstance inst = with_context(calc, r, msops::diff(r.wk_left, remL),
                                     msops::diff(r.wk_right, remR),
                                     r.conclusion.mode);
    std::vector<ProofPtr> kids;
    for (size_t i = 0; i < v->children.size(); ++i) {
      Path o = orig, h = here;
      o.push_back(i);
      h.push_back(i);
      kids.push_back(go(o, remL, remR, h));
    }
    return pnode(std::move(inst), std::move(kids));
  }
};

}  // namespace detail

// proof of S to a proof of `target`, where target merges duplicate
// occurrences of S (same underlying set on each side)
inline CyclicProof ctr_proof(const Calculus& c, const CyclicProof& p,
                             const Sequent& target) {
  const Sequent& s = conclusion_of(p);
  if (target.mode != s.mode) throw shape_error("ctr_proof: mode mismatch");
  if (msops::dedup(target.left) != msops::dedup(s.left) ||
      msops::dedup(target.right) != msops::dedup(s.right))
    throw shape_error("ctr_proof: target must merge duplicates, nothing else");
  Multiset remL = msops::diff(s.left, target.left);
  Multiset remR = msops::diff(s.right, target.right);
  if (remL.empty() && remR.empty()) return p;
  detail::Contractor ctr{c, p, {}, {}};
  ProofPtr root = ctr.go({}, remL, remR, {});
  return CyclicProof{root, std::move(ctr.out)};
}

// ---- Löb-style unfolding ----------------------------------------------------

// From a wellfounded proof pi of the modal premise (diagonal included)
//     dot[i]Sigma_i, [o]Sigma_o(, dots per calculus), [i]f  =>  f
// build a proof of the same sequent without the diagonal [i]f, using one cut.
inline ProofPtr lob(const Calculus& c, int i, const Formula& f, Multiset sigma0,
                    Multiset sigma1, const ProofPtr& pi) {
  if (!is_g(c.id)) throw shape_error("lob: wellfounded calculi only");
  RuleInstance probe = rules::modal(c.id, i, f, sigma0, sigma1, {}, {},
                                    conclusion_of(make_proof(pi)).mode);
  // the modal premise our caller claims pi proves
  Mode pm = probe.premises[0].mode;
  if (!(pi->node.conclusion == probe.premises[0]))
    throw shape_error("lob: pi does not prove the declared modal premise " +
                      print(probe.premises[0]));
  // conclusion = premise without the diagonal
  Sequent goal{msops::diff(probe.premises[0].left, {Formula::box(i, f)}),
               probe.premises[0].right, pm};
  // modal node whose context restores the naked copies and adds f on the right
  Multiset naked = msops::diff(goal.left,
                               msops::sum(box_prefix(0, sigma0), box_prefix(1, sigma1)));
  RuleInstance m =
      rules::modal(c.id, i, f, sigma0, sigma1, naked, ms({f}), pm);
  ProofPtr left = pnode(std::move(m), {pi});
  RuleInstance cut = rules::cut(Formula::box(i, f), goal.left, goal.right, pm);
  return pnode(std::move(cut), {left, pi});
}

// ---- cyclic to wellfounded --------------------------------------------------

namespace detail {

struct Translator {
  const CyclicProof& p;
  CalculusId n_id;
  Calculus g;
  std::set<std::tuple<const Proof*, Multiset, Multiset>> in_progress;

  Translator(const CyclicProof& pr, CalculusId n)
      : p(pr), n_id(n), g(plain(g_of(n))) {}

  static Multiset pads(const Multiset& l0, const Multiset& l1) {
    return msops::sum(box_prefix(0, l0), box_prefix(1, l1));
  }

  ProofPtr go(const Proof* v, const Path& orig, const Multiset& l0,
              const Multiset& l1) {
    if (v->node.rule == "rep") {
      const Path& t = p.backedges.at(orig);
      return go(node_at(p.root, t), t, l0, l1);
    }
    auto key = std::make_tuple(v, l0, l1);
    if (!in_progress.insert(key).second)
      throw theorem_violation("translation revisited a state; cycle without growth");
    ProofPtr out = emit(v, orig, l0, l1);
    in_progress.erase(key);
    return out;
  }

 private:
  ProofPtr emit(const Proof* v, const Path& orig, const Multiset& l0,
                const Multiset& l1) {
    const RuleInstance& r = v->node;
    reject_structural(r);
    if (r.rule == "cut") throw shape_error("translation expects cut-free input");
    if (r.rule == "open") throw shape_error("translation expects a closed proof");
    Multiset pad = pads(l0, l1);
    if (!is_modal_rule(r.rule)) {
      RuleInstance inst = with_context(g, r, msops::sum(r.wk_left, pad), r.wk_right,
                                       r.conclusion.mode);
      std::vector<ProofPtr> kids;
      for (size_t i = 0; i < v->children.size(); ++i) {
        Path q = orig;
        q.push_back(i);
        kids.push_back(go(v->children[i].get(), q, l0, l1));
      }
      return pnode(std::move(inst), std::move(kids));
    }
    const int i = r.principal->index();
    const Formula f = r.principal->body();
    const Multiset& li = i == 0 ? l0 : l1;
    if (msops::contains(li, f)) {
      // the boxed principal already sits in the pad: close by identity
      Sequent padded{msops::sum(r.conclusion.left, pad), r.conclusion.right,
                     r.conclusion.mode};
      Formula boxed = *r.principal;
      return identity_proof(g, boxed, msops::diff(padded.left, {boxed}),
                            msops::diff(padded.right, {boxed}), padded.mode);
    }
    Multiset li2 = msops::dedup(msops::sum(li, {f}));
    const Multiset& n0 = i == 0 ? li2 : l0;
    const Multiset& n1 = i == 0 ? l1 : li2;
    Path q = orig;
    q.push_back(0);
    ProofPtr tau = go(v->children[0].get(), q, n0, n1);
    // naked copies required by the target dotting discipline
    auto dots = dotted_groups(g.id, i);
    Multiset naked;
    if (dots.first) naked = msops::sum(naked, l0);
    if (dots.second) naked = msops::sum(naked, l1);
    CyclicProof widened = wk_proof(g, make_proof(tau), naked, {});
    RuleInstance inst = rules::modal(g.id, i, f, msops::sum(l0, r.sigma[0]),
                                     msops::sum(l1, r.sigma[1]), r.wk_left,
                                     r.wk_right, r.conclusion.mode);
    return pnode(std::move(inst), {widened.root});
  }
};

}  // namespace detail

// cut-free valid cyclic proof to a cut-free wellfounded proof of the same
// sequent in the matching wellfounded calculus
inline CyclicProof translate_n_to_g(CalculusId n_id, const CyclicProof& p) {
  detail::Translator tr(p, n_id);
  ProofPtr root = tr.go(p.root.get(), {}, {}, {});
  return make_proof(root);
}

// ---- wellfounded to cyclic --------------------------------------------------

// Unfolds a wellfounded proof into the cyclic calculus.  Every emitted node
// spends one unit of fuel; when it runs out the remaining goals become open
// leaves, so the result is only a (checkable) partial proof.
inline CyclicProof unfold_g_to_n(CalculusId g_id, const ProofPtr& pi, int fuel) {
  CalculusId n_id = n_of(g_id);
  Calculus gc = with_cut(g_id);
  std::function<ProofPtr(const Proof*, int&)> rec = [&](const Proof* v,
                                                        int& budget) -> ProofPtr {
    if (v->node.rule == "rep" || v->node.rule == "open")
      throw shape_error("unfold expects a wellfounded closed proof");
    detail::reject_structural(v->node);
    if (budget <= 0) return pnode(rules::open(v->node.conclusion));
    --budget;
    if (!is_modal_rule(v->node.rule)) {
      std::vector<ProofPtr> kids;
      for (const auto& c : v->children) kids.push_back(rec(c.get(), budget));
      return pnode(v->node, std::move(kids));
    }
    const RuleInstance& r = v->node;
    const int i = r.principal->index();
    ProofPtr dropped = lob(gc, i, r.principal->body(), r.sigma[0], r.sigma[1],
                           v->children[0]);
    RuleInstance inst = rules::modal(n_id, i, r.principal->body(), r.sigma[0],
                                     r.sigma[1], r.wk_left, r.wk_right,
                                     r.conclusion.mode);
    return pnode(std::move(inst), {rec(dropped.get(), budget)});
  };
  int budget = fuel;
  ProofPtr root = rec(pi.get(), budget);
  return make_proof(root);
}

}  // namespace bimodal
