#pragma once
// Cut reduction for the cyclic calculi.
//
// A configuration is a cut over chi with shared contexts: the left proof
// concludes G => D, chi and the right proof chi, G => D.  reduce_step pushes
// the cut away by recursion on (|chi|, combined local height): the residue is
// a proof of G => D whose only remaining cut nodes sit above progressing
// modal edges, outside the main local fragment.  Both sides must themselves
// be locally cut-free and built from the base rules.

#include <string>
#include <vector>

#include "bimodal/prover.hpp"
#include "bimodal/transform.hpp"

namespace bimodal {

struct CutConfiguration {
  CyclicProof left;   // proves G => D, chi
  CyclicProof right;  // proves chi, G => D
  Formula cut_formula = Formula::bot();
  Calculus calc;  // one of the cyclic calculi
};

enum class CutCase {
  WeakeningLeft,
  WeakeningRight,
  AxiomaticLeft,
  AxiomaticRight,
  AxiomaticBot,
  BotRLeft,
  BotRRight,
  PrincipalImp,
  CommuteLeft,
  CommuteRight,
  ModalEr10,
  ModalSame,
  ModalCross,
};

inline const char* cut_case_name(CutCase c) {
  switch (c) {
    case CutCase::WeakeningLeft: return "weakening-left";
    case CutCase::WeakeningRight: return "weakening-right";
    case CutCase::AxiomaticLeft: return "axiomatic-left";
    case CutCase::AxiomaticRight: return "axiomatic-right";
    case CutCase::AxiomaticBot: return "axiomatic-bot";
    case CutCase::BotRLeft: return "botR-left";
    case CutCase::BotRRight: return "botR-right";
    case CutCase::PrincipalImp: return "principal-imp";
    case CutCase::CommuteLeft: return "commute-left";
    case CutCase::CommuteRight: return "commute-right";
    case CutCase::ModalEr10: return "modal-er10";
    case CutCase::ModalSame: return "modal-same";
    default: return "modal-cross";
  }
}

// the sequent G => D the reduced proof concludes
inline Sequent cut_conclusion(const CutConfiguration& cfg) {
  const Sequent& l = conclusion_of(cfg.left);
  return Sequent{l.left, msops::diff(l.right, {cfg.cut_formula}), l.mode};
}

inline void validate_configuration(const CutConfiguration& cfg) {
  if (!is_n(cfg.calc.id))
    throw shape_error("cut reduction: not a cyclic calculus");
  const Sequent& l = conclusion_of(cfg.left);
  const Sequent& r = conclusion_of(cfg.right);
  const Formula& chi = cfg.cut_formula;
  if (!msops::contains(l.right, chi) || !msops::contains(r.left, chi))
    throw shape_error("cut reduction: cut formula missing from a premise");
  if (l.mode != r.mode || l.left != msops::diff(r.left, {chi}) ||
      msops::diff(l.right, {chi}) != r.right)
    throw shape_error("cut reduction: premise contexts do not match");
}

// the literal cut node over the two sides
inline CyclicProof cut_proof(const CutConfiguration& cfg) {
  validate_configuration(cfg);
  Sequent c = cut_conclusion(cfg);
  RuleInstance inst = rules::cut(cfg.cut_formula, c.left, c.right, c.mode);
  CyclicProof out;
  out.root = pnode(inst, {cfg.left.root, cfg.right.root});
  for (const auto& [w, t] : cfg.left.backedges) {
    Path nw{0}, nt{0};
    nw.insert(nw.end(), w.begin(), w.end());
    nt.insert(nt.end(), t.begin(), t.end());
    out.backedges[nw] = nt;
  }
  for (const auto& [w, t] : cfg.right.backedges) {
    Path nw{1}, nt{1};
    nw.insert(nw.end(), w.begin(), w.end());
    nt.insert(nt.end(), t.begin(), t.end());
    out.backedges[nw] = nt;
  }
  return out;
}

namespace detail {

inline bool always_stop(const Proof&) { return true; }

inline CyclicProof assemble(const RuleInstance& inst,
                            std::vector<CyclicProof> kids) {
  CyclicProof out;
  std::vector<ProofPtr> ps;
  for (size_t k = 0; k < kids.size(); ++k) {
    ps.push_back(kids[k].root);
    for (const auto& [w, t] : kids[k].backedges) {
      Path nw{k}, nt{k};
      nw.insert(nw.end(), w.begin(), w.end());
      nt.insert(nt.end(), t.begin(), t.end());
      out.backedges[nw] = nt;
    }
  }
  out.root = pnode(inst, std::move(ps));
  return out;
}

// rebuild a proof whose root is a modal node so that every boxed formula of
// the conclusion sits in a group; the premise subproof is weakened by the
// copies the bigger groups contribute
inline CyclicProof maximalize(const Calculus& c, const CyclicProof& p) {
  const RuleInstance& r = p.root->node;
  if (!is_modal_rule(r.rule)) throw shape_error("maximalize: not a modal root");
  Multiset moved[2], rest;
  for (const Formula& f : r.wk_left)
    if (f.kind() == Kind::Box)
      moved[f.index()].push_back(f.body());
    else
      rest.push_back(f);
  if (moved[0].empty() && moved[1].empty()) return p;
  int i = r.principal->index();
  auto [d0, d1] = dotted_groups(c.id, i);
  Multiset addL;
  for (int k : {0, 1}) {
    bool dotted = k == 0 ? d0 : d1;
    for (const Formula& b : moved[k]) {
      addL.push_back(Formula::box(k, b));
      if (dotted) addL.push_back(b);
    }
  }
  CyclicProof body = wk_proof(c, child_proof(p, 0), ms(std::move(addL)), ms());
  RuleInstance inst = rules::modal(
      c.id, i, r.principal->body(), msops::sum(r.sigma[0], ms(moved[0])),
      msops::sum(r.sigma[1], ms(moved[1])), std::move(rest), r.wk_right,
      r.conclusion.mode);
  return assemble(inst, {std::move(body)});
}

struct Reducer {
  Calculus calc;
  Calculus full;  // with cut, for intermediate checking if ever needed
  uint64_t steps = 0;

  CutCase classify(const CutConfiguration& cfg) const {
    const Formula& chi = cfg.cut_formula;
    const RuleInstance& l = cfg.left.root->node;
    const RuleInstance& r = cfg.right.root->node;
    for (const char* bad : {"cut", "open", "rep", "wk", "ctr", "to1"}) {
      if (l.rule == bad || r.rule == bad)
        throw shape_error(std::string("cut reduction: side ends in ") + bad);
    }
    bool ctx_free_l = l.rule == "ax" || l.rule == "botL" || is_modal_rule(l.rule);
    bool ctx_free_r = r.rule == "ax" || r.rule == "botL" || is_modal_rule(r.rule);
    if (ctx_free_l && msops::contains(l.wk_right, chi))
      return CutCase::WeakeningLeft;
    if (ctx_free_r && msops::contains(r.wk_left, chi))
      return CutCase::WeakeningRight;
    if (l.rule == "ax" && *l.principal == chi) return CutCase::AxiomaticLeft;
    if (r.rule == "ax" && *r.principal == chi) return CutCase::AxiomaticRight;
    if (r.rule == "botL" && chi == Formula::bot()) return CutCase::AxiomaticBot;
    if (l.rule == "botR") return CutCase::BotRLeft;
    if (r.rule == "botR") return CutCase::BotRRight;
    if (l.rule == "impR" && *l.principal == chi && r.rule == "impL" &&
        *r.principal == chi && !msops::contains(r.wk_left, chi))
      return CutCase::PrincipalImp;
    if (l.rule == "impL" || l.rule == "er10" ||
        (l.rule == "impR" && *l.principal != chi))
      return CutCase::CommuteLeft;
    if (r.rule == "impR" ||
        (r.rule == "impL" && (*r.principal != chi ||
                              msops::contains(r.wk_left, chi))) ||
        (r.rule == "er10" && (*r.principal != chi ||
                              msops::contains(r.wk_left, chi))))
      return CutCase::CommuteRight;
    if (is_modal_rule(l.rule) && *l.principal == chi) {
      if (r.rule == "er10" && *r.principal == chi) return CutCase::ModalEr10;
      if (is_modal_rule(r.rule))
        return l.principal->index() == r.principal->index()
                   ? CutCase::ModalSame
                   : CutCase::ModalCross;
    }
    throw shape_error("cut reduction: configuration outside the known cases");
  }

  CyclicProof reduce(const CutConfiguration& cfg) {
    if (++steps > 2000000)
      throw theorem_violation("cut reduction failed to terminate");
    validate_configuration(cfg);
    const Formula& chi = cfg.cut_formula;
    const Sequent goal = cut_conclusion(cfg);
    const Multiset& G = goal.left;
    const Multiset& D = goal.right;
    const Mode m = goal.mode;
    const RuleInstance& l = cfg.left.root->node;
    const RuleInstance& r = cfg.right.root->node;

    switch (classify(cfg)) {
      case CutCase::WeakeningLeft: {
        // the root sequent changes, so backedges into the root must go first
        CyclicProof q = unfold_crossing(cfg.left, always_stop);
        RuleInstance inst = with_context(full, q.root->node, l.wk_left,
                                         msops::diff(l.wk_right, {chi}), m);
        return CyclicProof{pnode(inst, q.root->children), q.backedges};
      }
      case CutCase::WeakeningRight: {
        CyclicProof q = unfold_crossing(cfg.right, always_stop);
        RuleInstance inst = with_context(full, q.root->node,
                                         msops::diff(r.wk_left, {chi}),
                                         r.wk_right, m);
        return CyclicProof{pnode(inst, q.root->children), q.backedges};
      }
      case CutCase::AxiomaticLeft:
        return ctr_proof(calc, cfg.right, goal);
      case CutCase::AxiomaticRight:
        return ctr_proof(calc, cfg.left, goal);
      case CutCase::AxiomaticBot:
        return inv_botR(calc, cfg.left);
      case CutCase::BotRLeft: {
        if (chi == Formula::bot()) return child_proof(cfg.left, 0);
        CyclicProof inner =
            reduce({child_proof(cfg.left, 0), inv_botR(calc, cfg.right), chi,
                    calc});
        return assemble(
            rules::botR(G, msops::diff(D, {Formula::bot()}), m), {inner});
      }
      case CutCase::BotRRight: {
        CyclicProof inner =
            reduce({inv_botR(calc, cfg.left), child_proof(cfg.right, 0), chi,
                    calc});
        return assemble(
            rules::botR(G, msops::diff(D, {Formula::bot()}), m), {inner});
      }
      case CutCase::PrincipalImp: {
        Formula a = chi.left(), b = chi.right();
        CyclicProof inner = reduce({wk_proof(calc, child_proof(cfg.right, 0),
                                             ms(), ms({b})),
                                    child_proof(cfg.left, 0), a, calc});
        return reduce({inner, child_proof(cfg.right, 1), b, calc});
      }
      case CutCase::CommuteLeft: {
        if (l.rule == "impL") {
          Formula t = *l.principal;
          Multiset wl = l.wk_left;               // G minus t
          Multiset D2 = msops::diff(l.wk_right, {chi});  // = D
          CyclicProof k0 = reduce({child_proof(cfg.left, 0),
                                   inv_impL_0(calc, cfg.right, t), chi, calc});
          CyclicProof k1 = reduce({child_proof(cfg.left, 1),
                                   inv_impL_1(calc, cfg.right, t), chi, calc});
          return assemble(rules::impL(t, wl, D2, m), {k0, k1});
        }
        if (l.rule == "impR") {
          Formula t = *l.principal;
          CyclicProof k = reduce({child_proof(cfg.left, 0),
                                  inv_impR(calc, cfg.right, t), chi, calc});
          return assemble(rules::impR(t, G, msops::diff(D, {t}), m), {k});
        }
        // er10
        Formula t = *l.principal;
        CyclicProof k = reduce({child_proof(cfg.left, 0),
                                wk_proof(calc, cfg.right, ms({t.body()}), ms()),
                                chi, calc});
        return assemble(rules::er10(t, msops::diff(G, {t}), D), {k});
      }
      case CutCase::CommuteRight: {
        if (r.rule == "impL") {
          Formula t = *r.principal;
          CyclicProof k0 = reduce({inv_impL_0(calc, cfg.left, t),
                                   child_proof(cfg.right, 0), chi, calc});
          CyclicProof k1 = reduce({inv_impL_1(calc, cfg.left, t),
                                   child_proof(cfg.right, 1), chi, calc});
          return assemble(rules::impL(t, msops::diff(G, {t}), D, m), {k0, k1});
        }
        if (r.rule == "impR") {
          Formula t = *r.principal;
          CyclicProof k = reduce({inv_impR(calc, cfg.left, t),
                                  child_proof(cfg.right, 0), chi, calc});
          return assemble(rules::impR(t, G, msops::diff(D, {t}), m), {k});
        }
        // er10 with a context occurrence of chi
        Formula t = *r.principal;
        CyclicProof k = reduce({wk_proof(calc, cfg.left, ms({t.body()}), ms()),
                                child_proof(cfg.right, 0), chi, calc});
        return assemble(rules::er10(t, msops::diff(G, {t}), D), {k});
      }
      case CutCase::ModalEr10:
        return reduce_modal_er10(cfg, goal);
      case CutCase::ModalSame:
      case CutCase::ModalCross:
        return reduce_modal(cfg, goal);
    }
    throw shape_error("cut reduction: unreachable");
  }

 private:
  static Multiset group_form(int k, const Multiset& sigma, bool dotted) {
    return dotted ? dot_box(k, sigma) : box_prefix(k, sigma);
  }

  // pi ends in the modal rule for [0]chi0, tau in the left unboxing of the
  // same formula (ER family, mode 1)
  CyclicProof reduce_modal_er10(const CutConfiguration& cfg,
                                const Sequent& goal) {
    const Formula chi0 = cfg.cut_formula.body();
    CyclicProof pi = maximalize(calc, cfg.left);
    const RuleInstance& l = pi.root->node;
    CyclicProof pi0 = child_proof(pi, 0);
    CyclicProof tau0 = child_proof(cfg.right, 0);
    const Multiset& D = goal.right;

    // A: the premise of pi, shifted to mode 1 and folded back under one
    // unboxing step per naked group copy
    CyclicProof a = to1_proof(calc, wk_proof(calc, pi0, l.wk_left, D));
    for (const Formula& s : l.sigma[0]) {
      Sequent c = conclusion_of(a);
      Formula bx = Formula::box(0, s);
      a = assemble(rules::er10(bx, msops::diff(c.left, ms({bx, s})), c.right),
                   {a});
    }

    // B: a fresh modal step over the same premise, cut (at equal size but
    // smaller combined local height) against tau's premise
    RuleInstance n2 = rules::modal(calc.id, 0, chi0, l.sigma[0], l.sigma[1],
                                   msops::sum(ms({chi0}), l.wk_left), D,
                                   Mode::ER1);
    CyclicProof b =
        reduce({assemble(n2, {pi0}), tau0, cfg.cut_formula, calc});

    return reduce({a, b, chi0, calc});
  }

  // both sides end in modal rules, the cut box principal on the left and
  // grouped on the right
  CyclicProof reduce_modal(const CutConfiguration& cfg, const Sequent& goal) {
    const Formula chi0 = cfg.cut_formula.body();
    CyclicProof pi = maximalize(calc, cfg.left);
    CyclicProof tau = maximalize(calc, cfg.right);
    const RuleInstance& l = pi.root->node;
    const RuleInstance& r = tau.root->node;
    const int i = l.principal->index();
    const int j = r.principal->index();
    const Formula psi = r.principal->body();
    CyclicProof pi0 = child_proof(pi, 0);
    CyclicProof tau0 = child_proof(tau, 0);

    const Multiset& s0 = l.sigma[0];
    const Multiset& s1 = l.sigma[1];
    const Multiset& si = i == 0 ? s0 : s1;
    const Multiset& so = i == 0 ? s1 : s0;
    const int o = 1 - i;

    auto [dj0, dj1] = dotted_groups(calc.id, j);
    const bool idot = i == 0 ? dj0 : dj1;  // group i dotted under tau's rule
    const bool odot = o == 0 ? dj0 : dj1;
    auto [di0, di1] = dotted_groups(calc.id, i);
    const bool odot_pi = o == 0 ? di0 : di1;  // and under pi's own rule

    Mode inner_m = er_family(calc.id) ? (j == 0 ? Mode::ER0 : Mode::ER1)
                                      : Mode::Plain;
    Multiset other = group_form(o, so, odot);  // tau-rule form of group o
    CyclicProof inner;
    if (!idot) {
      // single cut: tau keeps only the boxed copy of the cut formula
      RuleInstance np = rules::modal(calc.id, i, chi0, s0, s1,
                                     odot ? so : ms(), ms({psi}), inner_m);
      Multiset cl = msops::sum(box_prefix(i, si), other);
      RuleInstance ct = rules::cut(cfg.cut_formula, cl, ms({psi}), inner_m);
      inner = assemble(ct, {assemble(np, {pi0}), tau0});
    } else {
      // double cut: tau also holds a naked copy of the cut formula's body
      Multiset nk = msops::sum(ms({chi0}), si);
      if (odot) nk = msops::sum(nk, so);
      RuleInstance n = rules::modal(calc.id, i, chi0, s0, s1, nk, ms({psi}),
                                    inner_m);
      Multiset ml = msops::sum(msops::sum(ms({chi0}), dot_box(i, si)), other);
      RuleInstance mc = rules::cut(cfg.cut_formula, ml, ms({psi}), inner_m);
      CyclicProof mid = assemble(mc, {assemble(n, {pi0}), tau0});
      Multiset addl = msops::diff(other, group_form(o, so, odot_pi));
      CyclicProof wpi0 = wk_proof(calc, pi0, addl, ms({psi}));
      RuleInstance wc = rules::cut(chi0, msops::sum(dot_box(i, si), other),
                                   ms({psi}), inner_m);
      inner = assemble(wc, {wpi0, mid});
    }
    RuleInstance root = rules::modal(calc.id, j, psi, s0, s1, l.wk_left,
                                     msops::diff(goal.right, {*r.principal}),
                                     goal.mode);
    return assemble(root, {inner});
  }
};

}  // namespace detail

inline CutCase classify(const CutConfiguration& cfg) {
  validate_configuration(cfg);
  detail::Reducer red{plain(cfg.calc.id), with_cut(cfg.calc.id)};
  return red.classify(cfg);
}

// push the cut of `cfg` out of the main local fragment
inline CyclicProof reduce_step(const CutConfiguration& cfg) {
  validate_configuration(cfg);
  detail::Reducer red{plain(cfg.calc.id), with_cut(cfg.calc.id)};
  return red.reduce(cfg);
}

// cut elimination by completeness: search for a cut-free proof of the
// conclusion from scratch
inline CyclicProof eliminate_semantic(const Calculus& c, const CyclicProof& p,
                                      uint64_t budget = 0) {
  if (!is_g(c.id) && !is_n(c.id))
    throw shape_error("eliminate_semantic: not a G or N calculus");
  SearchResult r = prove(plain(c.id), conclusion_of(p), budget);
  if (r.status != Status::Proved)
    throw theorem_violation(
        "eliminate_semantic: no cut-free proof found for a provable sequent");
  return r.proof;
}

}  // namespace bimodal
