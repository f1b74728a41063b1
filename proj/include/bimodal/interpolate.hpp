#pragma once

// Uniform Lyndon interpolation.  A template is a cyclic derivation of the
// goal sequent in one of the two template calculi: ordinary proof search,
// except that the modal step (boxKTplus) hedges against principal formulas
// that may live outside the sequent, so it also emits empty-succedent
// premises.  Repeat leaves have no interpolant of their own; each one
// contributes an unknown to a positive modalized equational system whose
// bodies are the companions' preinterpolants.  Solving the system and
// substituting into the root preinterpolant yields the interpolant.
//
// CS and ER get their own templates.  CSM rides on CS through the
// interpretation box0 f |-> box0 f /\ box1 f (sharp), which preserves signed
// vocabularies and provability both ways.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bimodal/fixpoint.hpp"
#include "bimodal/proof.hpp"
#include "bimodal/prover.hpp"

namespace bimodal {

struct Template {
  Calculus calc;                        // TplCS or TplER
  CyclicProof proof;
  std::map<Path, std::string> repeats;  // rep leaf -> its fresh unknown
  std::map<Path, Formula> kappa;        // per-node preinterpolant (after annotate)
  std::set<std::string> vplus, vminus;  // vocabularies the annotation used
  bool annotated = false;
};

// ---- construction -----------------------------------------------------------

namespace detail {

inline void reject_reserved(const std::set<std::string>& names, const char* what) {
  for (const std::string& n : names)
    if (!n.empty() && n[0] == '$')
      throw shape_error(std::string(what) + " uses the reserved prefix: " + n);
}

inline std::string repeat_name(const Path& p) {
  std::string out = "$x";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

// staged rule choice: close, then saturate/decompose, then the modal step
inline RuleInstance select_template_rule(CalculusId id, const Sequent& s) {
  const bool er = id == CalculusId::TplER;
  for (const Formula& f : msops::dedup(s.left))
    if (f.kind() == Kind::Var && msops::contains(s.right, f))
      return rules::ax(f, msops::diff(s.left, {f}), msops::diff(s.right, {f}),
                       s.mode);
  if (msops::contains(s.left, Formula::bot()))
    return rules::botL(msops::diff(s.left, {Formula::bot()}), s.right, s.mode);
  if (s.left.empty() && s.right.empty()) return rules::emp(s.mode);
  if (!er && msops::contains(s.right, Formula::bot()))
    return rules::botR(s.left, msops::diff(s.right, {Formula::bot()}), s.mode);
  for (const Formula& f : msops::dedup(s.left))
    if (f.kind() == Kind::Imp) {
      if (!er)
        return rules::impL(f, msops::diff(s.left, {f}), s.right, s.mode);
      if (!left_saturated(f, s))
        return rules::impLsat(f, msops::diff(s.left, {f}), s.right, s.mode);
    }
  for (const Formula& f : msops::dedup(s.right))
    if (f.kind() == Kind::Imp) {
      if (!er)
        return rules::impR(f, s.left, msops::diff(s.right, {f}), s.mode);
      if (!right_saturated(f, s))
        return rules::impRsat(f, s.left, msops::diff(s.right, {f}), s.mode);
    }
  if (er && s.mode == Mode::ER1)
    for (const Formula& f : msops::dedup(s.left))
      if (f.kind() == Kind::Box && f.index() == 0 && !left_saturated(f, s))
        return rules::er10(f, msops::diff(s.left, {f}), s.right, true);
  // saturated and unclosable: every stray formula is swept into the wk parts
  return rules::boxKTplus(id, boxes_of(s.left, 0), boxes_of(s.left, 1),
                          boxes_of(s.right, 0), boxes_of(s.right, 1),
                          non_boxes(s.left), non_boxes(s.right), s.mode);
}

struct TemplateBuilder {
  CalculusId id;
  uint64_t budget;
  uint64_t expanded = 0;
  uint64_t premise_bound;
  std::vector<std::pair<Sequent, Path>> trail;
  std::map<Path, Path> backedges;
  std::set<Sequent> modal_premises;

  ProofPtr build(const Sequent& s, Path& here) {
    if (++expanded > budget)
      throw shape_error("build_template: budget exhausted");
    // fold to the ancestor closest to the root, minimizing distinct repeats
    for (const auto& [seq, at] : trail)
      if (seq == s) {
        backedges[here] = at;
        return pnode(rules::rep(s));
      }
    RuleInstance r = select_template_rule(id, s);
    if (r.rule == "boxKTplus") {
      for (const Sequent& p : r.premises) modal_premises.insert(p);
      if (modal_premises.size() > premise_bound)
        throw theorem_violation(
            "build_template: distinct modal premises exceed the counting bound");
    }
    trail.emplace_back(s, here);
    std::vector<ProofPtr> kids;
    for (size_t i = 0; i < r.premises.size(); ++i) {
      here.push_back(i);
      kids.push_back(build(r.premises[i], here));
      here.pop_back();
    }
    trail.pop_back();
    return pnode(std::move(r), std::move(kids));
  }
};

}  // namespace detail

// Deterministic template for s.  Terminates: away from the modal step every
// rule shrinks the sequent (TplCS: total size, TplER: saturation complexity),
// and the modal premises are drawn from a finite pool bounded by
// 4^m * (m+1) for m distinct subformulas, so branches must repeat.
inline Template build_template(CalculusId id, const Sequent& s,
                               uint64_t budget = 0) {
  if (!is_tpl(id)) throw shape_error("build_template: not a template calculus");
  if (!mode_allowed(id, s.mode))
    throw shape_error("build_template: sequent mode not allowed here");
  std::set<std::string> seen;
  for (const Formula& f : s.left)
    for (const std::string& v : vars(f)) seen.insert(v);
  for (const Formula& f : s.right)
    for (const std::string& v : vars(f)) seen.insert(v);
  detail::reject_reserved(seen, "build_template: input");

  detail::TemplateBuilder b;
  b.id = id;
  b.budget = budget ? budget : default_budget();
  const uint64_t m = subformulas(s).size();
  uint64_t pool = m + 1;  // 4^m * (m+1), saturating
  for (uint64_t i = 0; i < m; ++i) {
    if (pool > UINT64_MAX / 4) {
      pool = UINT64_MAX;
      break;
    }
    pool *= 4;
  }
  b.premise_bound = pool;

  Path root_path;
  ProofPtr root = b.build(s, root_path);
  Template t;
  t.calc = plain(id);
  t.proof = CyclicProof{std::move(root), std::move(b.backedges)};
  for (const auto& [rep, _] : t.proof.backedges)
    t.repeats[rep] = detail::repeat_name(rep);
  return t;
}

// ---- preinterpolants --------------------------------------------------------

namespace detail {

inline Formula conj_fold(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::top();
  Formula acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = Formula::conj(parts[i], acc);
  return acc;
}

struct Annotator {
  Template& t;

  Formula walk(const Proof* v, Path& here) {
    std::vector<Formula> kid;
    for (size_t i = 0; i < v->children.size(); ++i) {
      here.push_back(i);
      kid.push_back(walk(v->children[i].get(), here));
      here.pop_back();
    }
    // compaction keeps the preinterpolants (and with them the equation
    // bodies and the final interpolant) near their shared-node size; the
    // raw conjunction towers grow multiplicatively along the template
    Formula k = compact(annotation(v->node, kid, here));
    t.kappa.insert_or_assign(here, k);
    return k;
  }

  Formula annotation(const RuleInstance& r, const std::vector<Formula>& kid,
                     const Path& here) {
    if (r.rule == "rep") return Formula::var(t.repeats.at(here));
    if (r.rule == "ax" || r.rule == "botL") return Formula::bot();
    if (r.rule == "emp") return Formula::top();
    if (r.rule == "botR" || r.rule == "impR" || r.rule == "impRsat" ||
        r.rule == "er10sat")
      return kid[0];
    if (r.rule == "impL" || r.rule == "impLsat")
      return Formula::disj(kid[0], kid[1]);
    if (r.rule == "boxKTplus") {
      // box_i over the set premise, dia_i over each Theta premise, then the
      // plus-vocabulary side variables and the negated minus-vocabulary ones
      std::vector<Formula> parts;
      size_t c = 0;
      for (int i = 0; i <= 1; ++i) {
        parts.push_back(Formula::box(i, kid[c++]));
        for (size_t j = msops::dedup(r.theta[i]).size(); j > 0; --j)
          parts.push_back(Formula::dia(i, kid[c++]));
      }
      for (const Formula& f : msops::dedup(r.wk_left))
        if (f.kind() == Kind::Var && t.vplus.count(f.name())) parts.push_back(f);
      for (const Formula& f : msops::dedup(r.wk_right))
        if (f.kind() == Kind::Var && t.vminus.count(f.name()))
          parts.push_back(Formula::neg(f));
      return conj_fold(parts);
    }
    throw shape_error("annotate: rule '" + r.rule + "' has no preinterpolant");
  }
};

}  // namespace detail

inline void annotate(Template& t, std::set<std::string> vplus,
                     std::set<std::string> vminus) {
  detail::reject_reserved(vplus, "annotate: plus vocabulary");
  detail::reject_reserved(vminus, "annotate: minus vocabulary");
  t.vplus = std::move(vplus);
  t.vminus = std::move(vminus);
  t.kappa.clear();
  detail::Annotator a{t};
  Path root;
  a.walk(t.proof.root.get(), root);
  t.annotated = true;
}

// ---- equational system ------------------------------------------------------

namespace detail {

// height of the subtree under v, repeat leaves counting as leaves
inline size_t subtree_height(const Proof* v) {
  size_t h = 0;
  std::vector<std::pair<const Proof*, size_t>> stack{{v, 0}};
  while (!stack.empty()) {
    auto [u, d] = stack.back();
    stack.pop_back();
    h = std::max(h, d);
    for (const auto& ch : u->children) stack.push_back({ch.get(), d + 1});
  }
  return h;
}

}  // namespace detail

// One equation per repeat leaf: its unknown, positively, equals the
// companion's preinterpolant.  Unknowns are ordered by ascending companion
// height so that each body only mentions not-yet-listed unknowns under boxes.
inline EquationalSystem equational_system(const Template& t) {
  if (!t.annotated) throw shape_error("equational_system: annotate first");
  std::vector<std::pair<std::pair<size_t, Path>, const std::string*>> order;
  for (const auto& [rep, name] : t.repeats) {
    size_t h = detail::subtree_height(
        node_at(t.proof.root, t.proof.backedges.at(rep)));
    order.push_back({{h, rep}, &name});
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  EquationalSystem sys;
  for (const auto& [key, name] : order) {
    const Path& rep = key.second;
    sys.push_back(Equation{*name, Polarity::Pos, t.kappa.at(t.proof.backedges.at(rep))});
  }
  try {
    validate_system(sys);
  } catch (const shape_error& e) {
    throw theorem_violation(std::string("equational_system: ") + e.what());
  }
  if (!is_positive_system(sys))
    throw theorem_violation("equational_system: system is not positive");
  if (!is_modalized_system(sys))
    throw theorem_violation("equational_system: system is not modalized");
  std::set<std::string> vp = system_voc(sys, Polarity::Pos);
  std::set<std::string> vm = system_voc(sys, Polarity::Neg);
  for (const std::string& v : vp)
    if (!t.vplus.count(v))
      throw theorem_violation("equational_system: stray plus variable " + v);
  for (const std::string& v : vm)
    if (!t.vminus.count(v))
      throw theorem_violation("equational_system: stray minus variable " + v);
  return sys;
}

// ---- interpolants -----------------------------------------------------------

namespace detail {

// solve the system, substitute into the root preinterpolant, verify
inline Formula finish_interpolant(Template& t, const std::set<std::string>& vplus,
                                  const std::set<std::string>& vminus,
                                  CalculusId verify_in, const Sequent& goal,
                                  uint64_t budget) {
  annotate(t, vplus, vminus);
  equational_system(t);  // the flag and vocabulary checks on the full system

  // Repeats folding to the same companion have the same body, hence share a
  // solution.  Solving one equation per distinct companion instead of one per
  // repeat keeps the sequential elimination from nesting copy after copy of
  // the same value; the fan-out below restores the per-repeat substitution.
  std::map<Path, std::string> canon;  // companion -> representative unknown
  for (const auto& [rep, comp] : t.proof.backedges)
    canon.emplace(comp, t.repeats.at(rep));
  std::map<std::string, Formula> rename;  // every unknown -> its representative
  for (const auto& [rep, comp] : t.proof.backedges)
    rename.emplace(t.repeats.at(rep), Formula::var(canon.at(comp)));
  std::vector<std::pair<std::pair<size_t, Path>, const std::string*>> order;
  for (const auto& [comp, name] : canon)
    order.push_back(
        {{detail::subtree_height(node_at(t.proof.root, comp)), comp}, &name});
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  EquationalSystem sys;
  std::map<std::string, size_t> at;
  for (const auto& [key, name] : order) {
    at[*name] = sys.size();
    sys.push_back(Equation{*name, Polarity::Pos,
                           compact(substitute(t.kappa.at(key.second), rename))});
  }
  std::vector<Formula> sol;
  try {
    sol = solve_positive_modalized(sys, compact);
  } catch (const shape_error& e) {
    throw theorem_violation(std::string("interpolant: companion system: ") + e.what());
  }
  std::map<std::string, Formula> sub;
  for (const auto& [rep, comp] : t.proof.backedges)
    sub.emplace(t.repeats.at(rep), sol[at.at(canon.at(comp))]);
  Formula iota = compact(substitute(t.kappa.at({}), sub));
  for (const std::string& v : voc(iota, Polarity::Pos))
    if (!vplus.count(v))
      throw theorem_violation("interpolant: plus vocabulary leak: " + v);
  for (const std::string& v : voc(iota, Polarity::Neg))
    if (!vminus.count(v))
      throw theorem_violation("interpolant: minus vocabulary leak: " + v);
  Sequent s{goal.left, msops::sum(goal.right, {iota}), goal.mode};
  SearchResult r = prove(plain(verify_in), s, budget);
  if (r.status != Status::Proved)
    throw theorem_violation(
        "interpolant: verification failed for " + print(s) +
        (r.status == Status::Budget ? " (budget)" : " (unprovable)"));
  return iota;
}

}  // namespace detail

inline Formula interpolant_cs(const Formula& f, const std::set<std::string>& vplus,
                              const std::set<std::string>& vminus,
                              uint64_t budget = 0) {
  Sequent goal{ms({f}), {}, Mode::Plain};
  Template t = build_template(CalculusId::TplCS, goal, budget);
  return detail::finish_interpolant(t, vplus, vminus, CalculusId::NCS, goal, budget);
}

inline Formula interpolant_er(const Formula& f, const std::set<std::string>& vplus,
                              const std::set<std::string>& vminus,
                              uint64_t budget = 0) {
  Sequent goal{ms({f}), {}, Mode::ER0};
  Template t = build_template(CalculusId::TplER, goal, budget);
  return detail::finish_interpolant(t, vplus, vminus, CalculusId::NER, goal, budget);
}

// box0 turns into a box0/box1 conjunction; everything else is homomorphic
inline Formula sharp(const Formula& f) {
  switch (f.kind()) {
    case Kind::Var:
    case Kind::Bot: return f;
    case Kind::Imp: return Formula::imp(sharp(f.left()), sharp(f.right()));
    case Kind::Box: {
      Formula b = sharp(f.body());
      if (f.index() == 1) return Formula::box(1, b);
      return Formula::conj(Formula::box(0, b), Formula::box(1, b));
    }
  }
  throw shape_error("sharp: unreachable");
}

inline Formula interpolant_csm(const Formula& f, const std::set<std::string>& vplus,
                               const std::set<std::string>& vminus,
                               uint64_t budget = 0) {
  Formula iota = interpolant_cs(sharp(f), vplus, vminus, budget);
  SearchResult r =
      prove(plain(CalculusId::NCSM), Sequent{ms({f}), ms({iota}), Mode::Plain}, budget);
  if (r.status != Status::Proved)
    throw theorem_violation("interpolant_csm: verification failed for " +
                            print(Sequent{ms({f}), ms({iota}), Mode::Plain}));
  return iota;
}

}  // namespace bimodal
