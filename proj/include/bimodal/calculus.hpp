#pragma once

// Rule schemas for the eight sequent systems: three wellfounded ("G") and
// three cyclic ("N") calculi for the logics CS, CSM and ER, plus the two
// template calculi used by the interpolant construction.  Instances are
// built from their decomposition (principal, box groups, context) so that
// checking an instance is rebuild-and-compare.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bimodal/sequent.hpp"

namespace bimodal {

enum class CalculusId { GCS, GCSM, GER, NCS, NCSM, NER, TplCS, TplER };

struct Calculus {
  CalculusId id;
  bool with_cut = false;
};

inline bool is_tpl(CalculusId c) {
  return c == CalculusId::TplCS || c == CalculusId::TplER;
}
inline bool is_g(CalculusId c) {
  return c == CalculusId::GCS || c == CalculusId::GCSM || c == CalculusId::GER;
}
inline bool is_n(CalculusId c) {
  return c == CalculusId::NCS || c == CalculusId::NCSM || c == CalculusId::NER;
}
inline bool er_family(CalculusId c) {
  return c == CalculusId::GER || c == CalculusId::NER || c == CalculusId::TplER;
}

inline Calculus plain(CalculusId id) { return Calculus{id, false}; }

inline Calculus with_cut(CalculusId id) {
  if (is_tpl(id)) throw shape_error("template calculi never take cut");
  return Calculus{id, true};
}

inline bool is_modal_rule(const std::string& rule) {
  return rule == "boxCS0" || rule == "boxCS1" || rule == "boxCSM0" ||
         rule == "boxCSM1" || rule == "boxER0" || rule == "boxER1" ||
         rule == "boxKT0" || rule == "boxKT1";
}

inline bool is_structural_rule(const std::string& rule) {
  return rule == "wk" || rule == "ctr" || rule == "to1";
}

// which left box groups contribute naked copies to the modal premise
inline std::pair<bool, bool> dotted_groups(CalculusId c, int i) {
  const bool csm = c == CalculusId::GCSM || c == CalculusId::NCSM;
  if (csm) return {true, i == 1};
  return {i == 0, i == 1};
}

inline std::string calculus_name(CalculusId c) {
  switch (c) {
    case CalculusId::GCS: return "GCS";
    case CalculusId::GCSM: return "GCSM";
    case CalculusId::GER: return "GER";
    case CalculusId::NCS: return "NCS";
    case CalculusId::NCSM: return "NCSM";
    case CalculusId::NER: return "NER";
    case CalculusId::TplCS: return "TplCS";
    case CalculusId::TplER: return "TplER";
  }
  return "?";
}

struct RuleInstance {
  std::string rule;
  Sequent conclusion;
  std::vector<Sequent> premises;
  std::optional<Formula> principal;  // for cut: the cut formula
  std::optional<Formula> diagonal;   // G modal rules: boxed copy kept in the premise
  std::array<Multiset, 2> sigma{};   // left box groups
  std::array<Multiset, 2> theta{};   // boxKTplus: right box groups
  Multiset wk_left, wk_right;        // context / weakening parts
  std::vector<size_t> progressing;   // premise indices
};

// ---- ER saturation ----------------------------------------------------------

inline bool left_saturated(const Formula& f, const Sequent& s) {
  switch (f.kind()) {
    case Kind::Var:
    case Kind::Bot: return true;
    case Kind::Imp:
      return msops::contains(s.right, f.left()) || msops::contains(s.left, f.right());
    case Kind::Box:
      if (f.index() == 1) return true;
      return s.mode != Mode::ER1 || msops::contains(s.left, f.body());
  }
  return true;
}

inline bool right_saturated(const Formula& f, const Sequent& s) {
  switch (f.kind()) {
    case Kind::Var:
    case Kind::Bot:
    case Kind::Box: return true;
    case Kind::Imp:
      return msops::contains(s.left, f.left()) && msops::contains(s.right, f.right());
  }
  return true;
}

// total complexity of unsaturated member occurrences
inline uint64_t satc(const Sequent& s) {
  uint64_t acc = 0;
  for (const Formula& f : s.left)
    if (!left_saturated(f, s)) acc += f.size();
  for (const Formula& f : s.right)
    if (!right_saturated(f, s)) acc += f.size();
  return acc;
}

inline bool saturated(const Sequent& s) { return satc(s) == 0; }

// ---- instance builders ------------------------------------------------------

namespace rules {

inline RuleInstance ax(const Formula& p, Multiset wl, Multiset wr,
                       Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "ax";
  r.principal = p;
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  r.conclusion = Sequent{msops::sum(r.wk_left, {p}), msops::sum(r.wk_right, {p}), m};
  return r;
}

inline RuleInstance botL(Multiset wl, Multiset wr, Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "botL";
  r.principal = Formula::bot();
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  r.conclusion =
      Sequent{msops::sum(r.wk_left, {Formula::bot()}), r.wk_right, m};
  return r;
}

inline RuleInstance botR(Multiset wl, Multiset wr, Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "botR";
  r.principal = Formula::bot();
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  r.conclusion = Sequent{r.wk_left, msops::sum(r.wk_right, {Formula::bot()}), m};
  r.premises = {Sequent{r.wk_left, r.wk_right, m}};
  return r;
}

inline RuleInstance impL(const Formula& pr, Multiset wl, Multiset wr,
                         Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "impL";
  r.principal = pr;
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  r.conclusion = Sequent{msops::sum(r.wk_left, {pr}), r.wk_right, m};
  r.premises = {Sequent{r.wk_left, msops::sum(r.wk_right, {pr.left()}), m},
                Sequent{msops::sum(r.wk_left, {pr.right()}), r.wk_right, m}};
  return r;
}

inline RuleInstance impR(const Formula& pr, Multiset wl, Multiset wr,
                         Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "impR";
  r.principal = pr;
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  r.conclusion = Sequent{r.wk_left, msops::sum(r.wk_right, {pr}), m};
  r.premises = {Sequent{msops::sum(r.wk_left, {pr.left()}),
                        msops::sum(r.wk_right, {pr.right()}), m}};
  return r;
}

inline RuleInstance er10(const Formula& pr, Multiset wl, Multiset wr,
                         bool saturating = false) {
  RuleInstance r;
  r.rule = saturating ? "er10sat" : "er10";
  r.principal = pr;
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  r.conclusion = Sequent{msops::sum(r.wk_left, {pr}), r.wk_right, Mode::ER1};
  r.premises = {Sequent{msops::sum(r.wk_left, ms({pr, pr.body()})), r.wk_right,
                        Mode::ER1}};
  return r;
}

inline RuleInstance impLsat(const Formula& pr, Multiset wl, Multiset wr, Mode m) {
  RuleInstance r;
  r.rule = "impLsat";
  r.principal = pr;
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  Multiset l = msops::sum(r.wk_left, {pr});
  r.conclusion = Sequent{l, r.wk_right, m};
  r.premises = {Sequent{l, msops::sum(r.wk_right, {pr.left()}), m},
                Sequent{msops::sum(l, {pr.right()}), r.wk_right, m}};
  return r;
}

inline RuleInstance impRsat(const Formula& pr, Multiset wl, Multiset wr, Mode m) {
  RuleInstance r;
  r.rule = "impRsat";
  r.principal = pr;
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  Multiset rr = msops::sum(r.wk_right, {pr});
  r.conclusion = Sequent{r.wk_left, rr, m};
  r.premises = {Sequent{msops::sum(r.wk_left, {pr.left()}),
                        msops::sum(rr, {pr.right()}), m}};
  return r;
}

// the single modal rule of each non-template calculus, for principal [i]phi
inline RuleInstance modal(CalculusId c, int i, const Formula& phi, Multiset sigma0,
                          Multiset sigma1, Multiset wl, Multiset wr,
                          Mode concl_mode = Mode::Plain) {
  RuleInstance r;
  const bool g = is_g(c);
  switch (c) {
    case CalculusId::GCS: r.rule = i == 0 ? "boxCS0" : "boxCS1"; break;
    case CalculusId::GCSM: r.rule = i == 0 ? "boxCSM0" : "boxCSM1"; break;
    case CalculusId::GER: r.rule = i == 0 ? "boxER0" : "boxER1"; break;
    case CalculusId::NCS:
    case CalculusId::NCSM:
    case CalculusId::NER: r.rule = i == 0 ? "boxKT0" : "boxKT1"; break;
    default: throw shape_error("modal(): not a G/N calculus");
  }
  r.principal = Formula::box(i, phi);
  r.sigma[0] = std::move(sigma0);
  r.sigma[1] = std::move(sigma1);
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);

  auto [dot0, dot1] = dotted_groups(c, i);
  Multiset pl = msops::sum(dot0 ? dot_box(0, r.sigma[0]) : box_prefix(0, r.sigma[0]),
                           dot1 ? dot_box(1, r.sigma[1]) : box_prefix(1, r.sigma[1]));
  if (g) {
    r.diagonal = r.principal;
    pl = msops::sum(pl, {*r.principal});
  }
  Mode pm = Mode::Plain;
  if (er_family(c)) pm = i == 0 ? Mode::ER0 : Mode::ER1;
  r.premises = {Sequent{pl, ms({phi}), pm}};
  r.conclusion =
      Sequent{msops::sum(msops::sum(box_prefix(0, r.sigma[0]), box_prefix(1, r.sigma[1])),
                         r.wk_left),
              msops::sum({*r.principal}, r.wk_right), concl_mode};
  if (!g) r.progressing = {0};
  return r;
}

inline RuleInstance emp(Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "emp";
  r.conclusion = Sequent{{}, {}, m};
  return r;
}

inline RuleInstance boxKTplus(CalculusId c, Multiset sigma0, Multiset sigma1,
                              Multiset theta0, Multiset theta1, Multiset wl,
                              Multiset wr, Mode concl_mode) {
  RuleInstance r;
  r.rule = "boxKTplus";
  r.sigma[0] = std::move(sigma0);
  r.sigma[1] = std::move(sigma1);
  r.theta[0] = ms(std::move(theta0));
  r.theta[1] = ms(std::move(theta1));
  r.wk_left = std::move(wl);
  r.wk_right = std::move(wr);
  bool er = c == CalculusId::TplER;
  for (int i = 0; i <= 1; ++i) {
    Multiset s_i = msops::dedup(r.sigma[i]), s_o = msops::dedup(r.sigma[1 - i]);
    Multiset pl = msops::sum(dot_box(i, s_i), box_prefix(1 - i, s_o));
    Mode pm = er ? (i == 0 ? Mode::ER0 : Mode::ER1) : Mode::Plain;
    r.premises.push_back(Sequent{pl, {}, pm});
    for (const Formula& f : msops::dedup(r.theta[i]))
      r.premises.push_back(Sequent{pl, ms({f}), pm});
  }
  for (size_t k = 0; k < r.premises.size(); ++k) r.progressing.push_back(k);
  r.conclusion = Sequent{
      msops::sum(msops::sum(box_prefix(0, r.sigma[0]), box_prefix(1, r.sigma[1])),
                 r.wk_left),
      msops::sum(msops::sum(box_prefix(0, r.theta[0]), box_prefix(1, r.theta[1])),
                 r.wk_right),
      concl_mode};
  return r;
}

inline RuleInstance cut(const Formula& chi, Multiset l, Multiset r_,
                        Mode m = Mode::Plain) {
  RuleInstance r;
  r.rule = "cut";
  r.principal = chi;
  r.wk_left = std::move(l);
  r.wk_right = std::move(r_);
  r.conclusion = Sequent{r.wk_left, r.wk_right, m};
  r.premises = {Sequent{r.wk_left, msops::sum(r.wk_right, {chi}), m},
                Sequent{msops::sum(r.wk_left, {chi}), r.wk_right, m}};
  return r;
}

inline RuleInstance wk(const Sequent& premise, Multiset addl, Multiset addr) {
  RuleInstance r;
  r.rule = "wk";
  r.wk_left = std::move(addl);
  r.wk_right = std::move(addr);
  r.premises = {premise};
  r.conclusion = Sequent{msops::sum(premise.left, r.wk_left),
                         msops::sum(premise.right, r.wk_right), premise.mode};
  return r;
}

inline RuleInstance ctr(const Sequent& premise, const Sequent& conclusion) {
  RuleInstance r;
  r.rule = "ctr";
  r.premises = {premise};
  r.conclusion = conclusion;
  return r;
}

inline RuleInstance to1(const Sequent& premise) {
  RuleInstance r;
  r.rule = "to1";
  r.premises = {premise};
  r.conclusion = Sequent{premise.left, premise.right, Mode::ER1};
  return r;
}

inline RuleInstance rep(const Sequent& s) {
  RuleInstance r;
  r.rule = "rep";
  r.conclusion = s;
  return r;
}

inline RuleInstance open(const Sequent& s) {
  RuleInstance r;
  r.rule = "open";
  r.conclusion = s;
  return r;
}

}  // namespace rules

// ---- rule tables ------------------------------------------------------------

inline std::vector<std::string> rules_of(const Calculus& c) {
  std::vector<std::string> out;
  switch (c.id) {
    case CalculusId::GCS:
    case CalculusId::GCSM:
    case CalculusId::NCS:
    case CalculusId::NCSM:
      out = {"ax", "botL", "botR", "impL", "impR"};
      break;
    case CalculusId::GER:
    case CalculusId::NER:
      out = {"ax", "botL", "botR", "impL", "impR", "er10"};
      break;
    case CalculusId::TplCS:
      out = {"ax", "botL", "botR", "impL", "impR", "emp", "boxKTplus"};
      break;
    case CalculusId::TplER:
      out = {"ax", "botL", "emp", "er10sat", "impLsat", "impRsat", "boxKTplus"};
      break;
  }
  switch (c.id) {
    case CalculusId::GCS: out.push_back("boxCS0"); out.push_back("boxCS1"); break;
    case CalculusId::GCSM: out.push_back("boxCSM0"); out.push_back("boxCSM1"); break;
    case CalculusId::GER: out.push_back("boxER0"); out.push_back("boxER1"); break;
    case CalculusId::NCS:
    case CalculusId::NCSM:
    case CalculusId::NER:
      out.push_back("boxKT0");
      out.push_back("boxKT1");
      break;
    default: break;
  }
  if (c.with_cut) {
    out.push_back("cut");
    out.push_back("wk");
    out.push_back("ctr");
    if (er_family(c.id)) out.push_back("to1");
  }
  return out;
}

inline bool mode_allowed(CalculusId c, Mode m) {
  return er_family(c) ? m != Mode::Plain : m == Mode::Plain;
}

namespace detail {

inline Multiset boxes_of(const Multiset& m, int index) {
  Multiset out;
  for (const Formula& f : m)
    if (f.kind() == Kind::Box && f.index() == index) out.push_back(f.body());
  return ms(std::move(out));
}

inline Multiset non_boxes(const Multiset& m) {
  Multiset out;
  for (const Formula& f : m)
    if (f.kind() != Kind::Box) out.push_back(f);
  return out;  // already sorted as a filtered sorted vector
}

inline bool all_vars(const Multiset& m) {
  for (const Formula& f : m)
    if (f.kind() != Kind::Var) return false;
  return true;
}

inline bool no_boxes(const Multiset& m) {
  for (const Formula& f : m)
    if (f.kind() == Kind::Box) return false;
  return true;
}

inline bool var_disjoint(const Multiset& a, const Multiset& b) {
  for (const Formula& f : a)
    if (f.kind() == Kind::Var && msops::contains(b, f)) return false;
  return true;
}

}  // namespace detail

// ---- enumeration ------------------------------------------------------------

inline std::vector<RuleInstance> match_conclusion(const Calculus& c, const Sequent& s) {
  std::vector<RuleInstance> out;
  if (!mode_allowed(c.id, s.mode)) return out;
  const bool tpl_er = c.id == CalculusId::TplER;
  const bool tpl_cs = c.id == CalculusId::TplCS;

  // ax (all calculi): one instance per distinct shared variable
  for (const Formula& f : msops::dedup(s.left))
    if (f.kind() == Kind::Var && msops::contains(s.right, f))
      out.push_back(rules::ax(f, msops::diff(s.left, {f}), msops::diff(s.right, {f}),
                              s.mode));

  // botL
  if (msops::contains(s.left, Formula::bot()))
    out.push_back(rules::botL(msops::diff(s.left, {Formula::bot()}), s.right, s.mode));

  // botR (not in TplER)
  if (!tpl_er && msops::contains(s.right, Formula::bot()))
    out.push_back(rules::botR(s.left, msops::diff(s.right, {Formula::bot()}), s.mode));

  // implication rules
  for (const Formula& f : msops::dedup(s.left))
    if (f.kind() == Kind::Imp) {
      if (tpl_er) {
        if (!left_saturated(f, s))
          out.push_back(rules::impLsat(f, msops::diff(s.left, {f}), s.right, s.mode));
      } else {
        out.push_back(rules::impL(f, msops::diff(s.left, {f}), s.right, s.mode));
      }
    }
  for (const Formula& f : msops::dedup(s.right))
    if (f.kind() == Kind::Imp) {
      if (tpl_er) {
        if (!right_saturated(f, s))
          out.push_back(rules::impRsat(f, s.left, msops::diff(s.right, {f}), s.mode));
      } else {
        out.push_back(rules::impR(f, s.left, msops::diff(s.right, {f}), s.mode));
      }
    }

  // er10 family
  if ((c.id == CalculusId::GER || c.id == CalculusId::NER || tpl_er) &&
      s.mode == Mode::ER1)
    for (const Formula& f : msops::dedup(s.left))
      if (f.kind() == Kind::Box && f.index() == 0) {
        if (tpl_er) {
          if (!left_saturated(f, s))
            out.push_back(
                rules::er10(f, msops::diff(s.left, {f}), s.right, true));
        } else {
          out.push_back(rules::er10(f, msops::diff(s.left, {f}), s.right, false));
        }
      }

  // emp
  if ((tpl_cs || tpl_er) && s.left.empty() && s.right.empty())
    out.push_back(rules::emp(s.mode));

  // modal rules: maximal instances, one per distinct boxed formula on the right
  if (is_g(c.id) || is_n(c.id)) {
    Multiset s0 = detail::boxes_of(s.left, 0), s1 = detail::boxes_of(s.left, 1);
    Multiset wl = detail::non_boxes(s.left);
    for (int i = 0; i <= 1; ++i)
      for (const Formula& f : msops::dedup(s.right))
        if (f.kind() == Kind::Box && f.index() == i)
          out.push_back(rules::modal(c.id, i, f.body(), s0, s1, wl,
                                     msops::diff(s.right, {f}), s.mode));
  }

  // boxKTplus: at most one (maximal) instance
  if (tpl_cs || tpl_er) {
    Multiset s0 = detail::boxes_of(s.left, 0), s1 = detail::boxes_of(s.left, 1);
    Multiset t0 = detail::boxes_of(s.right, 0), t1 = detail::boxes_of(s.right, 1);
    Multiset wl = detail::non_boxes(s.left), wr = detail::non_boxes(s.right);
    bool ok;
    if (tpl_cs) {
      ok = detail::all_vars(wl) && detail::all_vars(wr) &&
           detail::var_disjoint(wl, wr);
    } else {
      ok = saturated(s) && detail::var_disjoint(wl, wr) &&
           !msops::contains(wl, Formula::bot());
    }
    // the all-empty instance is subsumed by emp and would loop on itself
    if (ok && !(s.left.empty() && s.right.empty()))
      out.push_back(rules::boxKTplus(c.id, s0, s1, t0, t1, wl, wr, s.mode));
  }
  return out;
}

// ---- checking ---------------------------------------------------------------

struct CheckResult {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

inline CheckResult fail_check(const std::string& r) { return CheckResult{false, r}; }

namespace detail {

inline bool rule_in(const Calculus& c, const std::string& name) {
  for (const auto& r : rules_of(c))
    if (r == name) return true;
  return false;
}

inline CheckResult compare_rebuilt(const RuleInstance& got, const RuleInstance& want) {
  if (got.conclusion != want.conclusion)
    return fail_check("conclusion does not match the declared decomposition");
  if (got.premises != want.premises)
    return fail_check("premises do not match the declared decomposition");
  if (got.progressing != want.progressing)
    return fail_check("progressing premise set is wrong");
  return {};
}

}  // namespace detail

inline CheckResult check_instance(const Calculus& c, const RuleInstance& r) {
  using namespace detail;
  if (r.rule == "rep" || r.rule == "open")
    return fail_check("'" + r.rule + "' is a proof marker, not a rule");
  if (!rule_in(c, r.rule))
    return fail_check("rule '" + r.rule + "' not part of " + calculus_name(c.id) +
                      (c.with_cut ? "+cut" : ""));
  if (!mode_allowed(c.id, r.conclusion.mode))
    return fail_check("conclusion mode not allowed in this calculus");
  for (const Sequent& p : r.premises)
    if (!mode_allowed(c.id, p.mode))
      return fail_check("premise mode not allowed in this calculus");

  auto need_principal = [&](Kind k, int index = -1) -> CheckResult {
    if (!r.principal) return fail_check(r.rule + " needs a principal formula");
    if (r.principal->kind() != k)
      return fail_check(r.rule + ": principal has the wrong shape");
    if (index >= 0 && r.principal->index() != index)
      return fail_check(r.rule + ": principal has the wrong box index");
    return {};
  };

  const Mode m = r.conclusion.mode;

  if (r.rule == "ax") {
    if (auto e = need_principal(Kind::Var); !e.ok) return e;
    return compare_rebuilt(r, rules::ax(*r.principal, r.wk_left, r.wk_right, m));
  }
  if (r.rule == "botL")
    return compare_rebuilt(r, rules::botL(r.wk_left, r.wk_right, m));
  if (r.rule == "botR")
    return compare_rebuilt(r, rules::botR(r.wk_left, r.wk_right, m));
  if (r.rule == "impL" || r.rule == "impR" || r.rule == "impLsat" ||
      r.rule == "impRsat") {
    if (auto e = need_principal(Kind::Imp); !e.ok) return e;
    RuleInstance want =
        r.rule == "impL"      ? rules::impL(*r.principal, r.wk_left, r.wk_right, m)
        : r.rule == "impR"    ? rules::impR(*r.principal, r.wk_left, r.wk_right, m)
        : r.rule == "impLsat" ? rules::impLsat(*r.principal, r.wk_left, r.wk_right, m)
                              : rules::impRsat(*r.principal, r.wk_left, r.wk_right, m);
    if (auto e = compare_rebuilt(r, want); !e.ok) return e;
    if (r.rule == "impLsat" && left_saturated(*r.principal, r.conclusion))
      return fail_check("impLsat: principal already left-saturated");
    if (r.rule == "impRsat" && right_saturated(*r.principal, r.conclusion))
      return fail_check("impRsat: principal already right-saturated");
    return {};
  }
  if (r.rule == "er10" || r.rule == "er10sat") {
    if (auto e = need_principal(Kind::Box, 0); !e.ok) return e;
    if (m != Mode::ER1) return fail_check("er10 applies only at mode 1");
    if (auto e = compare_rebuilt(r, rules::er10(*r.principal, r.wk_left, r.wk_right,
                                                r.rule == "er10sat"));
        !e.ok)
      return e;
    if (r.rule == "er10sat" && left_saturated(*r.principal, r.conclusion))
      return fail_check("er10sat: principal already left-saturated");
    return {};
  }
  if (r.rule == "boxCS0" || r.rule == "boxCS1" || r.rule == "boxCSM0" ||
      r.rule == "boxCSM1" || r.rule == "boxER0" || r.rule == "boxER1" ||
      r.rule == "boxKT0" || r.rule == "boxKT1") {
    if (!r.principal || r.principal->kind() != Kind::Box)
      return fail_check("modal rule needs a boxed principal");
    int i = r.principal->index();
    if ((r.rule.back() == '0') != (i == 0))
      return fail_check("modal rule name does not match the principal index");
    return compare_rebuilt(r, rules::modal(c.id, i, r.principal->body(), r.sigma[0],
                                           r.sigma[1], r.wk_left, r.wk_right, m));
  }
  if (r.rule == "emp") return compare_rebuilt(r, rules::emp(m));
  if (r.rule == "boxKTplus") {
    RuleInstance want = rules::boxKTplus(c.id, r.sigma[0], r.sigma[1], r.theta[0],
                                         r.theta[1], r.wk_left, r.wk_right, m);
    if (auto e = compare_rebuilt(r, want); !e.ok) return e;
    if (r.conclusion.left.empty() && r.conclusion.right.empty())
      return fail_check("boxKTplus: empty conclusion is closed by emp");
    if (c.id == CalculusId::TplCS) {
      if (!detail::all_vars(r.wk_left) || !detail::all_vars(r.wk_right))
        return fail_check("boxKTplus: side formulas must be variables");
      if (!detail::var_disjoint(r.wk_left, r.wk_right))
        return fail_check("boxKTplus: shared side variable (use ax)");
    } else {
      if (!saturated(r.conclusion))
        return fail_check("boxKTplus: conclusion not saturated");
      if (!detail::no_boxes(r.wk_left) || !detail::no_boxes(r.wk_right))
        return fail_check("boxKTplus: boxed formula left in the side parts");
      if (!detail::var_disjoint(r.wk_left, r.wk_right))
        return fail_check("boxKTplus: shared side variable (use ax)");
      if (msops::contains(r.wk_left, Formula::bot()))
        return fail_check("boxKTplus: bot on the left (use botL)");
    }
    return {};
  }
  if (r.rule == "cut") {
    if (!r.principal) return fail_check("cut needs its cut formula");
    return compare_rebuilt(
        r, rules::cut(*r.principal, r.conclusion.left, r.conclusion.right, m));
  }
  if (r.rule == "wk") {
    if (r.premises.size() != 1) return fail_check("wk takes one premise");
    return compare_rebuilt(r, rules::wk(r.premises[0], r.wk_left, r.wk_right));
  }
  if (r.rule == "ctr") {
    if (r.premises.size() != 1) return fail_check("ctr takes one premise");
    const Sequent& p = r.premises[0];
    if (p.mode != m) return fail_check("ctr must preserve the mode");
    if (!msops::subset(r.conclusion.left, p.left) ||
        !msops::subset(r.conclusion.right, p.right))
      return fail_check("ctr conclusion must be contained in the premise");
    if (msops::dedup(r.conclusion.left) != msops::dedup(p.left) ||
        msops::dedup(r.conclusion.right) != msops::dedup(p.right))
      return fail_check("ctr may only merge duplicate occurrences");
    return {};
  }
  if (r.rule == "to1") {
    if (r.premises.size() != 1) return fail_check("to1 takes one premise");
    const Sequent& p = r.premises[0];
    if (p.mode != Mode::ER0 || m != Mode::ER1)
      return fail_check("to1 goes from mode 0 to mode 1");
    if (p.left != r.conclusion.left || p.right != r.conclusion.right)
      return fail_check("to1 must keep the sequent");
    return {};
  }
  return fail_check("unknown rule '" + r.rule + "'");
}

}  // namespace bimodal
