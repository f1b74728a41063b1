#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>

#include "bimodal/cutelim.hpp"
#include "bimodal/gen.hpp"

using namespace bimodal;

namespace {

Formula imp(const Formula& a, const Formula& b) { return Formula::imp(a, b); }
Formula box(int i, const Formula& f) { return Formula::box(i, f); }

// prove or die; used to assemble configurations
CyclicProof proved(const Calculus& c, const Sequent& s) {
  SearchResult r = prove(c, s);
  INFO(calculus_name(c.id) << " on " << print(s));
  REQUIRE(r.status == Status::Proved);
  return r.proof;
}

CutConfiguration config(CalculusId id, const Formula& chi, const Multiset& g,
                        const Multiset& d, Mode m = Mode::Plain) {
  Calculus c = plain(id);
  return CutConfiguration{proved(c, Sequent{g, msops::sum(d, {chi}), m}),
                          proved(c, Sequent{msops::sum(ms({chi}), g), d, m}),
                          chi, c};
}

bool has_cut_node(const ProofPtr& v) {
  if (v->node.rule == "cut") return true;
  for (const ProofPtr& k : v->children)
    if (has_cut_node(k)) return true;
  return false;
}

// the three properties every reduction must deliver
void check_reduced(const CutConfiguration& cfg, const CyclicProof& red) {
  REQUIRE(conclusion_of(red) == cut_conclusion(cfg));
  auto chk = check_proof(with_cut(cfg.calc.id), red);
  INFO(chk.reason);
  REQUIRE(chk.ok);
  REQUIRE(locally_cut_free(red));
}

void reduce_and_check(const CutConfiguration& cfg) {
  check_reduced(cfg, reduce_step(cfg));
}

}  // namespace

TEST_CASE("the literal cut proof is valid but not locally cut-free") {
  Formula p = parse("p"), q = parse("q");
  CutConfiguration cfg = config(CalculusId::NCS, q, ms({p}), ms({p}));
  CyclicProof lit = cut_proof(cfg);
  REQUIRE(conclusion_of(lit) == (Sequent{ms({p}), ms({p}), Mode::Plain}));
  auto chk = check_proof(with_cut(CalculusId::NCS), lit);
  INFO(chk.reason);
  REQUIRE(chk.ok);
  REQUIRE_FALSE(locally_cut_free(lit));
  REQUIRE_FALSE(check_proof(plain(CalculusId::NCS), lit).ok);
}

TEST_CASE("weakening on the left absorbs the cut") {
  Formula p = parse("p"), q = parse("q");
  CutConfiguration cfg = config(CalculusId::NCS, q, ms({p}), ms({p}));
  // the search closes g => d, chi by an axiom that carries chi as context
  REQUIRE(cfg.left.root->node.rule == "ax");
  REQUIRE(classify(cfg) == CutCase::WeakeningLeft);
  reduce_and_check(cfg);
}

TEST_CASE("weakening on the right absorbs the cut") {
  Formula p = parse("p"), q = parse("q");
  Calculus c = plain(CalculusId::NCS);
  // left root botR, right root an axiom that carries chi = q as left context
  CyclicProof left = make_proof(pnode(rules::botR(ms({p}), ms({p, q})),
                                      {pnode(rules::ax(p, ms(), ms({q})))}));
  CyclicProof right = make_proof(pnode(rules::ax(p, ms({q}), ms({Formula::bot()}))));
  CutConfiguration cfg{left, right, q, c};
  REQUIRE(classify(cfg) == CutCase::WeakeningRight);
  reduce_and_check(cfg);
}

TEST_CASE("axiomatic cut on the left contracts the right side") {
  Formula p = parse("p"), q = parse("q"), r = parse("r");
  Calculus c = plain(CalculusId::NCS);
  CyclicProof left = make_proof(pnode(rules::ax(p, ms({imp(q, r), q}), ms({r}))));
  CyclicProof right =
      proved(c, Sequent{ms({p, p, imp(q, r), q}), ms({r}), Mode::Plain});
  CutConfiguration cfg{left, right, p, c};
  REQUIRE(classify(cfg) == CutCase::AxiomaticLeft);
  reduce_and_check(cfg);
}

TEST_CASE("axiomatic cut on the right contracts the left side") {
  Formula p = parse("p"), q = parse("q"), rr = parse("r -> r");
  Calculus c = plain(CalculusId::NCS);
  CyclicProof left = proved(c, Sequent{ms({q}), ms({p, rr, p}), Mode::Plain});
  REQUIRE(left.root->node.rule == "impR");
  CyclicProof right = make_proof(pnode(rules::ax(p, ms({q}), ms({rr}))));
  CutConfiguration cfg{left, right, p, c};
  REQUIRE(classify(cfg) == CutCase::AxiomaticRight);
  reduce_and_check(cfg);
}

TEST_CASE("cutting falsum against its left rule inverts botR") {
  Formula p = parse("p"), q = parse("q");
  CutConfiguration cfg = config(CalculusId::NCS, Formula::bot(),
                                ms({imp(q, p), q}), ms({p}));
  REQUIRE(cfg.left.root->node.rule == "botR");
  REQUIRE(cfg.right.root->node.rule == "botL");
  REQUIRE(classify(cfg) == CutCase::AxiomaticBot);
  reduce_and_check(cfg);
}

TEST_CASE("botR on the left, principal falsum: the premise already fits") {
  Formula p = parse("p"), r = parse("r"), rr = parse("r -> r");
  Calculus c = plain(CalculusId::NCS);
  CyclicProof left =
      proved(c, Sequent{ms({p}), ms({rr, Formula::bot()}), Mode::Plain});
  REQUIRE(left.root->node.rule == "botR");
  CyclicProof right = make_proof(
      pnode(rules::impR(rr, ms({Formula::bot(), p}), ms()),
            {pnode(rules::botL(ms({p, r}), ms({r})))}));
  CutConfiguration cfg{left, right, Formula::bot(), c};
  REQUIRE(classify(cfg) == CutCase::BotRLeft);
  reduce_and_check(cfg);
}

TEST_CASE("botR on the left, cut formula in context") {
  Formula p = parse("p"), q = parse("q"), s = parse("s");
  CutConfiguration cfg = config(CalculusId::NCS, s, ms({imp(q, p), q}),
                                ms({p, Formula::bot()}));
  REQUIRE(cfg.left.root->node.rule == "botR");
  REQUIRE(classify(cfg) == CutCase::BotRLeft);
  reduce_and_check(cfg);
}

TEST_CASE("botR on the right commutes below the cut") {
  Formula p = parse("p"), q = parse("q"), r = parse("r"), rr = parse("r -> r");
  Calculus c = plain(CalculusId::NCS);
  CyclicProof left = make_proof(
      pnode(rules::impR(rr, ms({p}), ms({Formula::bot(), q})),
            {pnode(rules::ax(r, ms({p}), ms({Formula::bot(), q})))}));
  CyclicProof right =
      proved(c, Sequent{ms({q, p}), ms({Formula::bot(), rr}), Mode::Plain});
  REQUIRE(right.root->node.rule == "botR");
  CutConfiguration cfg{left, right, q, c};
  REQUIRE(classify(cfg) == CutCase::BotRRight);
  reduce_and_check(cfg);
}

TEST_CASE("principal implication splits into two smaller cuts") {
  Formula p = parse("p"), q = parse("q"), r = parse("r");
  CutConfiguration cfg =
      config(CalculusId::NCS, imp(p, q), ms({p, imp(p, r)}), ms({r}));
  REQUIRE(cfg.left.root->node.rule == "impR");
  REQUIRE(cfg.right.root->node.rule == "impL");
  REQUIRE(*cfg.right.root->node.principal == imp(p, q));
  REQUIRE(classify(cfg) == CutCase::PrincipalImp);
  reduce_and_check(cfg);
}

TEST_CASE("left implication rule commutes below the cut") {
  Formula p = parse("p"), q = parse("q"), rr = parse("r -> r");
  Formula pq = imp(p, q);
  Calculus c = plain(CalculusId::NCS);
  CyclicProof left = make_proof(
      pnode(rules::impL(pq, ms({p}), ms({q, rr})),
            {pnode(rules::ax(p, ms(), ms({q, rr}))),
             pnode(rules::ax(q, ms({p}), ms({rr})))}));
  CyclicProof right = proved(c, Sequent{ms({rr, pq, p}), ms({q}), Mode::Plain});
  CutConfiguration cfg{left, right, rr, c};
  REQUIRE(classify(cfg) == CutCase::CommuteLeft);
  reduce_and_check(cfg);
}

TEST_CASE("right rules commute below the cut") {
  Formula pp = parse("p -> p"), qq = parse("q -> q");
  CutConfiguration cfg = config(CalculusId::NCS, pp, ms(), ms({qq}));
  REQUIRE(cfg.left.root->node.rule == "impR");   // principal p -> p
  REQUIRE(cfg.right.root->node.rule == "impR");  // principal q -> q
  REQUIRE(*cfg.left.root->node.principal == pp);
  REQUIRE(classify(cfg) == CutCase::CommuteRight);
  reduce_and_check(cfg);
}

TEST_CASE("left unboxing rule commutes below the cut") {
  Formula p = parse("p"), q = parse("q");
  CutConfiguration cfg =
      config(CalculusId::NER, q, ms({box(0, p)}), ms({p}), Mode::ER1);
  REQUIRE(cfg.left.root->node.rule == "er10");
  REQUIRE(classify(cfg) == CutCase::CommuteLeft);
  reduce_and_check(cfg);
}

TEST_CASE("right unboxing of a context occurrence commutes") {
  Formula p = parse("p"), q = parse("q");
  Formula chi = box(0, q), bb = box(0, Formula::bot());
  Calculus c = plain(CalculusId::NER);
  // the right root unboxes [0]bot while chi = [0]q rides along as context
  CyclicProof left = detail::assemble(
      rules::modal(CalculusId::NER, 0, q, ms({Formula::bot()}), ms(), ms(),
                   ms({p}), Mode::ER1),
      {make_proof(pnode(rules::botL(ms({bb}), ms({q}), Mode::ER0)))});
  CyclicProof right = detail::assemble(
      rules::er10(bb, ms({chi}), ms({p})),
      {make_proof(pnode(rules::botL(ms({chi, bb}), ms({p}), Mode::ER1)))});
  CutConfiguration cfg{left, right, chi, c};
  REQUIRE(classify(cfg) == CutCase::CommuteRight);
  reduce_and_check(cfg);
}

TEST_CASE("boxed cut against the unboxing rule") {
  Formula p = parse("p"), q = parse("q");
  Formula chi = box(0, p), bb = box(0, Formula::bot());
  Calculus c = plain(CalculusId::NER);
  CyclicProof left = detail::assemble(
      rules::modal(CalculusId::NER, 0, p, ms({Formula::bot()}), ms(), ms(),
                   ms({q}), Mode::ER1),
      {make_proof(pnode(rules::botL(ms({bb}), ms({p}), Mode::ER0)))});
  REQUIRE(conclusion_of(left) == (Sequent{ms({bb}), ms({chi, q}), Mode::ER1}));
  CyclicProof rsub = proved(c, Sequent{ms({p, chi, bb}), ms({q}), Mode::ER1});
  CyclicProof right =
      detail::assemble(rules::er10(chi, ms({bb}), ms({q})), {rsub});
  CutConfiguration cfg{left, right, chi, c};
  REQUIRE(classify(cfg) == CutCase::ModalEr10);
  reduce_and_check(cfg);
}

TEST_CASE("boxed cut between two modal rules of the same index") {
  Formula p = parse("p"), r = parse("r");
  Formula chi = box(0, p), br = box(0, r), bb = box(0, Formula::bot());
  for (CalculusId id :
       {CalculusId::NCS, CalculusId::NCSM, CalculusId::NER}) {
    Mode m = er_family(id) ? Mode::ER1 : Mode::Plain;
    Mode pm = er_family(id) ? Mode::ER0 : Mode::Plain;
    CyclicProof left = detail::assemble(
        rules::modal(id, 0, p, ms({Formula::bot()}), ms(), ms(), ms({br}), m),
        {make_proof(pnode(rules::botL(ms({bb}), ms({p}), pm)))});
    CyclicProof right = detail::assemble(
        rules::modal(id, 0, r, ms({p, Formula::bot()}), ms(), ms(), ms(), m),
        {make_proof(pnode(rules::botL(ms({p, chi, bb}), ms({r}), pm)))});
    CutConfiguration cfg{left, right, chi, plain(id)};
    REQUIRE(classify(cfg) == CutCase::ModalSame);
    reduce_and_check(cfg);
  }
}

TEST_CASE("boxed cut across the two modalities") {
  Formula p = parse("p"), q = parse("q"), r = parse("r");
  Formula bot = Formula::bot();

  SECTION("index 0 against index 1") {
    Formula chi = box(0, p);
    CyclicProof left = detail::assemble(
        rules::modal(CalculusId::NCS, 0, p, ms({bot}), ms({bot}), ms(),
                     ms({box(1, r)})),
        {make_proof(pnode(rules::botL(ms({box(0, bot), box(1, bot)}), ms({p}))))});
    CyclicProof right = detail::assemble(
        rules::modal(CalculusId::NCS, 1, r, ms({p, bot}), ms({bot}), ms(), ms()),
        {make_proof(pnode(
            rules::botL(ms({chi, box(0, bot), box(1, bot)}), ms({r}))))});
    CutConfiguration cfg{left, right, chi, plain(CalculusId::NCS)};
    REQUIRE(classify(cfg) == CutCase::ModalCross);
    reduce_and_check(cfg);
  }

  SECTION("index 0 against index 1 with both groups dotted") {
    Formula chi = box(0, p);
    CyclicProof left = detail::assemble(
        rules::modal(CalculusId::NCSM, 0, p, ms({bot}), ms({q}), ms(),
                     ms({box(1, r)})),
        {make_proof(pnode(rules::botL(ms({box(0, bot), box(1, q)}), ms({p}))))});
    CyclicProof right = detail::assemble(
        rules::modal(CalculusId::NCSM, 1, r, ms({p, bot}), ms({q}), ms(), ms()),
        {make_proof(pnode(rules::botL(
            ms({p, chi, box(0, bot), q, box(1, q)}), ms({r}))))});
    CutConfiguration cfg{left, right, chi, plain(CalculusId::NCSM)};
    REQUIRE(classify(cfg) == CutCase::ModalCross);
    reduce_and_check(cfg);
  }

  SECTION("index 1 against index 0") {
    Formula chi = box(1, p);
    CyclicProof left = detail::assemble(
        rules::modal(CalculusId::NCSM, 1, p, ms({bot}), ms(), ms(),
                     ms({box(0, r)})),
        {make_proof(pnode(rules::botL(ms({box(0, bot)}), ms({p}))))});
    CyclicProof right = detail::assemble(
        rules::modal(CalculusId::NCSM, 0, r, ms({bot}), ms({p}), ms(), ms()),
        {make_proof(pnode(rules::botL(ms({box(0, bot), box(1, p)}), ms({r}))))});
    CutConfiguration cfg{left, right, chi, plain(CalculusId::NCSM)};
    REQUIRE(classify(cfg) == CutCase::ModalCross);
    reduce_and_check(cfg);
  }
}

TEST_CASE("modal roots carrying boxed context formulas are regrouped") {
  Formula p = parse("p"), q = parse("q"), r = parse("r");
  Formula chi = box(0, p), bb = box(0, Formula::bot());
  CyclicProof left = detail::assemble(
      rules::modal(CalculusId::NCS, 0, p, ms({Formula::bot()}), ms(),
                   ms({box(1, q)}), ms({box(0, r)})),
      {make_proof(pnode(rules::botL(ms({bb}), ms({p}))))});
  CyclicProof right = detail::assemble(
      rules::modal(CalculusId::NCS, 0, r, ms({p, Formula::bot()}), ms({q}),
                   ms(), ms()),
      {make_proof(pnode(rules::botL(ms({p, chi, bb, box(1, q)}), ms({r}))))});
  CutConfiguration cfg{left, right, chi, plain(CalculusId::NCS)};
  REQUIRE(classify(cfg) == CutCase::ModalSame);
  reduce_and_check(cfg);
}

TEST_CASE("cut against a cyclic side keeps its backedges") {
  Formula p = parse("p"), q = parse("q");
  Formula hyp = imp(box(0, p), p);
  Formula chi = box(0, p);
  Formula t = imp(box(1, q), box(1, q));
  Calculus c = plain(CalculusId::NCS);
  // the left side proves its modal premise around a cycle
  CyclicProof prem = proved(c, Sequent{ms({hyp, box(0, hyp)}), ms({p}), Mode::Plain});
  REQUIRE_FALSE(prem.backedges.empty());
  CyclicProof left = detail::assemble(
      rules::modal(CalculusId::NCS, 0, p, ms({hyp}), ms(), ms(), ms({t})),
      {prem});
  CyclicProof right =
      proved(c, Sequent{ms({chi, box(0, hyp)}), ms({t}), Mode::Plain});
  CutConfiguration cfg{left, right, chi, c};
  REQUIRE(classify(cfg) == CutCase::CommuteRight);
  CyclicProof red = reduce_step(cfg);
  check_reduced(cfg, red);
  REQUIRE_FALSE(red.backedges.empty());
}

TEST_CASE("random configurations reduce in every cyclic calculus") {
  Rng rng(83);
  int done[3] = {0, 0, 0};
  CalculusId ids[3] = {CalculusId::NCS, CalculusId::NCSM, CalculusId::NER};
  int attempts = 0;
  while ((done[0] < 25 || done[1] < 25 || done[2] < 25) && ++attempts < 4000) {
    int pick = int(rng.next(3));
    if (done[pick] >= 25) continue;
    CalculusId id = ids[pick];
    Mode m = er_family(id) ? (rng.flip() ? Mode::ER1 : Mode::ER0) : Mode::Plain;
    Sequent s = random_sequent(rng, {"p", "q"}, 4, 2, m);
    Formula chi = random_formula(rng, {"p", "q"}, 4);
    Calculus c = plain(id);
    SearchResult l =
        prove(c, Sequent{s.left, msops::sum(s.right, {chi}), s.mode});
    if (l.status != Status::Proved) continue;
    SearchResult r =
        prove(c, Sequent{msops::sum(ms({chi}), s.left), s.right, s.mode});
    if (r.status != Status::Proved) continue;
    CutConfiguration cfg{l.proof, r.proof, chi, c};
    INFO(calculus_name(id) << " cutting " << print(chi) << " in " << print(s));
    reduce_and_check(cfg);
    ++done[pick];
  }
  REQUIRE(done[0] >= 25);
  REQUIRE(done[1] >= 25);
  REQUIRE(done[2] >= 25);
}

TEST_CASE("search-based elimination yields fully cut-free proofs") {
  Rng rng(89);
  int done = 0, attempts = 0;
  while (done < 12 && ++attempts < 1000) {
    CalculusId id = rng.flip() ? CalculusId::NCS : CalculusId::NER;
    Mode m = er_family(id) ? Mode::ER1 : Mode::Plain;
    Sequent s = random_sequent(rng, {"p", "q"}, 3, 2, m);
    Formula chi = random_formula(rng, {"p", "q"}, 3);
    Calculus c = plain(id);
    SearchResult l =
        prove(c, Sequent{s.left, msops::sum(s.right, {chi}), s.mode});
    if (l.status != Status::Proved) continue;
    SearchResult r =
        prove(c, Sequent{msops::sum(ms({chi}), s.left), s.right, s.mode});
    if (r.status != Status::Proved) continue;
    CutConfiguration cfg{l.proof, r.proof, chi, c};
    CyclicProof lit = cut_proof(cfg);
    CyclicProof elim = eliminate_semantic(c, lit);
    REQUIRE(conclusion_of(elim) == cut_conclusion(cfg));
    REQUIRE(check_proof(c, elim).ok);
    REQUIRE_FALSE(has_cut_node(elim.root));
    ++done;
  }
  REQUIRE(done == 12);
}

TEST_CASE("elimination refuses an invalid conclusion") {
  Formula p = parse("p"), q = parse("q");
  CyclicProof bogus =
      make_proof(pnode(rules::open(Sequent{ms({p}), ms({q}), Mode::Plain})));
  REQUIRE_THROWS_AS(eliminate_semantic(plain(CalculusId::NCS), bogus),
                    theorem_violation);
}

TEST_CASE("malformed configurations are rejected") {
  Formula p = parse("p"), q = parse("q");
  Calculus ncs = plain(CalculusId::NCS);
  CyclicProof l = proved(ncs, Sequent{ms({p}), ms({p, q}), Mode::Plain});
  CyclicProof r = proved(ncs, Sequent{ms({q, p}), ms({p}), Mode::Plain});

  SECTION("wellfounded calculi have no reduction step") {
    CutConfiguration cfg{l, r, q, plain(CalculusId::GCS)};
    REQUIRE_THROWS_AS(classify(cfg), shape_error);
  }
  SECTION("cut formula must occur on both sides") {
    CutConfiguration cfg{l, r, parse("r"), ncs};
    REQUIRE_THROWS_AS(reduce_step(cfg), shape_error);
  }
  SECTION("contexts must agree") {
    CyclicProof other = proved(ncs, Sequent{ms({q, p, p}), ms({p}), Mode::Plain});
    CutConfiguration cfg{l, other, q, ncs};
    REQUIRE_THROWS_AS(reduce_step(cfg), shape_error);
  }
  SECTION("a side may not end in a cut") {
    // a literal cut proof of p => p, q used as the left side
    CutConfiguration inner = config(CalculusId::NCS, q, ms({p}), ms({p, q}));
    CutConfiguration cfg{cut_proof(inner), r, q, ncs};
    REQUIRE_THROWS_AS(classify(cfg), shape_error);
  }
}

TEST_CASE("case names are distinct") {
  std::set<std::string> names;
  for (CutCase cc :
       {CutCase::WeakeningLeft, CutCase::WeakeningRight, CutCase::AxiomaticLeft,
        CutCase::AxiomaticRight, CutCase::AxiomaticBot, CutCase::BotRLeft,
        CutCase::BotRRight, CutCase::PrincipalImp, CutCase::CommuteLeft,
        CutCase::CommuteRight, CutCase::ModalEr10, CutCase::ModalSame,
        CutCase::ModalCross})
    names.insert(cut_case_name(cc));
  REQUIRE(names.size() == 13);
}
