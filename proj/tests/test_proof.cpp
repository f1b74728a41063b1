#include <catch2/catch_amalgamated.hpp>

#include "bimodal/gen.hpp"
#include "bimodal/proof.hpp"

using namespace bimodal;

namespace {

// |- [0]([0]p -> p) -> [0]p  in the cyclic calculus, with one backedge
CyclicProof lob_example() {
  Formula p = Formula::var("p");
  Formula box_p = Formula::box(0, p);
  Formula hyp = Formula::imp(box_p, p);          // [0]p -> p
  Formula box_hyp = Formula::box(0, hyp);        // [0]([0]p -> p)

  // repeated sequent: [0]p -> p, [0]([0]p -> p) |- p
  ProofPtr ax = pnode(rules::ax(p, ms({box_hyp}), ms()));
  ProofPtr rep = pnode(rules::rep(parse_sequent("[0]p -> p, [0]([0]p -> p) |- p")));
  ProofPtr inner_box =
      pnode(rules::modal(CalculusId::NCS, 0, p, ms({hyp}), ms(), ms(), ms({p})),
            {rep});
  ProofPtr imp_l = pnode(rules::impL(hyp, ms({box_hyp}), ms({p})), {inner_box, ax});
  ProofPtr outer_box =
      pnode(rules::modal(CalculusId::NCS, 0, p, ms({hyp}), ms(), ms(), ms()),
            {imp_l});
  ProofPtr root = pnode(
      rules::impR(Formula::imp(box_hyp, box_p), ms(), ms()), {outer_box});
  CyclicProof cp{root, {{{0, 0, 0, 0}, {0, 0}}}};
  return cp;
}

}  // namespace

TEST_CASE("pnode validates arity and child conclusions") {
  auto inst = rules::impR(parse("p -> p"), ms(), ms());
  CHECK_THROWS_AS(pnode(inst, {}), shape_error);
  auto wrong = pnode(rules::ax(parse("q"), ms(), ms()));
  CHECK_THROWS_AS(pnode(inst, {wrong}), shape_error);
  auto right = pnode(rules::ax(parse("p"), ms(), ms()));
  ProofPtr ok = pnode(inst, {right});
  CHECK(print(ok->node.conclusion) == "|- p -> p");
  CHECK(proof_size(ok) == 2);
  CHECK(proof_height(ok) == 1);
}

TEST_CASE("a wellfounded proof checks") {
  auto right = pnode(rules::ax(parse("p"), ms(), ms()));
  ProofPtr ok = pnode(rules::impR(parse("p -> p"), ms(), ms()), {right});
  auto r = check_proof(plain(CalculusId::GCS), make_proof(ok));
  CHECK(r.ok);
  // also fine in the cyclic calculus and with cut enabled
  CHECK(check_proof(plain(CalculusId::NCS), make_proof(ok)).ok);
  CHECK(check_proof(with_cut(CalculusId::NCS), make_proof(ok)).ok);
  // but not in ER systems: wrong mode
  CHECK_FALSE(check_proof(plain(CalculusId::NER), make_proof(ok)).ok);
}

TEST_CASE("check_proof rejects hand-made defects") {
  // bypass pnode to build a tree whose subproof proves the wrong thing
  auto bad_child = std::make_shared<Proof>(
      Proof{rules::ax(parse("q"), ms(), ms()), {}});
  auto root = std::make_shared<Proof>(
      Proof{rules::impR(parse("p -> p"), ms(), ms()), {bad_child}});
  auto r = check_proof(plain(CalculusId::GCS), make_proof(root));
  CHECK_FALSE(r.ok);
  CHECK(r.where == Path{});
  CHECK(r.reason.find("premise") != std::string::npos);

  auto open_leaf = pnode(rules::open(parse_sequent("p |- p")));
  CHECK_FALSE(check_proof(plain(CalculusId::GCS), make_proof(open_leaf)).ok);
  CHECK(check_proof(plain(CalculusId::GCS), make_proof(open_leaf), true).ok);
}

TEST_CASE("the cyclic example is valid") {
  CyclicProof cp = lob_example();
  auto r = check_proof(plain(CalculusId::NCS), cp);
  INFO(r.reason);
  CHECK(r.ok);
  CHECK(print(conclusion_of(cp)) == "|- [0]([0]p -> p) -> [0]p");
  // the same tree is NOT a valid wellfounded-calculus proof: boxCS0 differs
  CHECK_FALSE(check_proof(plain(CalculusId::GCS), cp).ok);
}

TEST_CASE("backedge defects are caught") {
  SECTION("missing backedge") {
    CyclicProof cp = lob_example();
    cp.backedges.clear();
    auto r = check_proof(plain(CalculusId::NCS), cp);
    CHECK_FALSE(r.ok);
    CHECK(r.reason.find("without backedge") != std::string::npos);
  }
  SECTION("companion with a different sequent") {
    CyclicProof cp = lob_example();
    cp.backedges[{0, 0, 0, 0}] = {0};
    auto r = check_proof(plain(CalculusId::NCS), cp);
    CHECK_FALSE(r.ok);
    CHECK(r.reason.find("differs") != std::string::npos);
  }
  SECTION("companion must be a strict ancestor") {
    CyclicProof cp = lob_example();
    cp.backedges[{0, 0, 0, 0}] = {0, 0, 1};
    CHECK_FALSE(check_proof(plain(CalculusId::NCS), cp).ok);
  }
  SECTION("backedge from a non-rep node") {
    CyclicProof cp = lob_example();
    cp.backedges[{0}] = {};
    CHECK_FALSE(check_proof(plain(CalculusId::NCS), cp).ok);
  }
}

TEST_CASE("progress is required on the cycle") {
  // wk adds nothing, so premise == conclusion: a cycle with no progress
  Sequent s = parse_sequent("p |- q");
  ProofPtr rep = pnode(rules::rep(s));
  ProofPtr root = pnode(rules::wk(s, ms(), ms()), {rep});
  CyclicProof cp{root, {{{0}, {}}}};
  auto r = check_proof(with_cut(CalculusId::NCS), cp);
  CHECK_FALSE(r.ok);
  CHECK(r.reason.find("progress") != std::string::npos);
}

TEST_CASE("local fragment and local height") {
  CyclicProof cp = lob_example();
  CHECK(local_height(cp) == 1);  // root -> outer box, then a progressing edge
  auto frag = local_fragment(cp);
  CHECK(frag == std::vector<Path>{{}, {0}});
  CHECK(locally_cut_free(cp));

  CyclicProof below = extract_subproof(cp, {0, 0});
  CHECK(local_height(below) == 1);  // impL edges, both premises immediately stop
  CHECK(local_fragment(below).size() == 3);

  // a cut at the root is in the local fragment
  ProofPtr l = pnode(rules::ax(parse("p"), ms(), ms({parse("p")})));
  ProofPtr r = pnode(rules::ax(parse("p"), ms({parse("p")}), ms()));
  ProofPtr c = pnode(rules::cut(parse("p"), ms({parse("p")}), ms({parse("p")})),
                     {l, r});
  CHECK_FALSE(locally_cut_free(make_proof(c)));
  CHECK(local_height(make_proof(c)) == 1);
}

TEST_CASE("subproof extraction keeps internal cycles") {
  CyclicProof cp = lob_example();

  CyclicProof sub = extract_subproof(cp, {0});
  CHECK(print(conclusion_of(sub)) == "[0]([0]p -> p) |- [0]p");
  CHECK(check_proof(plain(CalculusId::NCS), sub).ok);
  CHECK(sub.backedges.size() == 1);

  CyclicProof at_comp = extract_subproof(cp, {0, 0});
  CHECK(print(conclusion_of(at_comp)) == "[0]p -> p, [0]([0]p -> p) |- p");
  CHECK(check_proof(plain(CalculusId::NCS), at_comp).ok);
  CHECK(at_comp.backedges == std::map<Path, Path>{{{0, 0}, {}}});
}

TEST_CASE("extraction below a companion unfolds the outer cycle") {
  CyclicProof cp = lob_example();
  CyclicProof inside = extract_subproof(cp, {0, 0, 0});
  CHECK(print(conclusion_of(inside)) == "[0]([0]p -> p) |- p, [0]p");
  auto r = check_proof(plain(CalculusId::NCS), inside);
  INFO(r.reason);
  CHECK(r.ok);
  // the rep reappears one unfolding deeper
  CHECK(inside.backedges.size() == 1);
  CHECK(proof_size(inside.root) > 3);
}

TEST_CASE("identity proofs across calculi, formulas and modes") {
  std::vector<Calculus> calculi = {plain(CalculusId::GCS), plain(CalculusId::GCSM),
                                   plain(CalculusId::NCS), plain(CalculusId::NCSM)};
  auto forms = enumerate_formulas({"p", "q"}, 4);
  for (const auto& c : calculi)
    for (const auto& f : forms) {
      ProofPtr pr = identity_proof(c, f);
      CHECK(pr->node.conclusion == Sequent{ms({f}), ms({f}), Mode::Plain});
      auto r = check_proof(c, make_proof(pr));
      INFO(calculus_name(c.id) << " identity for " << print(f) << ": " << r.reason);
      REQUIRE(r.ok);
    }
  for (CalculusId id : {CalculusId::GER, CalculusId::NER})
    for (Mode m : {Mode::ER0, Mode::ER1})
      for (const auto& f : forms) {
        ProofPtr pr = identity_proof(plain(id), f, ms(), ms(), m);
        CHECK(pr->node.conclusion == Sequent{ms({f}), ms({f}), m});
        auto r = check_proof(plain(id), make_proof(pr));
        INFO(calculus_name(id) << " identity for " << print(f) << ": " << r.reason);
        REQUIRE(r.ok);
      }
}

TEST_CASE("identity proofs carry passenger context") {
  Multiset restL = ms({parse("r"), parse("[1]r")});
  Multiset restR = ms({parse("bot")});
  Formula f = parse("[0](p -> [1]q)");
  ProofPtr pr = identity_proof(plain(CalculusId::GCSM), f, restL, restR);
  CHECK(pr->node.conclusion ==
        Sequent{msops::sum(restL, {f}), msops::sum(restR, {f}), Mode::Plain});
  CHECK(check_proof(plain(CalculusId::GCSM), make_proof(pr)).ok);
  CHECK_THROWS_AS(identity_proof(plain(CalculusId::TplCS), f), shape_error);
}

TEST_CASE("random identity proofs stay valid", "[property]") {
  Rng rng(59);
  std::vector<Calculus> calculi = {plain(CalculusId::GCS), plain(CalculusId::GCSM),
                                   plain(CalculusId::GER), plain(CalculusId::NCS),
                                   plain(CalculusId::NCSM), plain(CalculusId::NER)};
  for (int iter = 0; iter < 120; ++iter) {
    const Calculus& c = calculi[iter % calculi.size()];
    Mode m = Mode::Plain;
    if (er_family(c.id)) m = rng.flip() ? Mode::ER1 : Mode::ER0;
    Formula f = random_formula(rng, {"p", "q", "r"}, 6);
    Multiset rl = random_multiset(rng, {"p", "q", "r"}, 3, 2);
    Multiset rr = random_multiset(rng, {"p", "q", "r"}, 3, 2);
    ProofPtr pr = identity_proof(c, f, rl, rr, m);
    auto r = check_proof(c, make_proof(pr));
    INFO(calculus_name(c.id) << " " << print(f) << ": " << r.reason);
    REQUIRE(r.ok);
  }
}
