#include <catch2/catch_amalgamated.hpp>

#include "bimodal/gen.hpp"
#include "bimodal/sequent.hpp"

using namespace bimodal;

TEST_CASE("sequent parsing and printing") {
  Sequent s = parse_sequent("p, q -> r |- [0]p");
  CHECK(s.mode == Mode::Plain);
  CHECK(s.left.size() == 2);
  CHECK(s.right.size() == 1);
  CHECK(print(s) == "p, q -> r |- [0]p");

  CHECK(parse_sequent("|- p").left.empty());
  CHECK(parse_sequent("p |-").right.empty());
  CHECK(parse_sequent("|-").left.empty());
  CHECK(parse_sequent("p |-0 q").mode == Mode::ER0);
  CHECK(parse_sequent("p |-1 q").mode == Mode::ER1);
  CHECK(print(parse_sequent("p |-1 q")) == "p |-1 q");
  CHECK(print(parse_sequent("|-0")) == "|-0");
  CHECK_THROWS_AS(parse_sequent("p |- q |- r"), parse_error);
  CHECK_THROWS_AS(parse_sequent("p, |- q"), parse_error);
  // '|' inside formulas does not clash with the turnstile
  Sequent d = parse_sequent("p | q |- r");
  CHECK(d.left.size() == 1);
  CHECK(d.left[0] == parse("p | q"));
}

TEST_CASE("multisets are canonically sorted with multiplicity") {
  Sequent s = make_sequent({parse("q"), parse("p"), parse("q")}, {});
  CHECK(s.left == ms({parse("p"), parse("q"), parse("q")}));
  CHECK(msops::count(s.left, parse("q")) == 2);
  Sequent t = parse_sequent("q, p, q |-");
  CHECK(s == t);
}

TEST_CASE("multiset operations") {
  Multiset a = ms({parse("p"), parse("p"), parse("q")});
  Multiset b = ms({parse("p")});
  CHECK(msops::sum(a, b) == ms({parse("p"), parse("p"), parse("p"), parse("q")}));
  CHECK(msops::diff(a, b) == ms({parse("p"), parse("q")}));
  CHECK_THROWS_AS(msops::diff(b, a), shape_error);
  CHECK(msops::subset(b, a));
  CHECK(!msops::subset(a, b));
  CHECK(msops::dedup(a) == ms({parse("p"), parse("q")}));
}

TEST_CASE("dedup on sequents") {
  Sequent s = parse_sequent("p, p, q |- r, r");
  Sequent d = dedup(s);
  CHECK(d.left == ms({parse("p"), parse("q")}));
  CHECK(d.right == ms({parse("r")}));
  CHECK(d.mode == s.mode);
}

TEST_CASE("box prefixing") {
  Multiset m = ms({parse("p"), parse("q")});
  CHECK(box_prefix(0, m) == ms({parse("[0]p"), parse("[0]q")}));
  CHECK(dot_box(1, m) ==
        ms({parse("p"), parse("q"), parse("[1]p"), parse("[1]q")}));
  CHECK(box_prefix(0, {}).empty());
}

TEST_CASE("flat readings") {
  // empty conjunction is top, empty disjunction is bot
  CHECK(flat(parse_sequent("|-")) == parse("top -> bot"));
  CHECK(flat(parse_sequent("p |- q")) == parse("p -> q"));
  // canonical order: variables before boxes; fold is right-nested
  CHECK(flat(parse_sequent("[0]q, p |- ")) == parse("p & [0]q -> bot"));
  CHECK(flat(parse_sequent("|- q, p, r")) == parse("top -> p | (q | r)"));
  CHECK(flat(parse_sequent("p, q |- r")) == parse("p & q -> r"));
  // modes: ER0 is the plain reading, ER1 adds an outer [1]
  CHECK(flat(parse_sequent("p |-0 q")) == parse("p -> q"));
  CHECK(flat(parse_sequent("p |-1 q")) == parse("[1](p -> q)"));
  // duplicates are kept
  CHECK(flat(parse_sequent("p, p |- ")) == parse("p & p -> bot"));
}

TEST_CASE("sequent subformulas") {
  auto sub = subformulas(parse_sequent("[0]p |- p -> q"));
  std::set<Formula> s(sub.begin(), sub.end());
  CHECK(sub.size() == 4);
  CHECK(s.count(parse("[0]p")));
  CHECK(s.count(parse("p -> q")));
  CHECK(s.count(parse("p")));
  CHECK(s.count(parse("q")));
}

TEST_CASE("sequent order is total and consistent") {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    Sequent a = random_sequent(rng, {"p", "q"}, 4, 3, Mode::Plain);
    Sequent b = random_sequent(rng, {"p", "q"}, 4, 3, Mode::Plain);
    CHECK(((a < b) || (b < a) || (a == b)));
    CHECK(!(a < a));
  }
}
