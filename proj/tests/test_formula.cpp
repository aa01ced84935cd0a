#include "doctest.h"

#include "hypermon/formula.hpp"
#include "testutil.hpp"

using namespace hypermon;

TEST_CASE("parse: quantifier prefix and shape") {
  QuantifiedFormula phi = parse_formula("forall p1. forall p2. G (a[p1] <-> a[p2])");
  CHECK(phi.shape() == PrefixShape::ForallOnly);
  CHECK(phi.arity() == 2);
  CHECK(phi.ap_set == std::vector<std::string>{"a"});
  const FormulaNode& root = phi.arena->node(phi.body);
  CHECK(root.op == Op::Globally);
  CHECK(phi.arena->node(root.kid[0]).op == Op::Iff);
}

TEST_CASE("parse: smallest formula") {
  QuantifiedFormula phi = parse_formula("forall p. true");
  CHECK(phi.shape() == PrefixShape::ForallOnly);
  CHECK(phi.arity() == 1);
  CHECK(phi.arena->node(phi.body).op == Op::True);
  CHECK(phi.ap_set.empty());
}

TEST_CASE("parse: unbound variable is rejected") {
  CHECK_THROWS_AS(parse_formula("forall p1. G a[p2]"), ParseError);
  try {
    parse_formula("forall p1. G a[p2]");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::UnboundVariable);
  }
}

TEST_CASE("parse: duplicate variable is rejected") {
  try {
    parse_formula("forall p. exists p. a[p]");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::DuplicateVariable);
  }
}

TEST_CASE("parse: syntax errors carry positions") {
  try {
    parse_formula("forall p.\n a[p] &");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::Syntax);
    CHECK(e.line == 2);
  }
}

TEST_CASE("parse: precedence and associativity") {
  // unary > U/W > & > | > -> > <->
  QuantifiedFormula phi = parse_formula("forall p. a[p] -> b[p] | c[p] & d[p] U e[p]");
  const FormulaArena& ar = *phi.arena;
  const FormulaNode& root = ar.node(phi.body);
  CHECK(root.op == Op::Implies);
  CHECK(ar.node(root.kid[1]).op == Op::Or);
  CHECK(ar.node(ar.node(root.kid[1]).kid[1]).op == Op::And);

  QuantifiedFormula r = parse_formula("forall p. a[p] U b[p] U c[p]");
  const FormulaNode& u = r.arena->node(r.body);
  CHECK(u.op == Op::Until);
  CHECK(r.arena->node(u.kid[1]).op == Op::Until);  // right associative
}

TEST_CASE("parse: comments and ap declaration") {
  QuantifiedFormula phi = parse_formula("#ap a b extra\n# a comment\nforall p. a[p] & b[p]\n");
  CHECK(phi.ap_set == std::vector<std::string>{"a", "b", "extra"});
  CHECK_THROWS_AS(parse_formula("#ap a\nforall p. b[p]"), ParseError);
}

TEST_CASE("parse/print round-trip on random formulas") {
  testutil::Rng rng(20240901);
  std::vector<std::string> aps{"a", "b", "c"};
  std::vector<std::string> vars{"p1", "p2"};
  for (int i = 0; i < 1000; ++i) {
    QuantifiedFormula phi;
    phi.arena = std::make_shared<FormulaArena>();
    phi.prefix = {{Quantifier::Forall, TraceVariable{"p1"}},
                  {Quantifier::Exists, TraceVariable{"p2"}}};
    phi.body = testutil::random_full_expr(*phi.arena, aps, vars, 6, rng);
    std::string text = print_formula(phi);
    QuantifiedFormula back = parse_formula(text);
    REQUIRE(back.prefix.size() == phi.prefix.size());
    CHECK(equal_exprs(*phi.arena, phi.body, *back.arena, back.body));
  }
}

TEST_CASE("desugar: bounded globally unfolds") {
  FormulaArena ar;
  FormulaId a = ar.atom("a", "p");
  FormulaId got = desugar(ar, ar.bounded_globally(2, a));
  // a & X (a & X true), conjunction by De Morgan
  FormulaId expect = desugar(ar, ar.and_(a, ar.next(ar.and_(a, ar.next(ar.truth(true))))));
  CHECK(got == expect);
  CHECK(desugar(ar, ar.bounded_globally(0, a)) == ar.truth(true));
}

TEST_CASE("desugar: weak until and finally definitions") {
  FormulaArena ar;
  FormulaId a = ar.atom("a", "p");
  FormulaId b = ar.atom("b", "p");
  FormulaId w = desugar(ar, ar.weak_until(a, b));
  FormulaId expect = ar.or_(ar.until(a, b), ar.not_(ar.until(ar.truth(true), ar.not_(a))));
  CHECK(w == expect);
  CHECK(desugar(ar, ar.finally_(a)) == ar.until(ar.truth(true), a));
}

TEST_CASE("desugar: output is core and idempotent") {
  testutil::Rng rng(7);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1", "p2"};
  FormulaArena ar;
  for (int i = 0; i < 300; ++i) {
    FormulaId f = testutil::random_full_expr(ar, aps, vars, 5, rng);
    FormulaId d = desugar(ar, f);
    CHECK(is_core(ar, d));
    CHECK(desugar(ar, d) == d);
  }
}

TEST_CASE("substitute: transposition and identity") {
  FormulaArena ar;
  FormulaId body = ar.globally(ar.iff(ar.atom("a", "p1"), ar.atom("a", "p2")));
  std::map<TraceVariable, TraceVariable> swap{{TraceVariable{"p1"}, TraceVariable{"p2"}},
                                              {TraceVariable{"p2"}, TraceVariable{"p1"}}};
  FormulaId swapped = substitute_variables(ar, body, swap);
  FormulaId expect = ar.globally(ar.iff(ar.atom("a", "p2"), ar.atom("a", "p1")));
  CHECK(swapped == expect);

  std::map<TraceVariable, TraceVariable> id{{TraceVariable{"p1"}, TraceVariable{"p1"}},
                                            {TraceVariable{"p2"}, TraceVariable{"p2"}}};
  CHECK(substitute_variables(ar, body, id) == body);
}

TEST_CASE("substitute: collapse to one variable") {
  FormulaArena ar;
  FormulaId body = ar.or_(ar.not_(ar.atom("a", "p1")), ar.atom("a", "p2"));
  std::map<TraceVariable, TraceVariable> collapse{{TraceVariable{"p1"}, TraceVariable{"p1"}},
                                                  {TraceVariable{"p2"}, TraceVariable{"p1"}}};
  FormulaId got = substitute_variables(ar, body, collapse);
  CHECK(got == ar.or_(ar.not_(ar.atom("a", "p1")), ar.atom("a", "p1")));
}

TEST_CASE("substitute: unmapped variable throws") {
  FormulaArena ar;
  FormulaId body = ar.atom("a", "p1");
  CHECK_THROWS_AS(substitute_variables(ar, body, {}), UnmappedVariable);
}

TEST_CASE("substitute round-trip under a permutation and its inverse") {
  testutil::Rng rng(99);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1", "p2", "p3"};
  FormulaArena ar;
  std::map<TraceVariable, TraceVariable> sigma{{TraceVariable{"p1"}, TraceVariable{"p2"}},
                                               {TraceVariable{"p2"}, TraceVariable{"p3"}},
                                               {TraceVariable{"p3"}, TraceVariable{"p1"}}};
  std::map<TraceVariable, TraceVariable> inverse;
  for (auto& [k, v] : sigma) inverse[v] = k;
  for (int i = 0; i < 200; ++i) {
    FormulaId f = testutil::random_core_expr(ar, aps, vars, 5, rng);
    CHECK(substitute_variables(ar, substitute_variables(ar, f, sigma), inverse) == f);
  }
}
