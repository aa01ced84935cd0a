#include "doctest.h"

#include "hypermon/analysis.hpp"
#include "hypermon/engine.hpp"
#include "testutil.hpp"

using namespace hypermon;

namespace {

// The specification-analysis table formulas, with 1-bit input/output
// vectors.
const char* kObsDet1 = "forall p1. forall p2. G (i[p1] <-> i[p2]) -> G (o[p1] <-> o[p2])";
const char* kObsDet2 = "forall p1. forall p2. (i[p1] <-> i[p2]) -> G (o[p1] <-> o[p2])";
const char* kObsDet3 = "forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])";
const char* kEq = "forall p1. forall p2. G (a[p1] <-> a[p2])";
const char* kConfMan =
    "forall p1. forall p2."
    " ((!pc[p1] & pc[p2]) -> X G (s[p1] -> X v[p2]))"
    " & ((pc[p1] & pc[p2]) -> X G (v[p1] <-> v[p2]))";

TracePtr tr(std::uint64_t id, std::vector<Step> steps) {
  return testutil::make_trace(id, std::move(steps));
}

}  // namespace

TEST_CASE("check_symmetry on the table formulas") {
  CHECK(check_symmetry(parse_formula(kObsDet1)));
  CHECK(check_symmetry(parse_formula(kObsDet2)));
  CHECK(check_symmetry(parse_formula(kObsDet3)));
  CHECK(check_symmetry(parse_formula(kEq)));
  CHECK_FALSE(check_symmetry(parse_formula(kConfMan)));
  // A body mentioning only one of two variables is not symmetric.
  CHECK_FALSE(check_symmetry(parse_formula("forall p1. forall p2. a[p1]")));
}

TEST_CASE("check_transitivity on the table formulas") {
  CHECK(check_transitivity(parse_formula(kEq)));
  CHECK_FALSE(check_transitivity(parse_formula(kObsDet1)));
  CHECK_FALSE(check_transitivity(parse_formula(kObsDet2)));
  CHECK_FALSE(check_transitivity(parse_formula(kObsDet3)));
  CHECK_FALSE(check_transitivity(parse_formula(kConfMan)));
  CHECK(check_transitivity(parse_formula("forall p1. forall p2. true")));
  CHECK_THROWS_AS(check_transitivity(parse_formula("forall p1. a[p1]")), UnsupportedShape);
}

TEST_CASE("check_reflexivity on the table formulas") {
  CHECK(check_reflexivity(parse_formula(kObsDet1)));
  CHECK(check_reflexivity(parse_formula(kObsDet2)));
  CHECK(check_reflexivity(parse_formula(kObsDet3)));
  CHECK(check_reflexivity(parse_formula(kEq)));
  CHECK(check_reflexivity(parse_formula("forall p1. forall p2. !a[p1] | a[p2]")));
  // A body falsifiable on the diagonal is not reflexive.
  CHECK_FALSE(check_reflexivity(parse_formula("forall p1. forall p2. G !(a[p1] <-> b[p2])")));
}

TEST_CASE("analyze_spec ties the three checks together") {
  SpecProperties eq = analyze_spec(parse_formula(kEq));
  CHECK(eq.symmetric);
  REQUIRE(eq.transitive.has_value());
  CHECK(*eq.transitive);
  CHECK(eq.reflexive);

  SpecProperties od = analyze_spec(parse_formula(kObsDet1));
  CHECK(od.symmetric);
  CHECK_FALSE(*od.transitive);
  CHECK(od.reflexive);

  // Three variables: transitivity is not applicable.
  SpecProperties tri = analyze_spec(
      parse_formula("forall p1. forall p2. forall p3. G (a[p1] <-> a[p2])"));
  CHECK_FALSE(tri.transitive.has_value());
}

TEST_CASE("symmetry soundness: accepted tuples stay accepted under permutation") {
  testutil::Rng rng(20240912);
  std::vector<std::string> aps{"a", "b"};
  int symmetric_found = 0;
  for (int round = 0; round < 60; ++round) {
    QuantifiedFormula phi = testutil::random_universal_formula(2, aps, 3, rng);
    if (!check_symmetry(phi)) continue;
    ++symmetric_found;
    MonitorTemplate tpl = MonitorTemplate::build_for(phi);
    for (int i = 0; i < 10; ++i) {
      TraceTuple n{{testutil::random_trace(0, aps, testutil::pick(rng, 4), rng),
                    testutil::random_trace(1, aps, testutil::pick(rng, 4), rng)}};
      TraceTuple perm{{n.entries[1], n.entries[0]}};
      CHECK(tpl.accepts_tuple(n) == tpl.accepts_tuple(perm));
    }
  }
  CHECK(symmetric_found >= 5);
}

TEST_CASE("transitivity soundness on accepted chains") {
  QuantifiedFormula phi = parse_formula(kEq);
  REQUIRE(check_transitivity(phi));
  MonitorTemplate tpl = MonitorTemplate::build_for(phi);
  testutil::Rng rng(20240913);
  for (int i = 0; i < 200; ++i) {
    TracePtr t1 = testutil::random_trace(0, {"a"}, 3, rng);
    TracePtr t2 = testutil::random_trace(1, {"a"}, 3, rng);
    TracePtr t3 = testutil::random_trace(2, {"a"}, 3, rng);
    if (tpl.accepts_tuple(TraceTuple{{t1, t2}}) && tpl.accepts_tuple(TraceTuple{{t2, t3}}))
      CHECK(tpl.accepts_tuple(TraceTuple{{t1, t3}}));
  }
}

TEST_CASE("reflexivity soundness on the diagonal") {
  QuantifiedFormula phi = parse_formula(kObsDet1);
  REQUIRE(check_reflexivity(phi));
  MonitorTemplate tpl = MonitorTemplate::build_for(phi);
  testutil::Rng rng(20240914);
  for (int i = 0; i < 100; ++i) {
    TracePtr t = testutil::random_trace(0, {"i", "o"}, testutil::pick(rng, 5), rng);
    CHECK(tpl.accepts_tuple(TraceTuple{{t, t}}));
  }
}

TEST_CASE("dominance: paper example for one alternation") {
  QuantifiedFormula fe = parse_formula("forall p1. exists p2. G (a[p1] -> b[p2])");
  MonitorTemplate tpl = MonitorTemplate::build_for(fe);
  TracePtr aa = tr(0, {Step{"a"}, Step{"a"}});
  TracePtr a0 = tr(1, {Step{"a"}, Step{}});
  TracePtr bb = tr(2, {Step{"b"}, Step{"b"}});
  TracePtr b0 = tr(3, {Step{"b"}, Step{}});
  CHECK(dominates(fe, tpl, aa, a0));
  CHECK(dominates(fe, tpl, bb, b0));
  CHECK_FALSE(dominates(fe, tpl, a0, aa));

  QuantifiedFormula ef = parse_formula("exists p1. forall p2. G (a[p1] -> b[p2])");
  MonitorTemplate tpl2 = MonitorTemplate::build_for(ef);
  CHECK(dominates(ef, tpl2, a0, aa));
  CHECK(dominates(ef, tpl2, b0, bb));
  CHECK_FALSE(dominates(ef, tpl2, aa, a0));
}

TEST_CASE("dominance: conference trace subsumption") {
  QuantifiedFormula phi = parse_formula(kConfMan);
  MonitorTemplate tpl = MonitorTemplate::build_for(phi);
  TracePtr t2 = tr(0, {Step{}, Step{"s"}, Step{}, Step{}, Step{}});
  TracePtr t3 = tr(1, {Step{}, Step{"s"}, Step{"s"}, Step{}, Step{}});
  CHECK(dominates(phi, tpl, t3, t2));
  CHECK_FALSE(dominates(phi, tpl, t2, t3));
}

TEST_CASE("minimize_insert follows the two-loop order") {
  QuantifiedFormula phi = parse_formula(kConfMan);
  MonitorTemplate tpl = MonitorTemplate::build_for(phi);
  TracePtr t2 = tr(0, {Step{}, Step{"s"}, Step{}, Step{}, Step{}});
  TracePtr t3 = tr(1, {Step{}, Step{"s"}, Step{"s"}, Step{}, Step{}});

  std::vector<TracePtr> stored{t3};
  MinimizeResult r1 = minimize_insert(stored, t2, phi, tpl);
  CHECK_FALSE(r1.inserted);
  CHECK(r1.pruned == 0);
  CHECK(stored == std::vector<TracePtr>{t3});

  std::vector<TracePtr> stored2{t2};
  MinimizeResult r2 = minimize_insert(stored2, t3, phi, tpl);
  CHECK(r2.inserted);
  CHECK(r2.pruned == 1);
  REQUIRE(stored2.size() == 1);
  CHECK(stored2[0] == t3);

  std::vector<TracePtr> empty;
  MinimizeResult r3 = minimize_insert(empty, t2, phi, tpl);
  CHECK(r3.inserted);
  CHECK(r3.pruned == 0);
  CHECK(empty.size() == 1);
}

TEST_CASE("reduced_tuple_enumeration counts") {
  TracePtr s1 = tr(0, {Step{"a"}});
  TracePtr s2 = tr(1, {Step{}});
  TracePtr s3 = tr(2, {Step{"a"}, Step{"a"}});
  TracePtr fresh = tr(3, {Step{"a"}});
  TraceSet stored{s1, s2, s3};

  SpecProperties none;
  CHECK(reduced_tuple_enumeration(stored, fresh, none, 2, std::nullopt).size() == 7);

  SpecProperties sym_refl;
  sym_refl.symmetric = true;
  sym_refl.reflexive = true;
  CHECK(reduced_tuple_enumeration(stored, fresh, sym_refl, 2, std::nullopt).size() == 3);

  SpecProperties trans = sym_refl;
  trans.transitive = true;
  auto t = reduced_tuple_enumeration(stored, fresh, trans, 2, s1);
  REQUIRE(t.size() == 1);
  CHECK(t[0].entries[0] == s1);
  CHECK(t[0].entries[1] == fresh);

  // Without a reference there is nothing to pair against.
  CHECK(reduced_tuple_enumeration({}, fresh, trans, 2, std::nullopt).empty());
}

TEST_CASE("dominance implies brute-force redundancy on a tiny universe") {
  // Universe: every trace over AP={a} of length <= 2, including epsilon.
  std::vector<TracePtr> universe;
  universe.push_back(tr(0, {}));
  universe.push_back(tr(1, {Step{}}));
  universe.push_back(tr(2, {Step{"a"}}));
  universe.push_back(tr(3, {Step{}, Step{}}));
  universe.push_back(tr(4, {Step{}, Step{"a"}}));
  universe.push_back(tr(5, {Step{"a"}, Step{}}));
  universe.push_back(tr(6, {Step{"a"}, Step{"a"}}));

  testutil::Rng rng(20240915);
  int unsound = 0;
  for (int round = 0; round < 5; ++round) {
    QuantifiedFormula phi = testutil::random_universal_formula(2, {"a"}, 4, rng);
    MonitorTemplate tpl = MonitorTemplate::build_for(phi);
    auto hyper_verdict = [&](const std::vector<TracePtr>& set) {
      for (const TracePtr& x : set)
        for (const TracePtr& y : set)
          if (!tpl.accepts_tuple(TraceTuple{{x, y}})) return false;
      return true;
    };
    for (const TracePtr& t : universe) {
      for (const TracePtr& tp : universe) {
        bool dom = dominates(phi, tpl, t, tp);
        if (!dom) continue;  // the converse is not a theorem, see below
        // Pruning tp must never change a verdict over supersets of {t}.
        std::vector<TracePtr> others;
        for (const TracePtr& u : universe)
          if (u != t) others.push_back(u);
        for (std::uint64_t mask = 0; mask < (1ull << others.size()); ++mask) {
          std::vector<TracePtr> base{t};
          for (std::size_t i = 0; i < others.size(); ++i)
            if ((mask >> i) & 1) base.push_back(others[i]);
          std::vector<TracePtr> with = base;
          with.push_back(tp);
          if (hyper_verdict(base) != hyper_verdict(with)) ++unsound;
        }
      }
    }
  }
  CHECK(unsound == 0);
}

TEST_CASE("the inclusion test is strictly stronger than redundancy at degenerate horizons") {
  // For forall p1. forall p2. a[p2], the empty trace has horizon 0, so its
  // instantiated language is all words and no inclusion into the language
  // of a nonempty trace can hold. Yet adding {a} never changes a verdict
  // over any superset of {epsilon}: a separating word must lack a at its
  // first position, and such a trace already rejects its own diagonal
  // pair. The pruning direction used by minimize_insert stays sound; it is
  // only less aggressive here.
  QuantifiedFormula phi = parse_formula("forall p1. forall p2. a[p2]");
  MonitorTemplate tpl = MonitorTemplate::build_for(phi);
  TracePtr eps = tr(0, {});
  TracePtr with_a = tr(2, {Step{"a"}});
  CHECK_FALSE(dominates(phi, tpl, eps, with_a));

  std::vector<TracePtr> universe{eps,
                                 tr(1, {Step{}}),
                                 with_a,
                                 tr(3, {Step{}, Step{}}),
                                 tr(4, {Step{}, Step{"a"}}),
                                 tr(5, {Step{"a"}, Step{}}),
                                 tr(6, {Step{"a"}, Step{"a"}})};
  auto hyper_verdict = [&](const std::vector<TracePtr>& set) {
    for (const TracePtr& x : set)
      for (const TracePtr& y : set)
        if (!tpl.accepts_tuple(TraceTuple{{x, y}})) return false;
    return true;
  };
  bool redundant = true;
  std::vector<TracePtr> others(universe.begin() + 1, universe.end());
  for (std::uint64_t mask = 0; mask < (1ull << others.size()); ++mask) {
    std::vector<TracePtr> base{eps};
    for (std::size_t i = 0; i < others.size(); ++i)
      if ((mask >> i) & 1) base.push_back(others[i]);
    std::vector<TracePtr> with = base;
    with.push_back(with_a);
    if (hyper_verdict(base) != hyper_verdict(with)) redundant = false;
  }
  CHECK(redundant);
}

TEST_CASE("minimality is preserved across insertion sequences") {
  testutil::Rng rng(20240916);
  for (int round = 0; round < 3; ++round) {
    QuantifiedFormula phi = testutil::random_universal_formula(2, {"a"}, 3, rng);
    MonitorTemplate tpl = MonitorTemplate::build_for(phi);
    std::vector<TracePtr> stored;
    for (std::uint64_t i = 0; i < 30; ++i)
      minimize_insert(stored, testutil::random_trace(i, {"a"}, 1 + testutil::pick(rng, 4), rng),
                      phi, tpl);
    for (const TracePtr& x : stored)
      for (const TracePtr& y : stored)
        if (x != y) CHECK_FALSE(dominates(phi, tpl, x, y));
  }
}
