#include "doctest.h"

#include "hypermon/monitorability.hpp"
#include "testutil.hpp"

using namespace hypermon;

TEST_CASE("G F a is not monitorable: no bad prefix exists") {
  QuantifiedFormula phi = parse_formula("forall p. G F a[p]");
  MonitorabilityReport r = check_monitorable_unbounded(phi);
  CHECK(r.result == MonitorabilityResult::NotMonitorable);
  CHECK(r.reason == MonitorabilityReason::DeadRegion);
}

TEST_CASE("equality is monitorable: a disagreement is always reachable") {
  QuantifiedFormula phi = parse_formula("forall p1. forall p2. G (a[p1] <-> a[p2])");
  MonitorabilityReport r = check_monitorable_unbounded(phi);
  CHECK(r.result == MonitorabilityResult::Monitorable);
  CHECK(r.reason == MonitorabilityReason::BadReachableEverywhere);
}

TEST_CASE("a valid body is monitorable through the carve-out") {
  QuantifiedFormula phi = parse_formula("forall p. true");
  MonitorabilityReport r = check_monitorable_unbounded(phi);
  CHECK(r.result == MonitorabilityResult::Monitorable);
  CHECK(r.reason == MonitorabilityReason::BodyValid);
}

TEST_CASE("existential F a is monitorable via good prefixes") {
  QuantifiedFormula phi = parse_formula("exists p. F a[p]");
  MonitorabilityReport r = check_monitorable_unbounded(phi);
  CHECK(r.result == MonitorabilityResult::Monitorable);
  CHECK(r.reason == MonitorabilityReason::GoodReachableEverywhere);
}

TEST_CASE("classify_model_support: alternating and bounded models") {
  QuantifiedFormula fe = parse_formula("forall p1. exists p2. G (a[p1] -> b[p2])");
  MonitorabilityReport r1 = classify_model_support(fe, InputModel::unbounded());
  CHECK(r1.result == MonitorabilityResult::NotMonitorable);
  CHECK(r1.reason == MonitorabilityReason::Alternating);

  QuantifiedFormula ef = parse_formula("exists p1. forall p2. G (a[p1] -> b[p2])");
  MonitorabilityReport r2 = classify_model_support(ef, InputModel::unbounded());
  CHECK(r2.result == MonitorabilityResult::Unsupported);
  CHECK(r2.reason == MonitorabilityReason::Alternating);

  QuantifiedFormula eq = parse_formula("forall p1. forall p2. G (a[p1] <-> a[p2])");
  MonitorabilityReport r3 = classify_model_support(eq, InputModel::bounded(5));
  CHECK(r3.result == MonitorabilityResult::Unsupported);
  CHECK(r3.reason == MonitorabilityReason::ModelUnsupported);
  MonitorabilityReport r4 = classify_model_support(eq, InputModel::parallel(2));
  CHECK(r4.result == MonitorabilityResult::Unsupported);

  MonitorabilityReport r5 = classify_model_support(eq, InputModel::unbounded());
  CHECK(r5.result == MonitorabilityResult::Monitorable);
}

TEST_CASE("report is stable under desugaring-equivalent rewrites") {
  testutil::Rng rng(20240910);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1"};
  for (int i = 0; i < 100; ++i) {
    QuantifiedFormula g;
    g.arena = std::make_shared<FormulaArena>();
    g.prefix = {{Quantifier::Forall, TraceVariable{"p1"}}};
    FormulaId inner = testutil::random_core_expr(*g.arena, aps, vars, 3, rng);
    g.body = g.arena->globally(inner);
    g.ap_set = aps;

    QuantifiedFormula nfn;
    nfn.arena = g.arena;
    nfn.prefix = g.prefix;
    nfn.body = g.arena->not_(g.arena->finally_(g.arena->not_(inner)));  // !F! form of G
    nfn.ap_set = aps;

    MonitorabilityReport r1 = check_monitorable_unbounded(g);
    MonitorabilityReport r2 = check_monitorable_unbounded(nfn);
    CHECK(r1.result == r2.result);
  }
}

TEST_CASE("monitorable forall verdicts admit explicit bad extensions") {
  // Direct confirmation of the forall-u exists-v characterization by
  // breadth-first search on the FSM.
  testutil::Rng rng(20240911);
  std::vector<std::string> formulas = {
      "forall p1. forall p2. G (a[p1] <-> a[p2])",
      "forall p. G a[p]",
      "forall p. G (a[p] -> X b[p])",
  };
  for (const std::string& text : formulas) {
    QuantifiedFormula phi = parse_formula(text);
    MonitorabilityReport rep = check_monitorable_unbounded(phi);
    REQUIRE(rep.result == MonitorabilityResult::Monitorable);
    FormulaArena& ar = *phi.arena;
    MonitorFsm fsm = build_fsm_monitor(ar, desugar(ar, phi.body));
    for (int sample = 0; sample < 50; ++sample) {
      std::uint32_t state = fsm.initial_state();
      std::size_t len = testutil::pick(rng, 8);
      for (std::size_t i = 0; i < len; ++i)
        state = fsm.next(state, testutil::pick(rng, fsm.letter_count()));
      // Breadth-first search for a Bottom continuation.
      std::vector<bool> seen(fsm.state_count(), false);
      std::vector<std::uint32_t> queue{state};
      seen[state] = true;
      bool found = false;
      for (std::size_t qi = 0; qi < queue.size() && !found; ++qi) {
        if (fsm.verdict(queue[qi]) == FsmVerdict::Bottom) {
          found = true;
          break;
        }
        for (std::size_t l = 0; l < fsm.letter_count(); ++l) {
          std::uint32_t t = fsm.next(queue[qi], l);
          if (!seen[t]) {
            seen[t] = true;
            queue.push_back(t);
          }
        }
      }
      CHECK(found);
    }
  }
}
