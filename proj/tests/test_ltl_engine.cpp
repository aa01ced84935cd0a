#include "doctest.h"

#include "hypermon/ltl_engine.hpp"
#include "testutil.hpp"

using namespace hypermon;

namespace {

FormulaId core_of(FormulaArena& ar, FormulaId f) { return desugar(ar, f); }

// EQ body over two variables: G (a[p1] <-> a[p2]).
FormulaId eq_body(FormulaArena& ar) {
  return ar.globally(ar.iff(ar.atom("a", "p1"), ar.atom("a", "p2")));
}

}  // namespace

TEST_CASE("closure: children come first and size is linear") {
  FormulaArena ar;
  FormulaId body = core_of(ar, eq_body(ar));
  Closure cl = compute_closure(ar, body);
  CHECK(cl.subformulas.back() == body);
  CHECK(cl.contains(ar.atom("a", "p1")));
  for (std::size_t i = 0; i < cl.subformulas.size(); ++i) {
    const FormulaNode& n = ar.node(cl.subformulas[i]);
    for (FormulaId kid : n.kid)
      if (kid != kNoFormula) CHECK(cl.index_of(kid) < i);
  }
}

TEST_CASE("build_gba: false has no initial state") {
  FormulaArena ar;
  GeneralizedBuchi gba = build_gba(ar, core_of(ar, ar.truth(false)));
  CHECK(gba.initial.empty());
}

TEST_CASE("build_gba: G a has a single live state requiring a") {
  FormulaArena ar;
  FormulaId ga = core_of(ar, ar.globally(ar.atom("a", "p1")));
  GeneralizedBuchi gba = build_gba(ar, ga);
  REQUIRE(gba.initial.size() == 1);
  std::vector<bool> live = gba.live_states();
  std::size_t live_count = 0;
  for (std::size_t s = 0; s < gba.states.size(); ++s)
    if (live[s]) ++live_count;
  CHECK(live_count == 1);
  std::uint32_t init = gba.initial[0];
  CHECK(live[init]);
  REQUIRE(gba.states[init].pos.size() == 1);
  CHECK(gba.states[init].pos[0].ap == "a");
}

TEST_CASE("is_satisfiable: basic verdicts with checked witnesses") {
  FormulaArena ar;
  FormulaId a = ar.atom("a", "p1");

  FormulaId contradiction = core_of(ar, ar.and_(ar.globally(a), ar.finally_(ar.not_(a))));
  CHECK_FALSE(is_satisfiable(ar, contradiction).satisfiable);

  FormulaId fa = core_of(ar, ar.finally_(a));
  SatResult r = is_satisfiable(ar, fa);
  REQUIRE(r.satisfiable);
  REQUIRE(r.witness.has_value());
  CHECK(eval_on_lasso(ar, fa, *r.witness));
}

TEST_CASE("is_satisfiable: symmetry and transitivity bodies of equality are unsat") {
  FormulaArena ar;
  // (psi(p1,p2) <-/-> psi(p2,p1)): equality is symmetric.
  FormulaId psi12 = eq_body(ar);
  FormulaId psi21 = ar.globally(ar.iff(ar.atom("a", "p2"), ar.atom("a", "p1")));
  FormulaId symm = core_of(ar, ar.not_(ar.iff(psi12, psi21)));
  CHECK_FALSE(is_satisfiable(ar, symm).satisfiable);

  // (psi(p1,p2) & psi(p2,p3)) & !psi(p1,p3): equality is transitive.
  FormulaId psi23 = ar.globally(ar.iff(ar.atom("a", "p2"), ar.atom("a", "p3")));
  FormulaId psi13 = ar.globally(ar.iff(ar.atom("a", "p1"), ar.atom("a", "p3")));
  FormulaId trans = core_of(ar, ar.and_(ar.and_(psi12, psi23), ar.not_(psi13)));
  CHECK_FALSE(is_satisfiable(ar, trans).satisfiable);
}

TEST_CASE("eval_on_lasso: base cases") {
  FormulaArena ar;
  FormulaId a = ar.atom("a", "p1");
  IndexedAtom ia{"a", TraceVariable{"p1"}};

  LassoWitness just_a{{}, {ZippedLetter({ia})}};
  CHECK(eval_on_lasso(ar, core_of(ar, ar.finally_(a)), just_a));

  LassoWitness aa{{ZippedLetter({ia})}, {ZippedLetter({ia})}};
  CHECK(eval_on_lasso(ar, core_of(ar, ar.globally(a)), aa));

  LassoWitness empty_loop{{}, {ZippedLetter{}}};
  CHECK_FALSE(eval_on_lasso(ar, core_of(ar, ar.globally(ar.finally_(a))), empty_loop));
  CHECK_THROWS(eval_on_lasso(ar, a, LassoWitness{{}, {}}));
}

TEST_CASE("every satisfiable verdict carries a checked witness") {
  testutil::Rng rng(20240907);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1", "p2"};
  FormulaArena ar;
  int sat_count = 0;
  for (int i = 0; i < 500; ++i) {
    FormulaId body = testutil::random_core_expr(ar, aps, vars, 4, rng);
    SatResult r = is_satisfiable(ar, body);
    if (r.satisfiable) {
      ++sat_count;
      REQUIRE(r.witness.has_value());
      CHECK(eval_on_lasso(ar, body, *r.witness));
    }
  }
  CHECK(sat_count > 100);
}

TEST_CASE("no body is unsatisfiable together with its negation") {
  testutil::Rng rng(20240908);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1"};
  FormulaArena ar;
  for (int i = 0; i < 500; ++i) {
    FormulaId body = testutil::random_core_expr(ar, aps, vars, 4, rng);
    bool sat = is_satisfiable(ar, body).satisfiable;
    if (!sat) CHECK(is_satisfiable(ar, desugar(ar, ar.not_(body))).satisfiable);
  }
}

TEST_CASE("build_fsm_monitor: single atom decides at the first letter") {
  FormulaArena ar;
  FormulaId a = ar.atom("a", "p1");
  MonitorFsm fsm = build_fsm_monitor(ar, a);
  CHECK(fsm.verdict(fsm.initial_state()) == FsmVerdict::Unknown);
  ZippedLetter with_a({IndexedAtom{"a", TraceVariable{"p1"}}});
  ZippedLetter without;
  CHECK(fsm.verdict(fsm.next_letter(fsm.initial_state(), with_a)) == FsmVerdict::Top);
  CHECK(fsm.verdict(fsm.next_letter(fsm.initial_state(), without)) == FsmVerdict::Bottom);
}

TEST_CASE("build_fsm_monitor: G a can always reach Bottom") {
  FormulaArena ar;
  FormulaId ga = core_of(ar, ar.globally(ar.atom("a", "p1")));
  MonitorFsm fsm = build_fsm_monitor(ar, ga);
  // Reachable states all see a Bottom continuation by dropping a.
  ZippedLetter without;
  for (std::uint32_t s = 0; s < fsm.state_count(); ++s) {
    std::uint32_t t = fsm.next_letter(s, without);
    std::uint32_t t2 = fsm.next_letter(t, without);
    CHECK((fsm.verdict(t) == FsmVerdict::Bottom || fsm.verdict(t2) == FsmVerdict::Bottom));
  }
}

TEST_CASE("build_fsm_monitor: G F a stays Unknown everywhere") {
  FormulaArena ar;
  FormulaId gfa = core_of(ar, ar.globally(ar.finally_(ar.atom("a", "p1"))));
  MonitorFsm fsm = build_fsm_monitor(ar, gfa);
  for (std::uint32_t s = 0; s < fsm.state_count(); ++s)
    CHECK(fsm.verdict(s) == FsmVerdict::Unknown);
}

TEST_CASE("fsm verdict soundness on sampled continuations") {
  testutil::Rng rng(20240909);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1"};
  FormulaArena ar;
  int bottoms = 0, tops = 0;
  for (int round = 0; round < 40 && (bottoms < 5 || tops < 5); ++round) {
    FormulaId body = testutil::random_core_expr(ar, aps, vars, 3, rng);
    MonitorFsm fsm = build_fsm_monitor(ar, body);
    // Random walk to a decisive state, remembering the prefix.
    std::uint32_t state = fsm.initial_state();
    std::vector<ZippedLetter> prefix;
    for (int step = 0; step < 12 && fsm.verdict(state) == FsmVerdict::Unknown; ++step) {
      std::size_t li = testutil::pick(rng, fsm.letter_count());
      prefix.push_back(fsm.letter_at(li));
      state = fsm.next(state, li);
    }
    if (fsm.verdict(state) == FsmVerdict::Unknown) continue;
    bool expected = fsm.verdict(state) == FsmVerdict::Top;
    (expected ? tops : bottoms) += 1;
    for (int sample = 0; sample < 100; ++sample) {
      LassoWitness w;
      w.prefix = prefix;
      std::size_t extra = testutil::pick(rng, 3);
      for (std::size_t i = 0; i < extra; ++i)
        w.prefix.push_back(fsm.letter_at(testutil::pick(rng, fsm.letter_count())));
      std::size_t loop_len = 1 + testutil::pick(rng, 3);
      for (std::size_t i = 0; i < loop_len; ++i)
        w.loop.push_back(fsm.letter_at(testutil::pick(rng, fsm.letter_count())));
      CHECK(eval_on_lasso(ar, body, w) == expected);
    }
  }
  CHECK(bottoms >= 5);
  CHECK(tops >= 5);
}

TEST_CASE("gba acceptance families match their definition") {
  testutil::Rng rng(4242);
  std::vector<std::string> aps{"a", "b"};
  std::vector<std::string> vars{"p1", "p2"};
  FormulaArena ar;
  for (int i = 0; i < 50; ++i) {
    FormulaId body = testutil::random_core_expr(ar, aps, vars, 4, rng);
    GeneralizedBuchi gba = build_gba(ar, body);
    REQUIRE(gba.acceptance_families.size() == gba.until_subformulas.size());
    for (std::size_t f = 0; f < gba.until_subformulas.size(); ++f) {
      FormulaId u = gba.until_subformulas[f];
      FormulaId rhs = ar.node(u).kid[1];
      std::vector<bool> in_family(gba.states.size(), false);
      for (std::uint32_t s : gba.acceptance_families[f]) in_family[s] = true;
      for (std::uint32_t s = 0; s < gba.states.size(); ++s) {
        const auto& old = gba.states[s].old_set;
        bool has_u = std::find(old.begin(), old.end(), u) != old.end();
        bool has_rhs = std::find(old.begin(), old.end(), rhs) != old.end();
        CHECK(in_family[s] == (!has_u || has_rhs));
      }
    }
  }
}

TEST_CASE("format_lasso projects letters per variable") {
  FormulaArena ar;
  LassoWitness w;
  w.prefix.push_back(ZippedLetter({IndexedAtom{"a", TraceVariable{"p1"}}}));
  w.loop.push_back(ZippedLetter({IndexedAtom{"b", TraceVariable{"p2"}}}));
  std::string s = format_lasso(w, {TraceVariable{"p1"}, TraceVariable{"p2"}});
  CHECK(s.find("# p1") != std::string::npos);
  CHECK(s.find("prefix: a") != std::string::npos);
  CHECK(s.find("loop:   b") != std::string::npos);
}
