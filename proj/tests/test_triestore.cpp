#include "doctest.h"

#include "hypermon/gen.hpp"
#include "hypermon/triestore.hpp"
#include "testutil.hpp"

using namespace hypermon;

namespace {

const char* kEq = "forall p1. forall p2. G (a[p1] <-> a[p2])";

TracePtr tr(std::uint64_t id, std::vector<Step> steps) {
  return testutil::make_trace(id, std::move(steps));
}

}  // namespace

TEST_CASE("add_value shares prefixes and branches on divergence") {
  Trie trie;
  Trie::NodeId x = trie.add_value(Trie::kRoot, Step{"a"});
  Trie::NodeId y = trie.add_value(Trie::kRoot, Step{"a"});
  CHECK(x == y);
  Trie::NodeId z = trie.add_value(Trie::kRoot, Step{"b"});
  CHECK(z != x);
  CHECK(trie.children(Trie::kRoot).size() == 2);

  Trie::NodeId deep = trie.add_value(x, Step{"a"});
  CHECK(trie.depth(deep) == 2);
  CHECK(trie.rooted_sequence(deep) == std::vector<Step>{Step{"a"}, Step{"a"}});
}

TEST_CASE("rooted_sequence spells the path from the root") {
  Trie trie;
  CHECK(trie.rooted_sequence(Trie::kRoot).empty());
  Trie::NodeId n = trie.add_value(Trie::kRoot, Step{"a"});
  CHECK(trie.rooted_sequence(n) == std::vector<Step>{Step{"a"}});
  // Defining recurrence: rooted_sequence(add_value(x, s)) == rooted_sequence(x) + s.
  Trie::NodeId m = trie.add_value(n, Step{"b", "a"});
  std::vector<Step> expect = trie.rooted_sequence(n);
  expect.push_back(Step{"a", "b"});
  CHECK(trie.rooted_sequence(m) == expect);
}

TEST_CASE("trie parallel: identical streams keep one live instantiation") {
  QuantifiedFormula phi = parse_formula(kEq);
  TracePtr s1 = tr(0, {Step{"a"}, Step{"a"}, Step{}});
  TracePtr s2 = tr(1, {Step{"a"}, Step{"a"}, Step{}});
  EngineOptions opts;
  std::vector<std::uint64_t> live;
  opts.on_step = [&](const SessionStats& s) { live.push_back(s.instances_live); };
  Verdict v = run_trie_parallel(phi, {s1, s2}, opts);
  CHECK(v.kind == VerdictKind::Satisfied);
  for (std::uint64_t l : live) CHECK(l == 1);
}

TEST_CASE("trie parallel: fork happens exactly at the divergence") {
  // on/off style: shared prefix then one divergent position.
  QuantifiedFormula phi = parse_formula("forall p1. forall p2. G (on[p1] | off[p1])");
  TracePtr s1 = tr(0, {Step{"on"}, Step{"on"}});
  TracePtr s2 = tr(1, {Step{"on"}, Step{"off"}});
  EngineOptions opts;
  std::vector<std::uint64_t> live;
  opts.on_step = [&](const SessionStats& s) { live.push_back(s.instances_live); };
  Verdict v = run_trie_parallel(phi, {s1, s2}, opts);
  CHECK(v.kind == VerdictKind::Satisfied);
  REQUIRE(live.size() == 2);
  CHECK(live[0] == 1);  // shared prefix: one instantiation
  CHECK(live[1] == 4);  // fork into all child combinations
}

TEST_CASE("trie parallel: witness equals the violating traces") {
  QuantifiedFormula phi = parse_formula(kEq);
  TracePtr s1 = tr(0, {Step{"a"}, Step{"a"}});
  TracePtr s2 = tr(1, {Step{"a"}, Step{}});
  Verdict naive = run_parallel_online(phi, {s1, s2});
  Verdict trie = run_trie_parallel(phi, {s1, s2});
  REQUIRE(naive.kind == VerdictKind::Violation);
  REQUIRE(trie.kind == VerdictKind::Violation);
  REQUIRE(trie.witness.has_value());
  // Reconstructed steps equal the consumed prefixes of the two streams.
  std::vector<std::vector<Step>> got;
  for (const TracePtr& t : trie.witness->entries) got.push_back(t->steps);
  std::sort(got.begin(), got.end());
  std::vector<std::vector<Step>> expect{{Step{"a"}, Step{"a"}}, {Step{"a"}, Step{}}};
  std::sort(expect.begin(), expect.end());
  CHECK(got == expect);
}

TEST_CASE("trie sequential: identical traces store one chain") {
  QuantifiedFormula phi = parse_formula(kEq);
  EngineOptions opts;
  TrieSequentialSession session(phi, opts);
  const std::size_t len = 5;
  for (int i = 0; i < 8; ++i) {
    session.begin_trace();
    for (std::size_t k = 0; k < len; ++k) session.push_step(Step{"a"});
    session.end_trace();
  }
  CHECK(session.finish().kind == VerdictKind::Satisfied);
  // One shared chain, not 8 copies.
  CHECK(session.trie().node_count() - 1 == len);
}

TEST_CASE("trie sequential: divergent trace forks at its depth") {
  QuantifiedFormula phi = parse_formula("forall p1. forall p2. F a[p1] | G b[p2]");
  EngineOptions opts;
  TrieSequentialSession session(phi, opts);
  auto feed = [&](std::vector<Step> steps) {
    session.begin_trace();
    for (const Step& s : steps) session.push_step(s);
    session.end_trace();
  };
  feed({Step{"a"}, Step{"a"}, Step{"a"}});
  feed({Step{"a"}, Step{"b"}, Step{"a"}});  // diverges at depth 2
  session.finish();
  CHECK(session.trie().node_count() - 1 == 5);  // 3 + 2 new nodes after the fork
}

TEST_CASE("trie sequential: single trace matches the reflexive self check") {
  QuantifiedFormula phi = parse_formula(kEq);
  TracePtr t = tr(0, {Step{"a"}, Step{}});
  Verdict naive = run_online_sequential(phi, {t});
  Verdict trie = run_trie_sequential(phi, {t});
  CHECK(naive.kind == trie.kind);
  CHECK(trie.kind == VerdictKind::Satisfied);
}

TEST_CASE("trie sequential equals naive sequential on perturbed corpora") {
  testutil::Rng seed_rng(20240923);
  int agreements = 0;
  for (int run = 0; run < 40; ++run) {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::Perturbed;
    spec.count = 12;
    spec.length = 10;
    spec.seed = seed_rng();
    spec.aps = {"a"};
    spec.flip_prob = 0.05;
    std::vector<TracePtr> traces = generate(spec);
    QuantifiedFormula phi = parse_formula(kEq);
    EngineOptions opts;
    opts.keep_going = true;
    Verdict naive = run_online_sequential(phi, traces, opts);
    Verdict trie = run_trie_sequential(phi, traces, opts);
    CHECK(naive.kind == trie.kind);
    agreements += naive.kind == trie.kind;
  }
  CHECK(agreements == 40);
}

TEST_CASE("trie sequential with random universal bodies agrees with naive") {
  testutil::Rng rng(20240924);
  for (int round = 0; round < 120; ++round) {
    QuantifiedFormula phi = testutil::random_universal_formula(2, {"a"}, 3, rng);
    TraceSet traces;
    std::size_t k = 1 + testutil::pick(rng, 4);
    for (std::uint64_t i = 0; i < k; ++i)
      traces.push_back(testutil::random_trace(i, {"a"}, testutil::pick(rng, 4), rng));
    EngineOptions opts;
    opts.keep_going = true;
    Verdict naive = run_online_sequential(phi, traces, opts);
    Verdict trie = run_trie_sequential(phi, traces, opts);
    CHECK(naive.kind == trie.kind);
  }
}

TEST_CASE("trie instances never exceed the naive live tuples") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Perturbed;
  spec.count = 20;
  spec.length = 12;
  spec.seed = 99;
  spec.aps = {"a"};
  spec.flip_prob = 0.03;
  std::vector<TracePtr> traces = generate(spec);
  QuantifiedFormula phi = parse_formula(kEq);

  std::vector<std::uint64_t> naive_live, trie_live;
  EngineOptions naive_opts;
  naive_opts.keep_going = true;
  naive_opts.on_step = [&](const SessionStats& s) { naive_live.push_back(s.instances_live); };
  run_online_sequential(phi, traces, naive_opts);

  EngineOptions trie_opts;
  trie_opts.keep_going = true;
  trie_opts.on_step = [&](const SessionStats& s) { trie_live.push_back(s.instances_live); };
  run_trie_sequential(phi, traces, trie_opts);

  REQUIRE(naive_live.size() == trie_live.size());
  for (std::size_t i = 0; i < naive_live.size(); ++i) CHECK(trie_live[i] <= naive_live[i]);
}

TEST_CASE("trie node count is bounded by total steps") {
  testutil::Rng rng(20240925);
  for (int round = 0; round < 20; ++round) {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::Perturbed;
    spec.count = 10;
    spec.length = 8;
    spec.seed = rng();
    spec.aps = {"a", "b"};
    spec.flip_prob = 0.2;
    std::vector<TracePtr> traces = generate(spec);
    QuantifiedFormula phi = parse_formula(kEq);
    EngineOptions opts;
    opts.keep_going = true;
    TrieSequentialSession session(phi, opts);
    std::size_t total_steps = 0;
    for (const TracePtr& t : traces) {
      session.begin_trace(t->name);
      for (const Step& s : t->steps) session.push_step(s);
      session.end_trace();
      total_steps += t->length();
    }
    session.finish();
    CHECK(session.trie().node_count() - 1 <= total_steps);
  }
}

TEST_CASE("trie rejects the trace-analysis combination") {
  QuantifiedFormula phi = parse_formula(kEq);
  EngineOptions opts;
  opts.trace_analysis = true;
  CHECK_THROWS(TrieSequentialSession(phi, opts));
}

TEST_CASE("trie sessions honor the spec-analysis reductions") {
  QuantifiedFormula phi = parse_formula(kEq);
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::Perturbed;
  spec.count = 10;
  spec.length = 8;
  spec.seed = 5;
  spec.aps = {"a"};
  spec.flip_prob = 0.05;
  std::vector<TracePtr> traces = generate(spec);

  EngineOptions plain;
  plain.keep_going = true;
  EngineOptions reduced;
  reduced.keep_going = true;
  reduced.spec_analysis = true;
  Verdict v1 = run_trie_sequential(phi, traces, plain);
  Verdict v2 = run_trie_sequential(phi, traces, reduced);
  CHECK(v1.kind == v2.kind);
  Verdict p1 = run_trie_parallel(phi, traces, plain);
  Verdict p2 = run_trie_parallel(phi, traces, reduced);
  CHECK(p1.kind == p2.kind);
}
