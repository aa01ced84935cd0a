#include <sstream>

#include "doctest.h"

#include "hypermon/trace.hpp"
#include "testutil.hpp"

using namespace hypermon;

TEST_CASE("subsequence follows the finite-trace rule") {
  TracePtr t = testutil::make_trace(0, {Step{"a"}, Step{}, Step{"b"}});
  Trace mid = subsequence(*t, 1, 9);
  CHECK(mid.steps == std::vector<Step>{Step{}, Step{"b"}});

  TracePtr one = testutil::make_trace(1, {Step{"a"}});
  CHECK(subsequence(*one, 5, 7).steps.empty());

  Trace eps;
  CHECK(subsequence(eps, 0, 0).steps.empty());
}

TEST_CASE("subsequence of the whole trace is the trace") {
  testutil::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    TracePtr t = testutil::random_trace(0, {"a", "b"}, 1 + testutil::pick(rng, 6), rng);
    CHECK(subsequence(*t, 0, t->length() - 1).steps == t->steps);
  }
}

TEST_CASE("zip_tuple: length is the minimum and atoms are tagged") {
  std::vector<TraceVariable> vars{TraceVariable{"pi"}, TraceVariable{"pi'"}};
  TraceTuple n{{testutil::make_trace(0, {Step{"a"}, Step{"b"}}),
                testutil::make_trace(1, {Step{"c"}})}};
  ZippedWord w = zip_tuple(n, vars);
  REQUIRE(w.length() == 1);
  CHECK(w.letters[0].contains("a", "pi"));
  CHECK(w.letters[0].contains("c", "pi'"));
  CHECK_FALSE(w.letters[0].contains("b", "pi"));

  TraceTuple empty_side{{testutil::make_trace(0, {}), testutil::make_trace(1, {Step{"a"}})}};
  CHECK(zip_tuple(empty_side, vars).length() == 0);

  TraceTuple same{{testutil::make_trace(0, {Step{"a"}}), testutil::make_trace(1, {Step{"a"}})}};
  ZippedWord w2 = zip_tuple(same, vars);
  CHECK(w2.letters[0].contains("a", "pi"));
  CHECK(w2.letters[0].contains("a", "pi'"));

  CHECK_THROWS_AS(zip_tuple(same, {TraceVariable{"pi"}}), ArityMismatch);
}

TEST_CASE("project recovers per-variable steps") {
  ZippedLetter letter({IndexedAtom{"a", TraceVariable{"pi"}}, IndexedAtom{"c", TraceVariable{"pi'"}}});
  CHECK(project(letter, TraceVariable{"pi"}) == Step{"a"});
  CHECK(project(ZippedLetter{}, TraceVariable{"pi"}) == Step{});
  ZippedLetter two({IndexedAtom{"a", TraceVariable{"pi"}}, IndexedAtom{"b", TraceVariable{"pi"}}});
  CHECK(project(two, TraceVariable{"pi'"}) == Step{});
}

TEST_CASE("zip then project recovers truncated inputs") {
  testutil::Rng rng(42);
  std::vector<TraceVariable> vars{TraceVariable{"p1"}, TraceVariable{"p2"},
                                  TraceVariable{"p3"}};
  for (int round = 0; round < 1000; ++round) {
    TraceTuple n;
    for (std::uint64_t j = 0; j < 3; ++j)
      n.entries.push_back(testutil::random_trace(j, {"a", "b"}, testutil::pick(rng, 6), rng));
    ZippedWord w = zip_tuple(n, vars);
    REQUIRE(w.length() == n.min_length());
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < w.length(); ++i)
        CHECK(project(w.letters[i], vars[j]) == n.entries[j]->steps[i]);
  }
}

TEST_CASE("trace files parse and print") {
  std::string text = "# two traces\na;a,b;-\nb;-\n\n";
  std::vector<TracePtr> traces = parse_trace_text(text);
  REQUIRE(traces.size() == 2);
  CHECK(traces[0]->id == 0);
  CHECK(traces[0]->steps == std::vector<Step>{Step{"a"}, Step{"a", "b"}, Step{}});
  CHECK(traces[1]->steps == std::vector<Step>{Step{"b"}, Step{}});
  CHECK(format_trace(*traces[0]) == "a;a,b;-");
  // Round-trip through the printer.
  std::vector<TracePtr> again = parse_trace_text(format_trace(*traces[0]) + "\n");
  CHECK(again[0]->steps == traces[0]->steps);
}

TEST_CASE("stream protocol lines") {
  auto begin = parse_stream_line("#trace t7");
  REQUIRE(begin.has_value());
  CHECK(begin->kind == StreamEvent::Kind::BeginTrace);
  CHECK(begin->name == "t7");

  auto step = parse_stream_line("a,b");
  REQUIRE(step.has_value());
  CHECK(step->kind == StreamEvent::Kind::Step);
  CHECK(step->step == Step{"a", "b"});

  auto empty = parse_stream_line("-");
  REQUIRE(empty.has_value());
  CHECK(empty->step == Step{});

  auto end = parse_stream_line("#end");
  REQUIRE(end.has_value());
  CHECK(end->kind == StreamEvent::Kind::End);

  auto par = parse_stream_line("#step a,b|c|-");
  REQUIRE(par.has_value());
  CHECK(par->kind == StreamEvent::Kind::ParallelStep);
  REQUIRE(par->parallel.size() == 3);
  CHECK(par->parallel[0] == Step{"a", "b"});
  CHECK(par->parallel[2] == Step{});

  CHECK_FALSE(parse_stream_line("# just a comment").has_value());
  CHECK_FALSE(parse_stream_line("   ").has_value());
}
