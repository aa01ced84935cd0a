// Monitoring algorithms for the parallel and sequential (bounded and
// unbounded) input models, with witness reporting and statistics.

#ifndef HYPERMON_ENGINE_HPP
#define HYPERMON_ENGINE_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hypermon/analysis.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/monitor.hpp"
#include "hypermon/trace.hpp"

namespace hypermon {

enum class VerdictKind : std::uint8_t { Satisfied, Violation, Running };

struct Verdict {
  VerdictKind kind = VerdictKind::Running;
  // Violation: for universal prefixes the rejected tuple, for mixed
  // prefixes the outermost-forall instantiation whose inner completions
  // all died, empty for existential-first prefixes.
  std::optional<TraceTuple> witness;

  static Verdict satisfied() { return {VerdictKind::Satisfied, std::nullopt}; }
  static Verdict violation(TraceTuple t) { return {VerdictKind::Violation, std::move(t)}; }
};

struct SessionStats {
  std::uint64_t traces_seen = 0;
  std::uint64_t traces_stored = 0;
  std::uint64_t traces_pruned = 0;
  std::uint64_t violations_found = 0;
  std::uint64_t tuples_checked = 0;
  std::uint64_t instances_live = 0;
  double runtime_ms = 0.0;
};

struct EngineOptions {
  bool spec_analysis = false;
  bool trace_analysis = false;
  bool keep_going = false;           // record violations and continue
  std::optional<std::uint64_t> bound;  // sequential bounded model
  std::size_t state_cap = 100000;
  std::size_t jobs = 1;              // offline tuple fan-out
  std::function<void(const SessionStats&)> on_trace;
  std::function<void(const SessionStats&)> on_step;
};

// --- offline -------------------------------------------------------------------

// Checks every n-tuple over T against the template, in lexicographic
// trace-id order; the first rejected tuple is the violation witness.
Verdict run_offline_universal(const QuantifiedFormula& phi, const TraceSet& traces,
                              std::size_t jobs = 1, const MonitorTemplate* tpl = nullptr);

// Template-kernel check for one quantifier alternation (forall^n exists^m
// or exists^m forall^n).
Verdict run_offline_alternating(const QuantifiedFormula& phi, const TraceSet& traces,
                                const MonitorTemplate* tpl = nullptr);

// Template-kernel check for any prefix without or with one alternation.
Verdict run_offline_template(const QuantifiedFormula& phi, const TraceSet& traces,
                             std::size_t jobs = 1, const MonitorTemplate* tpl = nullptr);

// Backwards finite-semantics evaluation over every tuple, combined per the
// quantifier prefix (min-length zip convention).
Verdict run_parallel_offline(const QuantifiedFormula& phi, const TraceSet& traces);

// --- sequential online -----------------------------------------------------------

class SequentialSession {
 public:
  SequentialSession(QuantifiedFormula phi, EngineOptions opts = {});

  void begin_trace(const std::string& name = "");
  void push_step(const Step& s);
  void end_trace();
  Verdict finish();

  const SessionStats& stats() const { return stats_; }
  bool bound_exceeded() const { return bound_exceeded_; }
  const TraceSet& stored() const { return stored_; }
  const QuantifiedFormula& formula() const { return phi_; }
  const std::optional<SpecProperties>& spec_properties() const { return props_; }

 private:
  struct ActiveTuple {
    std::vector<TracePtr> entries;  // nullptr marks a current-trace slot
    std::uint32_t state;
    std::size_t stored_min;  // min stored entry length, SIZE_MAX when all current
  };

  void record_violation(const ActiveTuple& tuple);
  TracePtr snapshot_current() const;
  void emit_trace_stats();
  void touch_runtime();

  QuantifiedFormula phi_;
  EngineOptions opts_;
  std::unique_ptr<MonitorTemplate> tpl_;
  std::optional<SpecProperties> props_;
  bool online_mode_ = true;  // universal prefixes stream; others buffer to the bound

  TraceSet stored_;
  std::vector<ActiveTuple> active_;
  std::vector<Step> buffer_;
  std::string current_name_;
  std::uint64_t next_id_ = 0;
  bool in_trace_ = false;
  bool draining_current_ = false;
  bool bound_exceeded_ = false;
  std::optional<Verdict> final_;
  std::optional<Verdict> recorded_violation_;
  SessionStats stats_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Replays complete traces through a sequential session. The formula must be
// universally quantified.
Verdict run_online_sequential(const QuantifiedFormula& phi, const TraceSet& traces,
                              EngineOptions opts = {});

// --- parallel online --------------------------------------------------------------

class ParallelOnlineSession {
 public:
  ParallelOnlineSession(QuantifiedFormula phi, std::size_t stream_count, EngineOptions opts = {});

  // One synchronized step; nullopt entries mark streams that have ended.
  // Returns a verdict as soon as the quantifier combination over the
  // still-alive tuples fails.
  std::optional<Verdict> push(const std::vector<std::optional<Step>>& steps);
  Verdict finish();

  const SessionStats& stats() const { return stats_; }

 private:
  enum class TupleStatus : std::uint8_t { Live, Done, Dead };
  struct StreamState {
    std::vector<Step> consumed;
    bool ended = false;
  };

  bool combination_holds() const;
  std::optional<TraceTuple> violation_witness() const;
  TracePtr stream_trace(std::size_t i) const;
  void touch_runtime();

  QuantifiedFormula phi_;
  EngineOptions opts_;
  std::unique_ptr<MonitorTemplate> tpl_;
  std::size_t stream_count_;
  std::vector<StreamState> streams_;
  // Tuple t is the assignment vars[j] -> stream ((t / s^j) mod s).
  std::vector<std::uint32_t> tuple_state_;
  std::vector<TupleStatus> tuple_status_;
  std::size_t position_ = 0;
  std::optional<Verdict> final_;
  SessionStats stats_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs streams in lockstep; unequal lengths follow the min-length run rule
// per tuple.
Verdict run_parallel_online(const QuantifiedFormula& phi, const TraceSet& streams,
                            EngineOptions opts = {});

}  // namespace hypermon

#endif  // HYPERMON_ENGINE_HPP
