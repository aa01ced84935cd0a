#include "hypermon/engine.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "hypermon/semantics.hpp"

namespace hypermon {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

TraceSet sorted_by_id(const TraceSet& traces) {
  TraceSet s = traces;
  std::sort(s.begin(), s.end(), [](const TracePtr& a, const TracePtr& b) { return a->id < b->id; });
  return s;
}

TraceTuple tuple_at(const TraceSet& traces, std::uint64_t index, std::size_t n) {
  TraceTuple t;
  t.entries.resize(n);
  for (std::size_t j = n; j-- > 0;) {
    t.entries[j] = traces[index % traces.size()];
    index /= traces.size();
  }
  return t;
}

// Quantifier combination over per-assignment truth. Assignments index
// traces by position in `universe`.
bool eval_combination(const QuantifiedFormula& phi, std::size_t universe,
                      std::vector<std::size_t>& assign, std::size_t qi,
                      const std::function<bool(const std::vector<std::size_t>&)>& pred) {
  if (qi == phi.prefix.size()) return pred(assign);
  bool is_forall = phi.prefix[qi].first == Quantifier::Forall;
  for (std::size_t u = 0; u < universe; ++u) {
    assign[qi] = u;
    bool v = eval_combination(phi, universe, assign, qi + 1, pred);
    if (is_forall && !v) return false;
    if (!is_forall && v) return true;
  }
  return is_forall;
}

// First leading-forall-block assignment whose residual combination fails;
// nullopt for existential-first prefixes.
std::optional<std::vector<std::size_t>> leading_forall_witness(
    const QuantifiedFormula& phi, std::size_t universe,
    const std::function<bool(const std::vector<std::size_t>&)>& pred) {
  if (phi.prefix.empty() || phi.prefix[0].first != Quantifier::Forall) return std::nullopt;
  std::size_t block = phi.first_block();
  std::vector<std::size_t> assign(phi.prefix.size(), 0);
  std::function<std::optional<std::vector<std::size_t>>(std::size_t)> rec =
      [&](std::size_t slot) -> std::optional<std::vector<std::size_t>> {
    if (slot == block) {
      if (!eval_combination(phi, universe, assign, block, pred))
        return std::vector<std::size_t>(assign.begin(), assign.begin() + block);
      return std::nullopt;
    }
    for (std::size_t u = 0; u < universe; ++u) {
      assign[slot] = u;
      if (auto w = rec(slot + 1)) return w;
    }
    return std::nullopt;
  };
  return rec(0);
}

Verdict combined_verdict(const QuantifiedFormula& phi, const TraceSet& universe,
                         const std::function<bool(const std::vector<std::size_t>&)>& pred) {
  std::vector<std::size_t> assign(phi.prefix.size(), 0);
  if (eval_combination(phi, universe.size(), assign, 0, pred)) return Verdict::satisfied();
  TraceTuple witness;
  if (auto w = leading_forall_witness(phi, universe.size(), pred))
    for (std::size_t u : *w) witness.entries.push_back(universe[u]);
  return Verdict::violation(std::move(witness));
}

}  // namespace

// --- offline ---------------------------------------------------------------------

Verdict run_offline_universal(const QuantifiedFormula& phi, const TraceSet& traces,
                              std::size_t jobs, const MonitorTemplate* tpl) {
  if (phi.shape() != PrefixShape::ForallOnly)
    throw UnsupportedShape("run_offline_universal requires a universal prefix");
  std::unique_ptr<MonitorTemplate> owned;
  if (!tpl) {
    owned = std::make_unique<MonitorTemplate>(MonitorTemplate::build_for(phi));
    tpl = owned.get();
  }
  TraceSet ordered = sorted_by_id(traces);
  std::size_t n = phi.arity();
  if (ordered.empty()) return Verdict::satisfied();
  std::uint64_t total = ipow(ordered.size(), n);

  if (jobs <= 1) {
    for (std::uint64_t i = 0; i < total; ++i) {
      TraceTuple t = tuple_at(ordered, i, n);
      if (!tpl->accepts_tuple(t)) return Verdict::violation(std::move(t));
    }
    return Verdict::satisfied();
  }

  // Deterministic fan-out: each worker scans a stripe, the smallest
  // violating index wins.
  std::atomic<std::uint64_t> first_violation{total};
  std::vector<std::thread> workers;
  std::uint64_t chunk = (total + jobs - 1) / jobs;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      std::uint64_t lo = w * chunk, hi = std::min(total, lo + chunk);
      for (std::uint64_t i = lo; i < hi && i < first_violation.load(); ++i) {
        if (!tpl->accepts_tuple(tuple_at(ordered, i, n))) {
          std::uint64_t cur = first_violation.load();
          while (i < cur && !first_violation.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  std::uint64_t idx = first_violation.load();
  if (idx == total) return Verdict::satisfied();
  return Verdict::violation(tuple_at(ordered, idx, n));
}

Verdict run_offline_template(const QuantifiedFormula& phi, const TraceSet& traces,
                             std::size_t jobs, const MonitorTemplate* tpl) {
  PrefixShape shape = phi.shape();
  if (shape == PrefixShape::ForallOnly) return run_offline_universal(phi, traces, jobs, tpl);
  std::unique_ptr<MonitorTemplate> owned;
  if (!tpl) {
    owned = std::make_unique<MonitorTemplate>(MonitorTemplate::build_for(phi));
    tpl = owned.get();
  }
  TraceSet ordered = sorted_by_id(traces);
  auto pred = [&](const std::vector<std::size_t>& assign) {
    TraceTuple t;
    for (std::size_t u : assign) t.entries.push_back(ordered[u]);
    return tpl->accepts_tuple(t);
  };
  return combined_verdict(phi, ordered, pred);
}

Verdict run_offline_alternating(const QuantifiedFormula& phi, const TraceSet& traces,
                                const MonitorTemplate* tpl) {
  PrefixShape shape = phi.shape();
  if (shape != PrefixShape::ForallExists && shape != PrefixShape::ExistsForall)
    throw UnsupportedShape("run_offline_alternating requires exactly one quantifier alternation");
  return run_offline_template(phi, traces, 1, tpl);
}

Verdict run_parallel_offline(const QuantifiedFormula& phi, const TraceSet& traces) {
  FormulaArena& ar = *phi.arena;
  FormulaId core = desugar(ar, phi.body);
  std::vector<TraceVariable> vars = phi.variables();
  TraceSet ordered = sorted_by_id(traces);
  auto pred = [&](const std::vector<std::size_t>& assign) {
    TraceTuple t;
    for (std::size_t u : assign) t.entries.push_back(ordered[u]);
    return eval_backwards(ar, core, zip_tuple(t, vars));
  };
  return combined_verdict(phi, ordered, pred);
}

// --- sequential online --------------------------------------------------------------

SequentialSession::SequentialSession(QuantifiedFormula phi, EngineOptions opts)
    : phi_(std::move(phi)), opts_(std::move(opts)) {
  tpl_ = std::make_unique<MonitorTemplate>(
      MonitorTemplate::build_for(phi_, MonitorBuildOptions{opts_.state_cap}));
  PrefixShape shape = phi_.shape();
  online_mode_ = shape == PrefixShape::ForallOnly;
  if (!online_mode_ && !opts_.bound)
    throw UnsupportedShape(
        "sequential monitoring of non-universal prefixes requires the bounded model");
  if (opts_.spec_analysis && shape == PrefixShape::ForallOnly && phi_.arity() >= 1)
    props_ = analyze_spec(phi_, opts_.state_cap);
}

void SequentialSession::touch_runtime() {
  stats_.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
}

TracePtr SequentialSession::snapshot_current() const {
  Trace t;
  t.id = next_id_;
  t.name = current_name_;
  t.steps = buffer_;
  return std::make_shared<Trace>(std::move(t));
}

void SequentialSession::record_violation(const ActiveTuple& tuple) {
  TraceTuple witness;
  TracePtr current = snapshot_current();
  for (const TracePtr& e : tuple.entries) witness.entries.push_back(e ? e : current);
  stats_.violations_found += 1;
  stats_.traces_seen += 1;
  next_id_ += 1;
  if (!recorded_violation_) recorded_violation_ = Verdict::violation(std::move(witness));
  active_.clear();
  stats_.instances_live = 0;
  draining_current_ = true;
  emit_trace_stats();
  if (!opts_.keep_going) final_ = recorded_violation_;
}

void SequentialSession::emit_trace_stats() {
  touch_runtime();
  if (opts_.on_trace) opts_.on_trace(stats_);
}

void SequentialSession::begin_trace(const std::string& name) {
  if (final_ && !opts_.keep_going) return;
  if (in_trace_) end_trace();
  if (opts_.bound && stats_.traces_seen >= *opts_.bound) {
    bound_exceeded_ = true;
    draining_current_ = true;
    in_trace_ = true;
    return;
  }
  in_trace_ = true;
  draining_current_ = false;
  buffer_.clear();
  current_name_ = name.empty() ? std::to_string(next_id_) : name;

  if (!online_mode_) return;  // buffered shapes create no online tuples

  TracePtr placeholder = snapshot_current();
  SpecProperties props = props_.value_or(SpecProperties{});
  std::optional<TracePtr> reference;
  if (!stored_.empty()) reference = stored_.front();
  std::vector<TraceTuple> tuples =
      reduced_tuple_enumeration(stored_, placeholder, props, phi_.arity(), reference);
  stats_.tuples_checked += tuples.size();
  active_.clear();
  active_.reserve(tuples.size());
  for (TraceTuple& t : tuples) {
    ActiveTuple at;
    at.state = tpl_->initial_state();
    at.stored_min = SIZE_MAX;
    for (TracePtr& e : t.entries) {
      if (e->id == placeholder->id) {
        at.entries.push_back(nullptr);
      } else {
        at.stored_min = std::min(at.stored_min, e->length());
        at.entries.push_back(e);
      }
    }
    active_.push_back(std::move(at));
  }
  stats_.instances_live = active_.size();
}

void SequentialSession::push_step(const Step& s) {
  if (!in_trace_ || draining_current_ || (final_ && !opts_.keep_going)) return;
  std::size_t k = buffer_.size();
  buffer_.push_back(s);
  if (!online_mode_) return;

  std::vector<ActiveTuple> next;
  next.reserve(active_.size());
  for (ActiveTuple& at : active_) {
    if (k >= at.stored_min) continue;  // run ended at the shortest stored entry, accepted
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < at.entries.size(); ++j)
      bits |= tpl_->step_bits(at.entries[j] ? at.entries[j]->steps[k] : s, j);
    auto succ = tpl_->step(at.state, bits);
    if (!succ) {
      record_violation(at);
      return;
    }
    at.state = *succ;
    next.push_back(std::move(at));
  }
  active_ = std::move(next);
  stats_.instances_live = active_.size();
  if (opts_.on_step) {
    touch_runtime();
    opts_.on_step(stats_);
  }
}

void SequentialSession::end_trace() {
  if (!in_trace_) return;
  in_trace_ = false;
  if (draining_current_ || (final_ && !opts_.keep_going)) {
    draining_current_ = false;
    buffer_.clear();
    active_.clear();
    return;
  }
  TracePtr t = snapshot_current();
  next_id_ += 1;
  stats_.traces_seen += 1;
  active_.clear();
  stats_.instances_live = 0;

  if (opts_.trace_analysis) {
    std::vector<TracePtr> min = stored_;
    MinimizeResult r = minimize_insert(min, t, phi_, *tpl_);
    stored_ = std::move(min);
    if (!r.inserted)
      stats_.traces_pruned += 1;
    else
      stats_.traces_pruned += r.pruned;  // evicted traces count as pruned
  } else {
    stored_.push_back(t);
  }
  stats_.traces_stored = stored_.size();
  buffer_.clear();
  emit_trace_stats();

  // Bounded alternating satisfaction is decided once the bound is reached.
  if (!online_mode_ && opts_.bound && stats_.traces_seen == *opts_.bound && !final_)
    final_ = run_offline_template(phi_, stored_, opts_.jobs, tpl_.get());
}

Verdict SequentialSession::finish() {
  if (in_trace_) end_trace();
  touch_runtime();
  if (final_) return *final_;
  if (!online_mode_) {
    Verdict v = run_offline_template(phi_, stored_, opts_.jobs, tpl_.get());
    final_ = v;
    return v;
  }
  if (recorded_violation_) return *recorded_violation_;
  return Verdict::satisfied();
}

Verdict run_online_sequential(const QuantifiedFormula& phi, const TraceSet& traces,
                              EngineOptions opts) {
  if (phi.shape() != PrefixShape::ForallOnly)
    throw UnsupportedShape("run_online_sequential requires a universal prefix");
  SequentialSession session(phi, std::move(opts));
  for (const TracePtr& t : traces) {
    session.begin_trace(t->name);
    for (const Step& s : t->steps) session.push_step(s);
    session.end_trace();
  }
  return session.finish();
}

// --- parallel online ------------------------------------------------------------------

ParallelOnlineSession::ParallelOnlineSession(QuantifiedFormula phi, std::size_t stream_count,
                                             EngineOptions opts)
    : phi_(std::move(phi)), opts_(std::move(opts)), stream_count_(stream_count) {
  tpl_ = std::make_unique<MonitorTemplate>(
      MonitorTemplate::build_for(phi_, MonitorBuildOptions{opts_.state_cap}));
  streams_.resize(stream_count_);
  std::uint64_t total = ipow(stream_count_, phi_.arity());
  tuple_state_.assign(total, tpl_->initial_state());
  tuple_status_.assign(total, TupleStatus::Live);
  stats_.traces_seen = stream_count_;
  stats_.tuples_checked = total;
  stats_.instances_live = total;
}

void ParallelOnlineSession::touch_runtime() {
  stats_.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
}

TracePtr ParallelOnlineSession::stream_trace(std::size_t i) const {
  Trace t;
  t.id = i;
  t.name = std::to_string(i);
  t.steps = streams_[i].consumed;
  return std::make_shared<Trace>(std::move(t));
}

bool ParallelOnlineSession::combination_holds() const {
  std::size_t n = phi_.arity();
  auto pred = [&](const std::vector<std::size_t>& a) {
    std::uint64_t idx = 0;
    for (std::size_t u : a) idx = idx * stream_count_ + u;
    return tuple_status_[idx] != TupleStatus::Dead;
  };
  std::vector<std::size_t> tmp(n, 0);
  return eval_combination(phi_, stream_count_, tmp, 0, pred);
}

std::optional<TraceTuple> ParallelOnlineSession::violation_witness() const {
  auto pred = [&](const std::vector<std::size_t>& a) {
    std::uint64_t idx = 0;
    for (std::size_t u : a) idx = idx * stream_count_ + u;
    return tuple_status_[idx] != TupleStatus::Dead;
  };
  auto w = leading_forall_witness(phi_, stream_count_, pred);
  if (!w) return std::nullopt;
  TraceTuple t;
  for (std::size_t u : *w) t.entries.push_back(stream_trace(u));
  return t;
}

std::optional<Verdict> ParallelOnlineSession::push(
    const std::vector<std::optional<Step>>& steps) {
  if (final_) return final_;
  if (steps.size() != stream_count_)
    throw ProtocolError("parallel step carries " + std::to_string(steps.size()) +
                        " entries for " + std::to_string(stream_count_) + " streams");
  for (std::size_t i = 0; i < stream_count_; ++i) {
    if (steps[i]) {
      if (streams_[i].ended) throw ProtocolError("stream resumed after its end");
      streams_[i].consumed.push_back(*steps[i]);
    } else {
      streams_[i].ended = true;
    }
  }

  std::size_t n = phi_.arity();
  std::uint64_t live = 0;
  for (std::uint64_t idx = 0; idx < tuple_state_.size(); ++idx) {
    if (tuple_status_[idx] != TupleStatus::Live) continue;
    // Decode the assignment and check for ended streams: the run length of
    // a tuple is its shortest stream, so an ended entry retires it as
    // accepted before this letter.
    std::uint64_t rest = idx;
    std::vector<std::size_t> assign(n);
    for (std::size_t j = n; j-- > 0;) {
      assign[j] = rest % stream_count_;
      rest /= stream_count_;
    }
    bool retired = false;
    for (std::size_t j = 0; j < n && !retired; ++j) retired = !steps[assign[j]].has_value();
    if (retired) {
      tuple_status_[idx] = TupleStatus::Done;
      continue;
    }
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < n; ++j) bits |= tpl_->step_bits(*steps[assign[j]], j);
    auto succ = tpl_->step(tuple_state_[idx], bits);
    if (!succ) {
      tuple_status_[idx] = TupleStatus::Dead;
    } else {
      tuple_state_[idx] = *succ;
      ++live;
    }
  }
  position_ += 1;
  stats_.instances_live = live;
  if (opts_.on_step) {
    touch_runtime();
    opts_.on_step(stats_);
  }
  if (!combination_holds()) {
    stats_.violations_found += 1;
    TraceTuple witness = violation_witness().value_or(TraceTuple{});
    final_ = Verdict::violation(std::move(witness));
    return final_;
  }
  return std::nullopt;
}

Verdict ParallelOnlineSession::finish() {
  touch_runtime();
  if (final_) return *final_;
  if (combination_holds()) {
    final_ = Verdict::satisfied();
  } else {
    stats_.violations_found += 1;
    final_ = Verdict::violation(violation_witness().value_or(TraceTuple{}));
  }
  return *final_;
}

Verdict run_parallel_online(const QuantifiedFormula& phi, const TraceSet& streams,
                            EngineOptions opts) {
  ParallelOnlineSession session(phi, streams.size(), std::move(opts));
  std::size_t max_len = 0;
  for (const TracePtr& t : streams) max_len = std::max(max_len, t->length());
  for (std::size_t pos = 0; pos < max_len; ++pos) {
    std::vector<std::optional<Step>> step(streams.size());
    for (std::size_t i = 0; i < streams.size(); ++i)
      if (pos < streams[i]->length()) step[i] = streams[i]->steps[pos];
    if (auto v = session.push(step)) return *v;
  }
  return session.finish();
}

}  // namespace hypermon
