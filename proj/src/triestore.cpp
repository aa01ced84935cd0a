#include "hypermon/triestore.hpp"

#include <algorithm>
#include <set>

namespace hypermon {

Trie::NodeId Trie::add_value(NodeId node, const Step& step) {
  for (NodeId c : nodes_[node].children)
    if (nodes_[c].step == step) return c;
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{node, nodes_[node].children.size(), step, {}});
  nodes_[node].children.push_back(id);
  return id;
}

std::vector<Step> Trie::rooted_sequence(NodeId node) const {
  std::vector<Step> steps;
  while (node != kRoot) {
    steps.push_back(nodes_[node].step);
    node = nodes_[node].parent;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

std::size_t Trie::depth(NodeId node) const {
  std::size_t d = 0;
  while (node != kRoot) {
    node = nodes_[node].parent;
    ++d;
  }
  return d;
}

namespace {

void require_universal(const QuantifiedFormula& phi, const char* who) {
  if (phi.shape() != PrefixShape::ForallOnly || phi.prefix.empty())
    throw UnsupportedShape(std::string(who) + " requires a universal prefix");
}

}  // namespace

// --- parallel ----------------------------------------------------------------------

TrieParallelSession::TrieParallelSession(QuantifiedFormula phi, std::size_t stream_count,
                                         EngineOptions opts)
    : phi_(std::move(phi)), opts_(std::move(opts)) {
  require_universal(phi_, "run_trie_parallel");
  tpl_ = std::make_unique<MonitorTemplate>(
      MonitorTemplate::build_for(phi_, MonitorBuildOptions{opts_.state_cap}));
  if (opts_.spec_analysis) props_ = analyze_spec(phi_, opts_.state_cap);
  fingers_.assign(stream_count, Trie::kRoot);
  ended_.assign(stream_count, false);
  insts_.push_back(Inst{std::vector<Trie::NodeId>(phi_.arity(), Trie::kRoot),
                        tpl_->initial_state()});
  stats_.traces_seen = stream_count;
  stats_.tuples_checked = 1;
  stats_.instances_live = 1;
}

void TrieParallelSession::touch_runtime() {
  stats_.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
}

Verdict TrieParallelSession::make_violation(const Inst& inst) {
  TraceTuple witness;
  for (Trie::NodeId node : inst.nodes) {
    // The first stream whose finger sits on this node names the trace.
    Trace t;
    t.steps = trie_.rooted_sequence(node);
    for (std::size_t i = 0; i < fingers_.size(); ++i)
      if (fingers_[i] == node) {
        t.id = i;
        t.name = std::to_string(i);
        break;
      }
    witness.entries.push_back(std::make_shared<Trace>(std::move(t)));
  }
  stats_.violations_found += 1;
  return Verdict::violation(std::move(witness));
}

std::optional<Verdict> TrieParallelSession::push(const std::vector<std::optional<Step>>& steps) {
  if (final_) return final_;
  if (steps.size() != fingers_.size())
    throw ProtocolError("parallel step carries " + std::to_string(steps.size()) +
                        " entries for " + std::to_string(fingers_.size()) + " streams");
  for (std::size_t i = 0; i < fingers_.size(); ++i) {
    if (steps[i]) {
      if (ended_[i]) throw ProtocolError("stream resumed after its end");
      fingers_[i] = trie_.add_value(fingers_[i], *steps[i]);
    } else {
      ended_[i] = true;
    }
  }

  bool symmetric = props_ && props_->symmetric;
  bool reflexive = props_ && props_->reflexive;
  std::set<std::vector<Trie::NodeId>> seen;
  std::vector<Inst> next;
  for (const Inst& inst : insts_) {
    // Fork over all child combinations; a slot without children retired
    // every tuple through it at its minimum length.
    std::vector<Trie::NodeId> combo(inst.nodes.size());
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (final_) return;
      if (j == inst.nodes.size()) {
        if (reflexive && std::all_of(combo.begin(), combo.end(),
                                     [&](Trie::NodeId n) { return n == combo[0]; })) {
          std::size_t occupancy = 0;
          for (Trie::NodeId f : fingers_) occupancy += f == combo[0];
          if (occupancy <= 1) return;
        }
        if (symmetric) {
          std::vector<Trie::NodeId> orbit = combo;
          std::sort(orbit.begin(), orbit.end());
          if (!seen.insert(orbit).second) return;
        }
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < combo.size(); ++k)
          bits |= tpl_->step_bits(trie_.incoming(combo[k]), k);
        auto succ = tpl_->step(inst.state, bits);
        if (!succ) {
          final_ = make_violation(Inst{combo, inst.state});
          return;
        }
        next.push_back(Inst{combo, *succ});
        stats_.tuples_checked += 1;
        return;
      }
      for (Trie::NodeId c : trie_.children(inst.nodes[j])) {
        combo[j] = c;
        rec(j + 1);
        if (final_) return;
      }
    };
    rec(0);
    if (final_) break;
  }
  if (final_) return final_;
  insts_ = std::move(next);
  stats_.instances_live = insts_.size();
  if (opts_.on_step) {
    touch_runtime();
    opts_.on_step(stats_);
  }
  return std::nullopt;
}

Verdict TrieParallelSession::finish() {
  touch_runtime();
  if (final_) return *final_;
  final_ = Verdict::satisfied();
  return *final_;
}

Verdict run_trie_parallel(const QuantifiedFormula& phi, const TraceSet& streams,
                          EngineOptions opts) {
  TrieParallelSession session(phi, streams.size(), std::move(opts));
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

// --- sequential --------------------------------------------------------------------

TrieSequentialSession::TrieSequentialSession(QuantifiedFormula phi, EngineOptions opts)
    : phi_(std::move(phi)), opts_(std::move(opts)) {
  require_universal(phi_, "run_trie_sequential");
  if (opts_.trace_analysis)
    throw std::invalid_argument("the trie backend and trace analysis cannot be combined");
  tpl_ = std::make_unique<MonitorTemplate>(
      MonitorTemplate::build_for(phi_, MonitorBuildOptions{opts_.state_cap}));
  if (opts_.spec_analysis) props_ = analyze_spec(phi_, opts_.state_cap);
}

void TrieSequentialSession::touch_runtime() {
  stats_.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
}

TracePtr TrieSequentialSession::snapshot_current() const {
  Trace t;
  t.id = next_id_;
  t.name = current_name_;
  t.steps = buffer_;
  return std::make_shared<Trace>(std::move(t));
}

TracePtr TrieSequentialSession::reconstruct_stored(Trie::NodeId node,
                                                   std::size_t node_depth) const {
  // Smallest-id stored trace whose path passes `node` at `node_depth`.
  for (const StoredTrace& st : stored_) {
    if (st.length < node_depth) continue;
    Trie::NodeId cur = st.leaf;
    for (std::size_t up = st.length; up > node_depth; --up) cur = trie_.parent(cur);
    if (cur == node) {
      Trace t;
      t.id = st.id;
      t.name = st.name;
      t.steps = trie_.rooted_sequence(st.leaf);
      return std::make_shared<Trace>(std::move(t));
    }
  }
  // Orphan branch; report the prefix itself.
  Trace t;
  t.steps = trie_.rooted_sequence(node);
  return std::make_shared<Trace>(std::move(t));
}

void TrieSequentialSession::record_violation(const Inst& inst) {
  std::size_t depth = buffer_.size();
  TraceTuple witness;
  TracePtr current = snapshot_current();
  for (const Slot& slot : inst.slots)
    witness.entries.push_back(slot.is_current ? current : reconstruct_stored(slot.node, depth));
  stats_.violations_found += 1;
  stats_.traces_seen += 1;
  next_id_ += 1;
  if (!recorded_violation_) recorded_violation_ = Verdict::violation(std::move(witness));
  insts_.clear();
  stats_.instances_live = 0;
  draining_current_ = true;
  emit_trace_stats();
  if (!opts_.keep_going) final_ = recorded_violation_;
}

void TrieSequentialSession::emit_trace_stats() {
  touch_runtime();
  if (opts_.on_trace) opts_.on_trace(stats_);
}

void TrieSequentialSession::begin_trace(const std::string& name) {
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
  finger_ = Trie::kRoot;
  current_name_ = name.empty() ? std::to_string(next_id_) : name;

  bool symmetric = props_ && props_->symmetric;
  bool reflexive = props_ && props_->reflexive;
  std::size_t n = phi_.arity();
  insts_.clear();
  // Tag patterns over {stored, current} with the current trace at least
  // once; all slots start at the root.
  std::set<std::vector<bool>> seen;
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    std::vector<bool> pattern(n);
    std::size_t current_slots = 0;
    for (std::size_t j = 0; j < n; ++j) {
      pattern[j] = (mask >> j) & 1;  // true = current slot
      current_slots += pattern[j];
    }
    if (stored_.empty() && current_slots != n) continue;
    if (reflexive && current_slots == n) continue;
    if (symmetric) {
      std::vector<bool> orbit = pattern;
      std::sort(orbit.begin(), orbit.end());
      if (!seen.insert(orbit).second) continue;
    }
    Inst inst;
    inst.state = tpl_->initial_state();
    for (std::size_t j = 0; j < n; ++j)
      inst.slots.push_back(Slot{Trie::kRoot, pattern[j]});
    insts_.push_back(std::move(inst));
  }
  stats_.tuples_checked += insts_.size();
  stats_.instances_live = insts_.size();
}

void TrieSequentialSession::push_step(const Step& s) {
  if (!in_trace_ || draining_current_ || (final_ && !opts_.keep_going)) return;
  buffer_.push_back(s);
  finger_ = trie_.add_value(finger_, s);

  bool symmetric = props_ && props_->symmetric;
  std::set<std::vector<std::pair<Trie::NodeId, bool>>> seen;
  std::vector<Inst> next;
  for (const Inst& inst : insts_) {
    std::vector<Slot> combo(inst.slots.size());
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (draining_current_) return;
      if (j == inst.slots.size()) {
        if (symmetric) {
          std::vector<std::pair<Trie::NodeId, bool>> orbit;
          for (const Slot& sl : combo) orbit.emplace_back(sl.node, sl.is_current);
          std::sort(orbit.begin(), orbit.end());
          if (!seen.insert(orbit).second) return;
        }
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < combo.size(); ++k)
          bits |= tpl_->step_bits(combo[k].is_current ? s : trie_.incoming(combo[k].node), k);
        auto succ = tpl_->step(inst.state, bits);
        if (!succ) {
          record_violation(Inst{combo, inst.state});
          return;
        }
        next.push_back(Inst{combo, *succ});
        return;
      }
      const Slot& slot = inst.slots[j];
      if (slot.is_current) {
        combo[j] = Slot{finger_, true};
        rec(j + 1);
        return;
      }
      for (Trie::NodeId c : trie_.children(slot.node)) {
        if (draining_current_) return;
        auto it = stored_pass_.find(c);
        if (it == stored_pass_.end() || it->second == 0) continue;  // current-only branch
        combo[j] = Slot{c, false};
        rec(j + 1);
      }
    };
    rec(0);
    if (draining_current_) return;
  }
  insts_ = std::move(next);
  stats_.instances_live = insts_.size();
  if (opts_.on_step) {
    touch_runtime();
    opts_.on_step(stats_);
  }
}

void TrieSequentialSession::end_trace() {
  if (!in_trace_) return;
  in_trace_ = false;
  if (draining_current_ || (final_ && !opts_.keep_going)) {
    draining_current_ = false;
    buffer_.clear();
    insts_.clear();
    return;
  }
  // The surviving instantiations are accepted; the trace joins the store.
  StoredTrace st{next_id_, current_name_, finger_, buffer_.size()};
  Trie::NodeId cur = finger_;
  while (cur != Trie::kRoot) {
    stored_pass_[cur] += 1;
    cur = trie_.parent(cur);
  }
  stored_end_[finger_] += 1;
  stored_.push_back(st);
  next_id_ += 1;
  stats_.traces_seen += 1;
  stats_.traces_stored = stored_.size();
  insts_.clear();
  stats_.instances_live = 0;
  buffer_.clear();
  emit_trace_stats();
}

Verdict TrieSequentialSession::finish() {
  if (in_trace_) end_trace();
  touch_runtime();
  if (final_) return *final_;
  if (recorded_violation_) return *recorded_violation_;
  return Verdict::satisfied();
}

Verdict run_trie_sequential(const QuantifiedFormula& phi, const TraceSet& traces,
                            EngineOptions opts) {
  TrieSequentialSession session(phi, std::move(opts));
  for (const TracePtr& t : traces) {
    session.begin_trace(t->name);
    for (const Step& s : t->steps) session.push_step(s);
    session.end_trace();
  }
  return session.finish();
}

}  // namespace hypermon
