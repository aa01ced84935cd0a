// Prefix-tree trace storage and trie-instantiated monitoring. Traces with
// equal prefixes share trie paths, so monitor instantiations are keyed by
// node tuples and fork only where the trie branches.

#ifndef HYPERMON_TRIESTORE_HPP
#define HYPERMON_TRIESTORE_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hypermon/engine.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/monitor.hpp"
#include "hypermon/trace.hpp"

namespace hypermon {

class Trie {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;

  Trie() { nodes_.push_back(Node{kRoot, 0, {}, {}}); }

  // Returns the existing child of `node` for `step`, creating it if absent.
  NodeId add_value(NodeId node, const Step& step);
  // The word spelled from the root to `node`.
  std::vector<Step> rooted_sequence(NodeId node) const;

  NodeId parent(NodeId node) const { return nodes_[node].parent; }
  const Step& incoming(NodeId node) const { return nodes_[node].step; }
  std::size_t depth(NodeId node) const;
  const std::vector<NodeId>& children(NodeId node) const { return nodes_[node].children; }
  std::size_t node_count() const { return nodes_.size(); }  // including the root

 private:
  struct Node {
    NodeId parent;
    std::size_t child_rank;  // position among the parent's children
    Step step;
    std::vector<NodeId> children;  // insertion order
  };
  std::vector<Node> nodes_;
};

// --- trie-backed parallel online monitoring ---------------------------------------

class TrieParallelSession {
 public:
  TrieParallelSession(QuantifiedFormula phi, std::size_t stream_count, EngineOptions opts = {});

  std::optional<Verdict> push(const std::vector<std::optional<Step>>& steps);
  Verdict finish();

  const SessionStats& stats() const { return stats_; }
  const Trie& trie() const { return trie_; }

 private:
  struct Inst {
    std::vector<Trie::NodeId> nodes;
    std::uint32_t state;
  };

  Verdict make_violation(const Inst& inst);
  void touch_runtime();

  QuantifiedFormula phi_;
  EngineOptions opts_;
  std::unique_ptr<MonitorTemplate> tpl_;
  std::optional<SpecProperties> props_;
  Trie trie_;
  std::vector<Trie::NodeId> fingers_;
  std::vector<bool> ended_;
  std::vector<Inst> insts_;
  std::optional<Verdict> final_;
  SessionStats stats_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Verdict run_trie_parallel(const QuantifiedFormula& phi, const TraceSet& streams,
                          EngineOptions opts = {});

// --- trie-backed sequential online monitoring ---------------------------------------

class TrieSequentialSession {
 public:
  TrieSequentialSession(QuantifiedFormula phi, EngineOptions opts = {});

  void begin_trace(const std::string& name = "");
  void push_step(const Step& s);
  void end_trace();
  Verdict finish();

  const SessionStats& stats() const { return stats_; }
  const Trie& trie() const { return trie_; }

 private:
  struct Slot {
    Trie::NodeId node;
    bool is_current;
  };
  struct Inst {
    std::vector<Slot> slots;
    std::uint32_t state;
  };
  struct StoredTrace {
    std::uint64_t id;
    std::string name;
    Trie::NodeId leaf;
    std::size_t length;
  };

  void record_violation(const Inst& inst);
  TracePtr reconstruct_stored(Trie::NodeId node, std::size_t node_depth) const;
  TracePtr snapshot_current() const;
  void emit_trace_stats();
  void touch_runtime();

  QuantifiedFormula phi_;
  EngineOptions opts_;
  std::unique_ptr<MonitorTemplate> tpl_;
  std::optional<SpecProperties> props_;
  Trie trie_;
  std::vector<StoredTrace> stored_;
  std::unordered_map<Trie::NodeId, std::uint32_t> stored_pass_;  // stored traces through a node
  std::unordered_map<Trie::NodeId, std::uint32_t> stored_end_;   // stored traces ending at a node

  Trie::NodeId finger_ = Trie::kRoot;
  std::vector<Step> buffer_;
  std::string current_name_;
  std::uint64_t next_id_ = 0;
  bool in_trace_ = false;
  bool draining_current_ = false;
  bool bound_exceeded_ = false;
  std::vector<Inst> insts_;
  std::optional<Verdict> final_;
  std::optional<Verdict> recorded_violation_;
  SessionStats stats_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Verdict run_trie_sequential(const QuantifiedFormula& phi, const TraceSet& traces,
                            EngineOptions opts = {});

}  // namespace hypermon

#endif  // HYPERMON_TRIESTORE_HPP
