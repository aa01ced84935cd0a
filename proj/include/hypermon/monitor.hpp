// ============================================================================
// hypermon/monitor.hpp — deterministic partial monitor templates
// ============================================================================
//
// A template is the progression automaton of a core body over the product
// alphabet 2^(AP x V). States are canonical Boolean residuals over
// "obligation" variables (atoms, X- and U-subformulas), represented as
// BDDs; transition guards are BDDs over the letter variables. Guards of a
// state are pairwise disjoint and a letter whose residual is false has no
// transition, so a missing transition certifies an informative bad prefix.
//
// Letter variable order is lexicographic by (variable index, AP name);
// obligation variables follow after all letter variables.
//
// ============================================================================

#ifndef HYPERMON_MONITOR_HPP
#define HYPERMON_MONITOR_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypermon/bdd.hpp"
#include "hypermon/formula.hpp"
#include "hypermon/trace.hpp"

namespace hypermon {

class StateExplosion : public std::runtime_error {
 public:
  explicit StateExplosion(std::size_t limit)
      : std::runtime_error("state cap of " + std::to_string(limit) + " exceeded"), limit(limit) {}
  std::size_t limit;
};

struct Guard {
  Bdd fn = BddManager::kFalse;
};

struct MonitorBuildOptions {
  std::size_t state_cap = 100000;
};

class InstantiatedMonitor;

class MonitorTemplate {
 public:
  struct Transition {
    Guard guard;
    std::uint32_t target;
  };

  // `core_body` must be in core form and mention only variables from `vars`
  // and propositions from `ap_set`.
  static MonitorTemplate build(std::shared_ptr<FormulaArena> arena, FormulaId core_body,
                               std::vector<TraceVariable> vars, std::vector<std::string> ap_set,
                               const MonitorBuildOptions& opts = {});
  // Convenience: desugars the body of a quantified formula.
  static MonitorTemplate build_for(const QuantifiedFormula& phi,
                                   const MonitorBuildOptions& opts = {});

  std::size_t state_count() const { return transitions_.size(); }
  std::uint32_t initial_state() const { return initial_; }
  // True when the body is propositionally false: every nonempty word dies.
  bool initial_dead() const { return initial_dead_; }
  std::uint32_t true_state() const { return true_state_; }
  const std::vector<Transition>& transitions(std::uint32_t state) const {
    return transitions_[state];
  }

  const std::vector<TraceVariable>& vars() const { return vars_; }
  const std::vector<std::string>& ap_set() const { return ap_set_; }
  std::uint32_t letter_var_count() const { return letter_vars_; }
  // Letter variable index of (ap, var) per the global ordering.
  std::uint32_t letter_var(std::size_t var_index, std::size_t ap_index) const {
    return static_cast<std::uint32_t>(var_index * ap_set_.size() + ap_index);
  }
  std::optional<std::size_t> ap_index(const std::string& ap) const;
  std::optional<std::size_t> var_index(const TraceVariable& v) const;

  // Letter bits for one step of one variable.
  std::uint64_t step_bits(const Step& s, std::size_t var_index) const;

  // Stepping. Returns the successor state or nullopt on a missing
  // transition (informative bad prefix).
  std::optional<std::uint32_t> step(std::uint32_t state, std::uint64_t letter_bits) const;

  // A tuple is accepted iff a run over its zip of length min-entry-length
  // exists.
  bool accepts_tuple(const TraceTuple& n) const;

  InstantiatedMonitor instantiate(const std::map<TraceVariable, TracePtr>& binding) const;

  BddManager& bdd() const { return *bdd_; }
  std::string dump() const;
  std::string state_label(std::uint32_t state) const;

 private:
  friend class InstantiatedMonitor;

  std::shared_ptr<FormulaArena> arena_;
  std::shared_ptr<BddManager> bdd_;
  std::vector<TraceVariable> vars_;
  std::vector<std::string> ap_set_;  // sorted
  std::uint32_t letter_vars_ = 0;
  std::uint32_t initial_ = 0;
  std::uint32_t true_state_ = 0;
  bool initial_dead_ = false;
  std::vector<std::vector<Transition>> transitions_;
  std::vector<Bdd> residuals_;
  std::vector<FormulaId> obligations_;  // obligation var index -> subformula
};

// A template with some variables bound to explicit traces. Accepts finite
// words over letters of the free variables: a word w is in the language
// iff the run survives min(|w|, horizon) steps, where the horizon is the
// minimum length over the bound traces (unbounded when nothing is bound).
class InstantiatedMonitor {
 public:
  const MonitorTemplate& tmpl() const { return *tmpl_; }
  const std::vector<TraceVariable>& free_vars() const { return free_vars_; }
  // nullopt = unbounded.
  std::optional<std::size_t> horizon() const { return horizon_; }

  // Letters of `w` assign atoms of the free variables.
  bool accepts_word(const ZippedWord& w) const;

  // Guards over free-variable atoms at a position, with bound atoms fixed
  // by the bound traces. Positions at or beyond the horizon accept
  // everything (empty vector, sink).
  struct FreeTransition {
    Bdd guard;
    std::uint32_t target;
  };
  const std::vector<FreeTransition>& restricted(std::uint32_t state, std::size_t pos) const;
  bool sink_at(std::size_t pos) const { return horizon_ && pos >= *horizon_; }

 private:
  friend class MonitorTemplate;
  InstantiatedMonitor(const MonitorTemplate* t, std::map<TraceVariable, TracePtr> binding);

  const MonitorTemplate* tmpl_;
  std::map<TraceVariable, TracePtr> binding_;
  std::vector<TraceVariable> free_vars_;
  std::vector<std::size_t> bound_var_indices_;
  std::optional<std::size_t> horizon_;
  mutable std::map<std::pair<std::uint32_t, std::size_t>, std::vector<FreeTransition>> cache_;
};

struct InclusionResult {
  bool holds = false;
  std::optional<ZippedWord> counterexample;  // in L(a) \ L(b) when !holds
};

// Decides L(a) subseteq L(b) by breadth-first search over the synchronized
// product, position-indexed up to the larger horizon, with universal-accept
// sinks beyond each horizon.
InclusionResult language_inclusion(const InstantiatedMonitor& a, const InstantiatedMonitor& b);

}  // namespace hypermon

#endif  // HYPERMON_MONITOR_HPP
