// Infinite-word LTL machinery over indexed atoms: tableau-based
// generalized-Buechi construction, satisfiability with lasso witnesses,
// and a three-verdict monitor FSM.

#ifndef HYPERMON_LTL_ENGINE_HPP
#define HYPERMON_LTL_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypermon/formula.hpp"
#include "hypermon/monitor.hpp"  // StateExplosion
#include "hypermon/trace.hpp"

namespace hypermon {

// Subformulas of a core expression, children first, closed under negation
// by tracking polarity on lookup.
struct Closure {
  std::vector<FormulaId> subformulas;
  std::size_t index_of(FormulaId f) const;
  bool contains(FormulaId f) const;
};

Closure compute_closure(const FormulaArena& arena, FormulaId core);

// State-labeled generalized Buechi automaton produced by tableau
// expansion of the negation normal form. A state's literal constraints
// describe the letters it reads; a run is fair when it visits every
// acceptance family infinitely often.
struct GeneralizedBuchi {
  struct State {
    std::vector<IndexedAtom> pos;      // atoms that must be in the letter
    std::vector<IndexedAtom> neg;      // atoms that must be absent
    std::vector<FormulaId> old_set;    // closure subformulas holding now
    std::vector<std::uint32_t> succ;
  };
  std::vector<State> states;
  std::vector<std::uint32_t> initial;
  // One family per Until subformula of the normal form: the states where
  // the Until is absent or its right operand is present.
  std::vector<std::vector<std::uint32_t>> acceptance_families;
  std::vector<FormulaId> until_subformulas;
  std::vector<IndexedAtom> atoms;      // atoms mentioned, sorted

  bool letter_compatible(std::uint32_t state, const ZippedLetter& letter) const;
  // The canonical letter read in a state: exactly its positive atoms.
  ZippedLetter canonical_letter(std::uint32_t state) const;
  // States that start at least one fair run.
  std::vector<bool> live_states() const;
};

GeneralizedBuchi build_gba(FormulaArena& arena, FormulaId core_body, std::size_t state_cap = 100000);

struct LassoWitness {
  std::vector<ZippedLetter> prefix;
  std::vector<ZippedLetter> loop;  // nonempty
};

struct SatResult {
  bool satisfiable = false;
  std::optional<LassoWitness> witness;
};

SatResult is_satisfiable(FormulaArena& arena, FormulaId core_body, std::size_t state_cap = 100000);

// Truth of a core body at position 0 of prefix . loop^omega, by a
// period-aware least fixpoint over the unrolled window.
bool eval_on_lasso(const FormulaArena& arena, FormulaId core_body, const LassoWitness& w);

// Renders a lasso as trace-file steps per trace variable (pi-projection).
std::string format_lasso(const LassoWitness& w, const std::vector<TraceVariable>& vars);

enum class FsmVerdict : std::uint8_t { Top, Bottom, Unknown };

// Deterministic total FSM over the letters of the mentioned atoms. The
// verdict is Bottom when no infinite extension satisfies the body (a bad
// prefix has been read), Top when all do, Unknown otherwise.
class MonitorFsm {
 public:
  std::size_t state_count() const { return verdicts_.size(); }
  std::uint32_t initial_state() const { return initial_; }
  FsmVerdict verdict(std::uint32_t state) const { return verdicts_[state]; }
  std::size_t letter_count() const { return std::size_t{1} << atoms_.size(); }
  const std::vector<IndexedAtom>& atoms() const { return atoms_; }
  std::uint32_t next(std::uint32_t state, std::size_t letter) const {
    return transitions_[state][letter];
  }
  std::uint32_t next_letter(std::uint32_t state, const ZippedLetter& letter) const;
  std::size_t letter_index(const ZippedLetter& letter) const;
  ZippedLetter letter_at(std::size_t index) const;

 private:
  friend MonitorFsm build_fsm_monitor(FormulaArena&, FormulaId, std::size_t);
  std::vector<IndexedAtom> atoms_;
  std::uint32_t initial_ = 0;
  std::vector<FsmVerdict> verdicts_;
  std::vector<std::vector<std::uint32_t>> transitions_;
};

MonitorFsm build_fsm_monitor(FormulaArena& arena, FormulaId core_body,
                             std::size_t state_cap = 100000);

}  // namespace hypermon

#endif  // HYPERMON_LTL_ENGINE_HPP
