// Monitorability of alternation-free formulas in the unbounded sequential
// model, via good/bad-prefix reachability on the three-verdict monitor FSM.

#ifndef HYPERMON_MONITORABILITY_HPP
#define HYPERMON_MONITORABILITY_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "hypermon/formula.hpp"
#include "hypermon/ltl_engine.hpp"

namespace hypermon {

enum class MonitorabilityResult : std::uint8_t { Monitorable, NotMonitorable, Unsupported };

enum class MonitorabilityReason : std::uint8_t {
  BodyValid,                // body trivially decides (valid, or unsatisfiable in the exists case)
  BadReachableEverywhere,   // forall case: every reachable state reaches Bottom
  GoodReachableEverywhere,  // exists case: every reachable state reaches Top
  DeadRegion,               // some reachable state reaches no decisive verdict
  Alternating,
  ModelUnsupported,
};

struct MonitorabilityReport {
  MonitorabilityResult result;
  MonitorabilityReason reason;
  std::optional<std::uint32_t> dead_state;  // witness for DeadRegion
  std::size_t fsm_states = 0;
};

enum class InputModelKind : std::uint8_t { Unbounded, Bounded, Parallel };

struct InputModel {
  InputModelKind kind = InputModelKind::Unbounded;
  std::uint64_t bound = 0;  // Bounded / Parallel
  static InputModel unbounded() { return {InputModelKind::Unbounded, 0}; }
  static InputModel bounded(std::uint64_t b) { return {InputModelKind::Bounded, b}; }
  static InputModel parallel(std::uint64_t b) { return {InputModelKind::Parallel, b}; }
};

// Requires an alternation-free prefix.
MonitorabilityReport check_monitorable_unbounded(const QuantifiedFormula& phi,
                                                 std::size_t state_cap = 100000);

MonitorabilityReport classify_model_support(const QuantifiedFormula& phi, const InputModel& model,
                                            std::size_t state_cap = 100000);

std::string describe(const MonitorabilityReport& report);

}  // namespace hypermon

#endif  // HYPERMON_MONITORABILITY_HPP
