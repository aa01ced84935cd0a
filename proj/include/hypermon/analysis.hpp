// Specification analysis (symmetry, transitivity, reflexivity) via LTL
// satisfiability reductions, and trace analysis (dominance, storage
// minimization, reduced tuple enumeration).

#ifndef HYPERMON_ANALYSIS_HPP
#define HYPERMON_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "hypermon/formula.hpp"
#include "hypermon/ltl_engine.hpp"
#include "hypermon/monitor.hpp"
#include "hypermon/trace.hpp"

namespace hypermon {

struct SpecProperties {
  bool symmetric = false;
  std::optional<bool> transitive;  // nullopt when arity != 2
  bool reflexive = false;
};

class UnsupportedShape : public std::invalid_argument {
 public:
  explicit UnsupportedShape(const std::string& what) : std::invalid_argument(what) {}
};

// phi must be universally quantified with n >= 2 variables. Builds
// (psi <-/-> psi o swap) | (psi <-/-> psi o rotate) and reports symmetry
// iff it is unsatisfiable.
bool check_symmetry(const QuantifiedFormula& phi, std::size_t state_cap = 100000);

// phi must be a forall^2 formula. Unsatisfiability of
// (psi(1,2) & psi(2,3)) -/-> psi(1,3) over a fresh third variable.
bool check_transitivity(const QuantifiedFormula& phi, std::size_t state_cap = 100000);

// Collapses all variables to the first; reflexive iff the negated collapsed
// body is unsatisfiable.
bool check_reflexivity(const QuantifiedFormula& phi, std::size_t state_cap = 100000);

// All three, with transitivity NotApplicable (nullopt) when arity != 2 and
// symmetry trivially true for a single variable.
SpecProperties analyze_spec(const QuantifiedFormula& phi, std::size_t state_cap = 100000);

// Trace dominance per the inclusion characterizations for the four
// supported prefix shapes. `tpl` must be the template of phi.
bool dominates(const QuantifiedFormula& phi, const MonitorTemplate& tpl, const TracePtr& t,
               const TracePtr& t_prime);

struct MinimizeResult {
  bool inserted = false;
  std::size_t pruned = 0;  // stored traces evicted by the new one
};

// The two-loop storage minimization: keep T when some stored trace
// dominates t, otherwise evict every stored trace dominated by t and add t.
MinimizeResult minimize_insert(std::vector<TracePtr>& t_min, const TracePtr& t,
                               const QuantifiedFormula& phi, const MonitorTemplate& tpl);

// The n-tuples over stored | {t_new} that involve t_new, reduced by the
// properties: one representative per permutation orbit when symmetric, the
// all-equal diagonal dropped when reflexive, and only (reference, t_new)
// when transitive (with symmetry and reflexivity, arity 2).
std::vector<TraceTuple> reduced_tuple_enumeration(const TraceSet& stored, const TracePtr& t_new,
                                                  const SpecProperties& props, std::size_t n,
                                                  const std::optional<TracePtr>& reference);

}  // namespace hypermon

#endif  // HYPERMON_ANALYSIS_HPP
