// Ground-truth finite-trace semantics: a recursive evaluator over trace
// assignments, the linear-time backwards evaluator over zipped words, and
// quantifier expansion over finite trace sets.

#ifndef HYPERMON_SEMANTICS_HPP
#define HYPERMON_SEMANTICS_HPP

#include <map>
#include <vector>

#include "hypermon/formula.hpp"
#include "hypermon/trace.hpp"

namespace hypermon {

// Partial map from trace variables to finite traces; must cover the free
// variables of the body under evaluation.
using FiniteAssignment = std::map<TraceVariable, TracePtr>;

// Exact truth of a core body under the finite-trace clauses. Traces shift
// independently; a trace shifted past its end is the empty trace, whose
// first letter is the empty set.
bool eval_recursive(const FormulaArena& arena, FormulaId core_body, const FiniteAssignment& pi);

// Truth table of every subformula at every position of a zipped word,
// filled backwards from the epsilon row (row `length`).
struct SubformulaTable {
  std::vector<FormulaId> subformulas;  // deduplicated, children first
  std::size_t positions = 0;           // word length; the table has positions+1 rows
  std::vector<std::vector<char>> rows; // rows[pos][sub index]

  bool value(std::size_t sub_index, std::size_t pos) const { return rows[pos][sub_index] != 0; }
  std::size_t index_of(FormulaId f) const;
};

SubformulaTable eval_backwards_table(const FormulaArena& arena, FormulaId core_body,
                                     const ZippedWord& w);
bool eval_backwards(const FormulaArena& arena, FormulaId core_body, const ZippedWord& w);

// Quantifier expansion over a finite trace set: forall is a conjunction
// over T, exists a disjunction; the body is evaluated with eval_recursive
// on the full traces. Forall over the empty set is true, exists false.
bool eval_hyper_finite(const QuantifiedFormula& phi, const TraceSet& traces);

}  // namespace hypermon

#endif  // HYPERMON_SEMANTICS_HPP
