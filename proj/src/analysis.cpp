#include "hypermon/analysis.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hypermon {

namespace {

void require_forall_only(const QuantifiedFormula& phi, const char* who) {
  if (phi.shape() != PrefixShape::ForallOnly || phi.prefix.empty())
    throw UnsupportedShape(std::string(who) + " requires a universally quantified formula");
}

FormulaId xnor_negated(FormulaArena& ar, FormulaId a, FormulaId b) {
  // a <-/-> b
  return ar.not_(ar.iff(a, b));
}

}  // namespace

bool check_symmetry(const QuantifiedFormula& phi, std::size_t state_cap) {
  require_forall_only(phi, "check_symmetry");
  if (phi.arity() < 2)
    throw UnsupportedShape("check_symmetry requires at least two trace variables");
  FormulaArena& ar = *phi.arena;
  std::vector<TraceVariable> vars = phi.variables();

  std::map<TraceVariable, TraceVariable> swap, rotate;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    swap[vars[i]] = vars[i];
    rotate[vars[i]] = vars[(i + 1) % vars.size()];
  }
  swap[vars[0]] = vars[1];
  swap[vars[1]] = vars[0];

  FormulaId psi = phi.body;
  FormulaId body = ar.or_(xnor_negated(ar, psi, substitute_variables(ar, psi, swap)),
                          xnor_negated(ar, psi, substitute_variables(ar, psi, rotate)));
  return !is_satisfiable(ar, desugar(ar, body), state_cap).satisfiable;
}

bool check_transitivity(const QuantifiedFormula& phi, std::size_t state_cap) {
  require_forall_only(phi, "check_transitivity");
  if (phi.arity() != 2) throw UnsupportedShape("transitivity is defined for two trace variables");
  FormulaArena& ar = *phi.arena;
  std::vector<TraceVariable> vars = phi.variables();

  TraceVariable third{vars[1].name + "'"};
  while (third == vars[0] || third == vars[1]) third.name += "'";
  std::map<TraceVariable, TraceVariable> m12{{vars[0], vars[0]}, {vars[1], vars[1]}};
  std::map<TraceVariable, TraceVariable> m23{{vars[0], vars[1]}, {vars[1], third}};
  std::map<TraceVariable, TraceVariable> m13{{vars[0], vars[0]}, {vars[1], third}};

  FormulaId psi = phi.body;
  FormulaId premise = ar.and_(substitute_variables(ar, psi, m12), substitute_variables(ar, psi, m23));
  // (psi12 & psi23) -/-> psi13
  FormulaId body = ar.and_(premise, ar.not_(substitute_variables(ar, psi, m13)));
  return !is_satisfiable(ar, desugar(ar, body), state_cap).satisfiable;
}

bool check_reflexivity(const QuantifiedFormula& phi, std::size_t state_cap) {
  require_forall_only(phi, "check_reflexivity");
  FormulaArena& ar = *phi.arena;
  std::vector<TraceVariable> vars = phi.variables();
  std::map<TraceVariable, TraceVariable> collapse;
  for (const TraceVariable& v : vars) collapse[v] = vars[0];
  FormulaId body = ar.not_(substitute_variables(ar, phi.body, collapse));
  return !is_satisfiable(ar, desugar(ar, body), state_cap).satisfiable;
}

SpecProperties analyze_spec(const QuantifiedFormula& phi, std::size_t state_cap) {
  SpecProperties props;
  props.symmetric = phi.arity() < 2 ? true : check_symmetry(phi, state_cap);
  if (phi.arity() == 2) props.transitive = check_transitivity(phi, state_cap);
  props.reflexive = check_reflexivity(phi, state_cap);
  return props;
}

bool dominates(const QuantifiedFormula& phi, const MonitorTemplate& tpl, const TracePtr& t,
               const TracePtr& t_prime) {
  std::vector<TraceVariable> vars = phi.variables();
  auto inst = [&](const TraceVariable& v, const TracePtr& trace) {
    return tpl.instantiate({{v, trace}});
  };
  auto included = [&](const TraceVariable& v, const TracePtr& small, const TracePtr& big) {
    return language_inclusion(inst(v, small), inst(v, big)).holds;
  };

  switch (phi.shape()) {
    case PrefixShape::ForallOnly: {
      for (const TraceVariable& v : vars)
        if (!included(v, t, t_prime)) return false;
      return true;
    }
    case PrefixShape::ExistsOnly: {
      for (const TraceVariable& v : vars)
        if (!included(v, t_prime, t)) return false;
      return true;
    }
    case PrefixShape::ForallExists: {
      if (phi.arity() != 2)
        throw UnsupportedShape("alternating dominance is implemented for two variables");
      return included(vars[0], t, t_prime) && included(vars[1], t_prime, t);
    }
    case PrefixShape::ExistsForall: {
      if (phi.arity() != 2)
        throw UnsupportedShape("alternating dominance is implemented for two variables");
      return included(vars[0], t_prime, t) && included(vars[1], t, t_prime);
    }
    default: throw UnsupportedShape("dominance undefined for prefixes with two alternations");
  }
}

MinimizeResult minimize_insert(std::vector<TracePtr>& t_min, const TracePtr& t,
                               const QuantifiedFormula& phi, const MonitorTemplate& tpl) {
  for (const TracePtr& stored : t_min)
    if (dominates(phi, tpl, stored, t)) return MinimizeResult{false, 0};
  MinimizeResult r{true, 0};
  std::vector<TracePtr> kept;
  kept.reserve(t_min.size() + 1);
  for (const TracePtr& stored : t_min) {
    if (dominates(phi, tpl, t, stored))
      ++r.pruned;
    else
      kept.push_back(stored);
  }
  kept.push_back(t);
  t_min = std::move(kept);
  return r;
}

std::vector<TraceTuple> reduced_tuple_enumeration(const TraceSet& stored, const TracePtr& t_new,
                                                  const SpecProperties& props, std::size_t n,
                                                  const std::optional<TracePtr>& reference) {
  bool transitive_mode = n == 2 && props.transitive.value_or(false) && props.symmetric &&
                         props.reflexive;
  if (transitive_mode) {
    if (!reference || !*reference) return {};
    return {TraceTuple{{*reference, t_new}}};
  }

  // Universe in id order with the new trace in place.
  std::vector<TracePtr> universe = stored;
  universe.push_back(t_new);
  std::sort(universe.begin(), universe.end(),
            [](const TracePtr& a, const TracePtr& b) { return a->id < b->id; });

  std::vector<TraceTuple> out;
  std::set<std::vector<std::uint64_t>> seen_orbits;
  std::vector<std::size_t> pick(n, 0);
  std::function<void(std::size_t, bool)> rec = [&](std::size_t slot, bool has_new) {
    if (slot == n) {
      if (!has_new) return;
      TraceTuple tup;
      for (std::size_t i : pick) tup.entries.push_back(universe[i]);
      if (props.reflexive) {
        bool all_equal = true;
        for (std::size_t i : pick) all_equal = all_equal && universe[i]->id == t_new->id;
        if (all_equal) return;
      }
      if (props.symmetric) {
        std::vector<std::uint64_t> orbit;
        for (const TracePtr& e : tup.entries) orbit.push_back(e->id);
        std::sort(orbit.begin(), orbit.end());
        if (!seen_orbits.insert(orbit).second) return;
      }
      out.push_back(std::move(tup));
      return;
    }
    for (std::size_t i = 0; i < universe.size(); ++i) {
      pick[slot] = i;
      rec(slot + 1, has_new || universe[i]->id == t_new->id);
    }
  };
  rec(0, false);
  return out;
}

}  // namespace hypermon
