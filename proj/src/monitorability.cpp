#include "hypermon/monitorability.hpp"

#include <deque>
#include <stdexcept>
#include <vector>

namespace hypermon {

namespace {

// True iff from every reachable state some state with the wanted verdict is
// reachable. On failure, reports a reachable state that never reaches one.
bool decisive_everywhere(const MonitorFsm& fsm, FsmVerdict wanted,
                         std::optional<std::uint32_t>& dead_state) {
  std::size_t n = fsm.state_count();
  std::vector<bool> reachable(n, false);
  std::deque<std::uint32_t> queue{fsm.initial_state()};
  reachable[fsm.initial_state()] = true;
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < fsm.letter_count(); ++l) {
      std::uint32_t t = fsm.next(s, l);
      if (!reachable[t]) {
        reachable[t] = true;
        queue.push_back(t);
      }
    }
  }
  // Backward closure of the decisive states.
  std::vector<std::vector<std::uint32_t>> rev(n);
  for (std::uint32_t s = 0; s < n; ++s)
    for (std::size_t l = 0; l < fsm.letter_count(); ++l) rev[fsm.next(s, l)].push_back(s);
  std::vector<bool> can_decide(n, false);
  std::deque<std::uint32_t> q2;
  for (std::uint32_t s = 0; s < n; ++s)
    if (fsm.verdict(s) == wanted) {
      can_decide[s] = true;
      q2.push_back(s);
    }
  while (!q2.empty()) {
    std::uint32_t s = q2.front();
    q2.pop_front();
    for (std::uint32_t p : rev[s])
      if (!can_decide[p]) {
        can_decide[p] = true;
        q2.push_back(p);
      }
  }
  for (std::uint32_t s = 0; s < n; ++s)
    if (reachable[s] && !can_decide[s]) {
      dead_state = s;
      return false;
    }
  return true;
}

}  // namespace

MonitorabilityReport check_monitorable_unbounded(const QuantifiedFormula& phi,
                                                 std::size_t state_cap) {
  if (!phi.alternation_free())
    throw std::invalid_argument("check_monitorable_unbounded requires an alternation-free prefix");
  FormulaArena& ar = *phi.arena;
  FormulaId core = desugar(ar, phi.body);
  bool universal = phi.prefix.empty() || phi.prefix[0].first == Quantifier::Forall;

  MonitorabilityReport report{};
  if (universal) {
    // A valid body makes every prefix set a good prefix.
    if (!is_satisfiable(ar, ar.not_(core), state_cap).satisfiable) {
      report.result = MonitorabilityResult::Monitorable;
      report.reason = MonitorabilityReason::BodyValid;
      return report;
    }
  } else {
    // Dually, an unsatisfiable body makes every prefix set a bad prefix.
    if (!is_satisfiable(ar, core, state_cap).satisfiable) {
      report.result = MonitorabilityResult::Monitorable;
      report.reason = MonitorabilityReason::BodyValid;
      return report;
    }
  }

  MonitorFsm fsm = build_fsm_monitor(ar, core, state_cap);
  report.fsm_states = fsm.state_count();
  FsmVerdict wanted = universal ? FsmVerdict::Bottom : FsmVerdict::Top;
  if (decisive_everywhere(fsm, wanted, report.dead_state)) {
    report.result = MonitorabilityResult::Monitorable;
    report.reason = universal ? MonitorabilityReason::BadReachableEverywhere
                              : MonitorabilityReason::GoodReachableEverywhere;
  } else {
    report.result = MonitorabilityResult::NotMonitorable;
    report.reason = MonitorabilityReason::DeadRegion;
  }
  return report;
}

MonitorabilityReport classify_model_support(const QuantifiedFormula& phi, const InputModel& model,
                                            std::size_t state_cap) {
  MonitorabilityReport report{};
  if (model.kind != InputModelKind::Unbounded) {
    // The bounded and parallel models have known complexity but no
    // implemented decision procedure.
    report.result = MonitorabilityResult::Unsupported;
    report.reason = MonitorabilityReason::ModelUnsupported;
    return report;
  }
  if (phi.alternation_free()) return check_monitorable_unbounded(phi, state_cap);
  if (phi.shape() == PrefixShape::ForallExists) {
    // A fresh trace that triggers the forall obligations while no stored
    // trace answers the exists side always exists.
    report.result = MonitorabilityResult::NotMonitorable;
    report.reason = MonitorabilityReason::Alternating;
    return report;
  }
  report.result = MonitorabilityResult::Unsupported;
  report.reason = MonitorabilityReason::Alternating;
  return report;
}

std::string describe(const MonitorabilityReport& r) {
  std::string out;
  switch (r.result) {
    case MonitorabilityResult::Monitorable: out = "monitorable"; break;
    case MonitorabilityResult::NotMonitorable: out = "not monitorable"; break;
    case MonitorabilityResult::Unsupported: out = "unsupported"; break;
  }
  out += " (";
  switch (r.reason) {
    case MonitorabilityReason::BodyValid: out += "body decides trivially"; break;
    case MonitorabilityReason::BadReachableEverywhere: out += "bad prefix reachable everywhere"; break;
    case MonitorabilityReason::GoodReachableEverywhere:
      out += "good prefix reachable everywhere";
      break;
    case MonitorabilityReason::DeadRegion:
      out += "dead region";
      if (r.dead_state) out += " at state " + std::to_string(*r.dead_state);
      break;
    case MonitorabilityReason::Alternating: out += "quantifier alternation"; break;
    case MonitorabilityReason::ModelUnsupported: out += "model unsupported"; break;
  }
  out += ")";
  return out;
}

}  // namespace hypermon
