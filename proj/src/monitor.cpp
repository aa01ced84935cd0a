#include "hypermon/monitor.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

namespace hypermon {

namespace {

constexpr std::uint32_t kNoTrueState = 0xfffffffeu;

// Elementary subformulas (atoms, X, U) in deterministic post-order.
void collect_obligations(const FormulaArena& ar, FormulaId id, std::vector<FormulaId>& out,
                         std::unordered_map<FormulaId, std::uint32_t>& index) {
  const FormulaNode& n = ar.node(id);
  if (n.kid[0] != kNoFormula) collect_obligations(ar, n.kid[0], out, index);
  if (n.kid[1] != kNoFormula) collect_obligations(ar, n.kid[1], out, index);
  if (n.op == Op::Atom || n.op == Op::Next || n.op == Op::Until) {
    if (!index.count(id)) {
      index.emplace(id, static_cast<std::uint32_t>(out.size()));
      out.push_back(id);
    }
  }
}

}  // namespace

std::optional<std::size_t> MonitorTemplate::ap_index(const std::string& ap) const {
  auto it = std::lower_bound(ap_set_.begin(), ap_set_.end(), ap);
  if (it == ap_set_.end() || *it != ap) return std::nullopt;
  return static_cast<std::size_t>(it - ap_set_.begin());
}

std::optional<std::size_t> MonitorTemplate::var_index(const TraceVariable& v) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == v) return i;
  return std::nullopt;
}

MonitorTemplate MonitorTemplate::build_for(const QuantifiedFormula& phi,
                                           const MonitorBuildOptions& opts) {
  FormulaId core = desugar(*phi.arena, phi.body);
  return build(phi.arena, core, phi.variables(), phi.ap_set, opts);
}

MonitorTemplate MonitorTemplate::build(std::shared_ptr<FormulaArena> arena, FormulaId core_body,
                                       std::vector<TraceVariable> vars,
                                       std::vector<std::string> ap_set,
                                       const MonitorBuildOptions& opts) {
  if (!is_core(*arena, core_body))
    throw std::invalid_argument("build expects a core body; desugar first");
  MonitorTemplate t;
  t.arena_ = std::move(arena);
  t.bdd_ = std::make_shared<BddManager>();
  t.vars_ = std::move(vars);
  t.ap_set_ = std::move(ap_set);
  std::sort(t.ap_set_.begin(), t.ap_set_.end());
  t.ap_set_.erase(std::unique(t.ap_set_.begin(), t.ap_set_.end()), t.ap_set_.end());

  const FormulaArena& ar = *t.arena_;
  BddManager& B = *t.bdd_;

  std::size_t letters = t.vars_.size() * t.ap_set_.size();
  if (letters > 64) throw std::invalid_argument("alphabet 2^(AP x V) exceeds 64 atom bits");
  t.letter_vars_ = static_cast<std::uint32_t>(letters);

  std::unordered_map<FormulaId, std::uint32_t> obl_index;
  collect_obligations(ar, core_body, t.obligations_, obl_index);

  auto letter_var_of = [&](FormulaId atom) -> std::uint32_t {
    const FormulaNode& n = ar.node(atom);
    auto vi = t.var_index(TraceVariable{ar.var_name(n.var)});
    auto ai = t.ap_index(ar.ap_name(n.ap));
    if (!vi || !ai)
      throw std::invalid_argument("atom " + print_expr(ar, atom) +
                                  " outside the declared variable/AP sets");
    return t.letter_var(*vi, *ai);
  };
  auto obl_var = [&](FormulaId f) { return t.letter_vars_ + obl_index.at(f); };

  // Residual skeleton: Boolean structure flattened, elementary subformulas
  // as obligation variables.
  std::unordered_map<FormulaId, Bdd> skel_memo;
  std::function<Bdd(FormulaId)> skeleton = [&](FormulaId f) -> Bdd {
    auto it = skel_memo.find(f);
    if (it != skel_memo.end()) return it->second;
    const FormulaNode& n = ar.node(f);
    Bdd r;
    switch (n.op) {
      case Op::True: r = BddManager::kTrue; break;
      case Op::Atom:
      case Op::Next:
      case Op::Until: r = B.var(obl_var(f)); break;
      case Op::Not: r = B.not_(skeleton(n.kid[0])); break;
      case Op::Or: r = B.or_(skeleton(n.kid[0]), skeleton(n.kid[1])); break;
      default: throw std::invalid_argument("non-core constructor in monitor body");
    }
    skel_memo.emplace(f, r);
    return r;
  };

  // One-letter progression of a formula: atoms resolve to letter variables,
  // X yields its operand as next obligation, U unfolds one step.
  std::unordered_map<FormulaId, Bdd> prog_memo;
  std::function<Bdd(FormulaId)> progsym = [&](FormulaId f) -> Bdd {
    auto it = prog_memo.find(f);
    if (it != prog_memo.end()) return it->second;
    const FormulaNode& n = ar.node(f);
    Bdd r;
    switch (n.op) {
      case Op::True: r = BddManager::kTrue; break;
      case Op::Atom: r = B.var(letter_var_of(f)); break;
      case Op::Not: r = B.not_(progsym(n.kid[0])); break;
      case Op::Or: r = B.or_(progsym(n.kid[0]), progsym(n.kid[1])); break;
      case Op::Next: r = skeleton(n.kid[0]); break;
      case Op::Until:
        r = B.or_(progsym(n.kid[1]), B.and_(progsym(n.kid[0]), B.var(obl_var(f))));
        break;
      default: throw std::invalid_argument("non-core constructor in monitor body");
    }
    prog_memo.emplace(f, r);
    return r;
  };

  std::vector<Bdd> obl_prog(t.obligations_.size());
  for (std::size_t i = 0; i < t.obligations_.size(); ++i) obl_prog[i] = progsym(t.obligations_[i]);

  Bdd q0 = skeleton(core_body);
  t.initial_dead_ = (q0 == BddManager::kFalse);

  std::unordered_map<Bdd, std::uint32_t> state_of;
  auto add_state = [&](Bdd residual) -> std::uint32_t {
    auto it = state_of.find(residual);
    if (it != state_of.end()) return it->second;
    if (t.residuals_.size() >= opts.state_cap) throw StateExplosion(opts.state_cap);
    std::uint32_t id = static_cast<std::uint32_t>(t.residuals_.size());
    state_of.emplace(residual, id);
    t.residuals_.push_back(residual);
    t.transitions_.emplace_back();
    return id;
  };

  t.initial_ = add_state(q0);
  auto subst = [&](std::uint32_t v) -> std::optional<Bdd> {
    if (v < t.letter_vars_) return std::nullopt;
    return obl_prog[v - t.letter_vars_];
  };

  for (std::uint32_t s = 0; s < t.residuals_.size(); ++s) {
    Bdd res = t.residuals_[s];
    if (res == BddManager::kFalse) continue;  // dead initial only
    Bdd succ_fn = B.compose(res, subst);
    for (Bdd target : B.cofactors_below(succ_fn, t.letter_vars_)) {
      if (target == BddManager::kFalse) continue;
      Bdd guard = B.cofactor_guard(succ_fn, t.letter_vars_, target);
      std::uint32_t dest = add_state(target);
      t.transitions_[s].push_back(Transition{Guard{guard}, dest});
    }
  }
  auto it_true = state_of.find(BddManager::kTrue);
  t.true_state_ = it_true != state_of.end() ? it_true->second : kNoTrueState;
  return t;
}

std::uint64_t MonitorTemplate::step_bits(const Step& s, std::size_t var_index) const {
  std::uint64_t bits = 0;
  for (const std::string& ap : s.props) {
    auto ai = ap_index(ap);
    if (ai) bits |= 1ull << letter_var(var_index, *ai);
  }
  return bits;
}

std::optional<std::uint32_t> MonitorTemplate::step(std::uint32_t state,
                                                   std::uint64_t letter_bits) const {
  for (const Transition& tr : transitions_[state])
    if (bdd_->eval_mask(tr.guard.fn, letter_bits)) return tr.target;
  return std::nullopt;
}

bool MonitorTemplate::accepts_tuple(const TraceTuple& n) const {
  if (n.arity() != vars_.size()) throw ArityMismatch(n.arity(), vars_.size());
  std::size_t m = n.min_length();
  std::uint32_t state = initial_;
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < n.entries.size(); ++j) bits |= step_bits(n.entries[j]->steps[i], j);
    auto next = step(state, bits);
    if (!next) return false;
    state = *next;
  }
  return true;
}

InstantiatedMonitor MonitorTemplate::instantiate(
    const std::map<TraceVariable, TracePtr>& binding) const {
  for (auto& [v, tr] : binding)
    if (!var_index(v))
      throw std::invalid_argument("binding names unknown trace variable " + v.name);
  return InstantiatedMonitor(this, binding);
}

std::string MonitorTemplate::state_label(std::uint32_t state) const {
  const FormulaArena& ar = *arena_;
  auto lit = [&](std::uint32_t v, bool pos) {
    std::string body = print_expr(ar, obligations_[v - letter_vars_]);
    return pos ? body : "!(" + body + ")";
  };
  return bdd_->to_dnf_string(residuals_[state], lit);
}

std::string MonitorTemplate::dump() const {
  std::string out;
  auto atom_lit = [&](std::uint32_t v, bool pos) {
    std::size_t vi = v / ap_set_.size(), ai = v % ap_set_.size();
    std::string a = ap_set_[ai] + "[" + vars_[vi].name + "]";
    return pos ? a : "!" + a;
  };
  out += "states: " + std::to_string(state_count()) + "\n";
  for (std::uint32_t s = 0; s < state_count(); ++s) {
    out += "  q" + std::to_string(s);
    if (s == initial_) out += " (initial)";
    out += ": " + state_label(s) + "\n";
    for (const Transition& tr : transitions_[s]) {
      out += "    --[" + bdd_->to_dnf_string(tr.guard.fn, atom_lit) + "]--> q" +
             std::to_string(tr.target) + "\n";
    }
  }
  return out;
}

// --- InstantiatedMonitor ------------------------------------------------------

InstantiatedMonitor::InstantiatedMonitor(const MonitorTemplate* t,
                                         std::map<TraceVariable, TracePtr> binding)
    : tmpl_(t), binding_(std::move(binding)) {
  for (const TraceVariable& v : t->vars()) {
    auto it = binding_.find(v);
    if (it == binding_.end()) {
      free_vars_.push_back(v);
    } else {
      bound_var_indices_.push_back(*t->var_index(v));
      std::size_t len = it->second->length();
      horizon_ = horizon_ ? std::min(*horizon_, len) : len;
    }
  }
}

const std::vector<InstantiatedMonitor::FreeTransition>& InstantiatedMonitor::restricted(
    std::uint32_t state, std::size_t pos) const {
  static const std::vector<FreeTransition> kEmpty;
  if (sink_at(pos)) return kEmpty;
  std::size_t stage = pos;
  if (!horizon_) stage = 0;  // unbounded instantiations are position-independent
  auto key = std::make_pair(state, stage);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  BddManager& B = tmpl_->bdd();
  std::vector<FreeTransition> out;
  for (const MonitorTemplate::Transition& tr : tmpl_->transitions(state)) {
    Bdd g = tr.guard.fn;
    for (std::size_t vi : bound_var_indices_) {
      const TracePtr& trace = binding_.at(tmpl_->vars()[vi]);
      const Step& s = trace->steps[pos];
      for (std::size_t ai = 0; ai < tmpl_->ap_set().size(); ++ai) {
        bool val = s.contains(tmpl_->ap_set()[ai]);
        g = B.restrict_var(g, tmpl_->letter_var(vi, ai), val);
        if (g == BddManager::kFalse) break;
      }
      if (g == BddManager::kFalse) break;
    }
    if (g != BddManager::kFalse) out.push_back(FreeTransition{g, tr.target});
  }
  return cache_.emplace(key, std::move(out)).first->second;
}

bool InstantiatedMonitor::accepts_word(const ZippedWord& w) const {
  std::size_t steps = w.length();
  if (horizon_) steps = std::min(steps, *horizon_);
  std::uint32_t state = tmpl_->initial_state();
  for (std::size_t i = 0; i < steps; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t vi : bound_var_indices_)
      bits |= tmpl_->step_bits(binding_.at(tmpl_->vars()[vi])->steps[i], vi);
    for (const IndexedAtom& a : w.letters[i].atoms) {
      auto v = tmpl_->var_index(a.var);
      auto ap = tmpl_->ap_index(a.ap);
      if (!v || !ap) continue;
      bool is_free = std::find(free_vars_.begin(), free_vars_.end(), a.var) != free_vars_.end();
      if (is_free) bits |= 1ull << tmpl_->letter_var(*v, *ap);
    }
    auto next = tmpl_->step(state, bits);
    if (!next) return false;
    state = *next;
  }
  return true;
}

// --- language inclusion -------------------------------------------------------

namespace {

constexpr std::uint32_t kSink = 0xffffffffu;

struct ProductNode {
  std::uint32_t qa, qb;
  std::size_t pos;
  std::int64_t parent;  // index into the exploration log, -1 for root
  Bdd letter;           // guard of the edge into this node, in a's manager
};

ZippedLetter letter_from_guard(const MonitorTemplate& tpl,
                               const std::vector<TraceVariable>& free_vars, Bdd guard) {
  BddManager& B = tpl.bdd();
  std::vector<IndexedAtom> atoms;
  auto assignment = B.sat_one(guard);
  if (assignment) {
    for (auto& [v, val] : *assignment) {
      if (!val) continue;
      std::size_t vi = v / tpl.ap_set().size(), ai = v % tpl.ap_set().size();
      const TraceVariable& var = tpl.vars()[vi];
      if (std::find(free_vars.begin(), free_vars.end(), var) != free_vars.end())
        atoms.push_back(IndexedAtom{tpl.ap_set()[ai], var});
    }
  }
  return ZippedLetter(std::move(atoms));
}

}  // namespace

InclusionResult language_inclusion(const InstantiatedMonitor& a, const InstantiatedMonitor& b) {
  if (a.free_vars() != b.free_vars() || a.tmpl().ap_set() != b.tmpl().ap_set())
    throw std::invalid_argument("language_inclusion requires equal free variables and AP set");

  const bool shared_manager = &a.tmpl().bdd() == &b.tmpl().bdd() &&
                              a.tmpl().letter_var_count() == b.tmpl().letter_var_count() &&
                              a.tmpl().vars() == b.tmpl().vars();
  BddManager& BA = a.tmpl().bdd();
  BddManager& BB = b.tmpl().bdd();

  // Rebuilds a guard from b's manager in a's manager, remapping free letter
  // variables by (variable name, AP name). Bound-variable atoms are already
  // restricted away.
  std::function<Bdd(Bdd)> import_b = [&](Bdd g) -> Bdd {
    if (shared_manager) return g;
    if (BB.is_terminal(g)) return g;
    std::uint32_t v = BB.top_var(g);
    std::size_t vi = v / b.tmpl().ap_set().size(), ai = v % b.tmpl().ap_set().size();
    auto avi = a.tmpl().var_index(b.tmpl().vars()[vi]);
    std::uint32_t av = a.tmpl().letter_var(*avi, ai);
    Bdd lo = import_b(BB.restrict_var(g, v, false));
    Bdd hi = import_b(BB.restrict_var(g, v, true));
    return BA.ite(BA.var(av), hi, lo);
  };

  std::size_t stationary = 0;
  if (a.horizon()) stationary = std::max(stationary, *a.horizon());
  if (b.horizon()) stationary = std::max(stationary, *b.horizon());

  std::vector<ProductNode> log;
  std::deque<std::size_t> queue;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::size_t>, bool> visited;

  auto normalize = [](const InstantiatedMonitor& m, std::uint32_t q, std::size_t pos) {
    return m.sink_at(pos) ? kSink : q;
  };

  auto enqueue = [&](std::uint32_t qa, std::uint32_t qb, std::size_t pos, std::int64_t parent,
                     Bdd letter) {
    auto key = std::make_tuple(qa, qb, std::min(pos, stationary));
    if (visited.count(key)) return;
    visited[key] = true;
    log.push_back(ProductNode{qa, qb, pos, parent, letter});
    queue.push_back(log.size() - 1);
  };

  auto make_cex = [&](std::int64_t parent, Bdd final_letter) {
    std::vector<Bdd> guards{final_letter};
    for (std::int64_t i = parent; i >= 0; i = log[i].parent)
      if (log[i].parent >= 0) guards.push_back(log[i].letter);
    std::reverse(guards.begin(), guards.end());
    ZippedWord w;
    for (Bdd g : guards) w.letters.push_back(letter_from_guard(a.tmpl(), a.free_vars(), g));
    return w;
  };

  enqueue(normalize(a, a.tmpl().initial_state(), 0), normalize(b, b.tmpl().initial_state(), 0), 0,
          -1, BddManager::kFalse);

  while (!queue.empty()) {
    std::size_t ni = queue.front();
    queue.pop_front();
    ProductNode node = log[ni];
    std::uint32_t qa = node.qa, qb = node.qb;
    std::size_t pos = node.pos;

    // Everything is accepted by b from here on.
    if (qb == kSink) continue;
    if (qb == b.tmpl().true_state()) continue;

    Bdd b_any = BddManager::kFalse;
    std::vector<std::pair<Bdd, std::uint32_t>> b_moves;
    for (const auto& tr : b.restricted(qb, pos)) {
      Bdd g = import_b(tr.guard);
      b_any = BA.or_(b_any, g);
      b_moves.emplace_back(g, tr.target);
    }
    Bdd b_missing = BA.not_(b_any);

    if (qa == kSink) {
      if (b_missing != BddManager::kFalse)
        return InclusionResult{false, make_cex(static_cast<std::int64_t>(ni), b_missing)};
      for (auto& [g, tb] : b_moves)
        enqueue(kSink, normalize(b, tb, pos + 1), pos + 1, static_cast<std::int64_t>(ni), g);
      continue;
    }

    for (const auto& ta : a.restricted(qa, pos)) {
      Bdd dies = BA.and_(ta.guard, b_missing);
      if (dies != BddManager::kFalse)
        return InclusionResult{false, make_cex(static_cast<std::int64_t>(ni), dies)};
      for (auto& [g, tb] : b_moves) {
        Bdd both = BA.and_(ta.guard, g);
        if (both == BddManager::kFalse) continue;
        enqueue(normalize(a, ta.target, pos + 1), normalize(b, tb, pos + 1), pos + 1,
                static_cast<std::int64_t>(ni), both);
      }
    }
  }
  return InclusionResult{true, std::nullopt};
}

}  // namespace hypermon
