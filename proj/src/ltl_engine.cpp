#include "hypermon/ltl_engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace hypermon {

std::size_t Closure::index_of(FormulaId f) const {
  for (std::size_t i = 0; i < subformulas.size(); ++i)
    if (subformulas[i] == f) return i;
  throw std::out_of_range("formula not in closure");
}

bool Closure::contains(FormulaId f) const {
  return std::find(subformulas.begin(), subformulas.end(), f) != subformulas.end();
}

Closure compute_closure(const FormulaArena& ar, FormulaId core) {
  Closure c;
  std::set<FormulaId> seen;
  std::function<void(FormulaId)> go = [&](FormulaId f) {
    if (seen.count(f)) return;
    seen.insert(f);
    const FormulaNode& n = ar.node(f);
    if (n.kid[0] != kNoFormula) go(n.kid[0]);
    if (n.kid[1] != kNoFormula) go(n.kid[1]);
    c.subformulas.push_back(f);
  };
  go(core);
  return c;
}

// --- negation normal form with light simplification ---------------------------

namespace {

struct Nnf {
  FormulaArena& ar;

  FormulaId s_not(FormulaId a) {
    const FormulaNode& n = ar.node(a);
    if (n.op == Op::True) return ar.truth(false);
    if (n.op == Op::False) return ar.truth(true);
    if (n.op == Op::Not) return n.kid[0];
    return ar.not_(a);
  }
  FormulaId s_or(FormulaId a, FormulaId b) {
    if (ar.node(a).op == Op::True || ar.node(b).op == Op::True) return ar.truth(true);
    if (ar.node(a).op == Op::False) return b;
    if (ar.node(b).op == Op::False) return a;
    if (a == b) return a;
    if (a == s_not(b)) return ar.truth(true);
    return ar.or_(a, b);
  }
  FormulaId s_and(FormulaId a, FormulaId b) {
    if (ar.node(a).op == Op::False || ar.node(b).op == Op::False) return ar.truth(false);
    if (ar.node(a).op == Op::True) return b;
    if (ar.node(b).op == Op::True) return a;
    if (a == b) return a;
    if (a == s_not(b)) return ar.truth(false);
    return ar.and_(a, b);
  }
  FormulaId s_next(FormulaId a) {
    if (ar.node(a).op == Op::True || ar.node(a).op == Op::False) return a;
    return ar.next(a);
  }
  FormulaId s_until(FormulaId a, FormulaId b) {
    const Op ob = ar.node(b).op;
    if (ob == Op::True || ob == Op::False) return b;
    if (ar.node(a).op == Op::False) return b;
    if (a == b) return a;
    return ar.until(a, b);
  }
  FormulaId s_weak(FormulaId a, FormulaId b) {
    if (ar.node(a).op == Op::True || ar.node(b).op == Op::True) return ar.truth(true);
    if (ar.node(a).op == Op::False) return b;
    if (a == b) return a;
    return ar.weak_until(a, b);
  }

  FormulaId run(FormulaId f, bool positive) {
    // Copy: creating nodes below may reallocate the arena.
    const FormulaNode n = ar.node(f);
    switch (n.op) {
      case Op::True: return ar.truth(positive);
      case Op::False: return ar.truth(!positive);
      case Op::Atom: return positive ? f : ar.not_(f);
      case Op::Not: return run(n.kid[0], !positive);
      case Op::Or: {
        FormulaId a = run(n.kid[0], positive), b = run(n.kid[1], positive);
        return positive ? s_or(a, b) : s_and(a, b);
      }
      case Op::Next: return s_next(run(n.kid[0], positive));
      case Op::Until: {
        if (positive) return s_until(run(n.kid[0], true), run(n.kid[1], true));
        // not (a U b) == (not b) W (not b and not a)
        FormulaId na = run(n.kid[0], false), nb = run(n.kid[1], false);
        return s_weak(nb, s_and(nb, na));
      }
      default:
        throw std::invalid_argument("build_gba expects a core body; desugar first");
    }
  }
};

// Tableau node of the expansion.
struct ExpNode {
  std::set<std::uint32_t> incoming;
  std::set<FormulaId> new_, old, next;
};

constexpr std::uint32_t kInit = 0xffffffffu;

struct Expansion {
  const FormulaArena& ar;
  std::size_t cap;
  std::vector<ExpNode> done;
  std::map<std::pair<std::set<FormulaId>, std::set<FormulaId>>, std::uint32_t> done_index;
  std::deque<ExpNode> pending;

  bool contradicts(const std::set<FormulaId>& old, FormulaId literal) const {
    const FormulaNode& n = ar.node(literal);
    if (n.op == Op::Not) return old.count(n.kid[0]) > 0;
    for (FormulaId g : old) {
      const FormulaNode& m = ar.node(g);
      if (m.op == Op::Not && m.kid[0] == literal) return true;
    }
    return false;
  }

  void run(ExpNode init) {
    process(std::move(init));
    while (!pending.empty()) {
      ExpNode n = std::move(pending.front());
      pending.pop_front();
      process(std::move(n));
    }
  }

  // Recursion depth is bounded by the closure size; successor states go
  // through the pending queue.
  void process(ExpNode node) {
    if (node.new_.empty()) {
      auto key = std::make_pair(node.old, node.next);
      auto it = done_index.find(key);
      if (it != done_index.end()) {
        done[it->second].incoming.insert(node.incoming.begin(), node.incoming.end());
        return;
      }
      if (done.size() >= cap) throw StateExplosion(cap);
      std::uint32_t id = static_cast<std::uint32_t>(done.size());
      done.push_back(node);
      done_index.emplace(key, id);
      ExpNode succ;
      succ.incoming = {id};
      succ.new_ = node.next;
      pending.push_back(std::move(succ));
      return;
    }
    FormulaId f = *node.new_.begin();
    node.new_.erase(node.new_.begin());
    if (node.old.count(f)) {
      process(std::move(node));
      return;
    }
    const FormulaNode& n = ar.node(f);
    switch (n.op) {
      case Op::True:
        node.old.insert(f);
        process(std::move(node));
        return;
      case Op::False: return;  // inconsistent, discard
      case Op::Atom:
      case Op::Not: {  // literals in normal form
        if (contradicts(node.old, f)) return;
        node.old.insert(f);
        process(std::move(node));
        return;
      }
      case Op::And: {
        node.old.insert(f);
        if (!node.old.count(n.kid[0])) node.new_.insert(n.kid[0]);
        if (!node.old.count(n.kid[1])) node.new_.insert(n.kid[1]);
        process(std::move(node));
        return;
      }
      case Op::Or: {
        ExpNode left = node, right = std::move(node);
        left.old.insert(f);
        right.old.insert(f);
        if (!left.old.count(n.kid[0])) left.new_.insert(n.kid[0]);
        if (!right.old.count(n.kid[1])) right.new_.insert(n.kid[1]);
        process(std::move(left));
        process(std::move(right));
        return;
      }
      case Op::Next: {
        node.old.insert(f);
        node.next.insert(n.kid[0]);
        process(std::move(node));
        return;
      }
      case Op::Until:
      case Op::WeakUntil: {
        ExpNode fulfill = node, postpone = std::move(node);
        fulfill.old.insert(f);
        postpone.old.insert(f);
        if (!fulfill.old.count(n.kid[1])) fulfill.new_.insert(n.kid[1]);
        if (!postpone.old.count(n.kid[0])) postpone.new_.insert(n.kid[0]);
        postpone.next.insert(f);
        process(std::move(fulfill));
        process(std::move(postpone));
        return;
      }
      default:
        throw std::invalid_argument("unexpected constructor in tableau expansion");
    }
  }
};

}  // namespace

GeneralizedBuchi build_gba(FormulaArena& ar, FormulaId core_body, std::size_t state_cap) {
  Nnf nnf{ar};
  FormulaId root = nnf.run(core_body, true);

  Expansion exp{ar, state_cap, {}, {}, {}};
  if (ar.node(root).op != Op::False) {
    ExpNode init;
    init.incoming = {kInit};
    init.new_ = {root};
    exp.run(std::move(init));
  }

  GeneralizedBuchi gba;
  gba.states.resize(exp.done.size());
  for (std::uint32_t s = 0; s < exp.done.size(); ++s) {
    const ExpNode& nd = exp.done[s];
    GeneralizedBuchi::State& st = gba.states[s];
    st.old_set.assign(nd.old.begin(), nd.old.end());
    for (FormulaId f : nd.old) {
      const FormulaNode& n = ar.node(f);
      if (n.op == Op::Atom) st.pos.push_back(ar.atom_of(f));
      if (n.op == Op::Not && ar.node(n.kid[0]).op == Op::Atom)
        st.neg.push_back(ar.atom_of(n.kid[0]));
    }
    std::sort(st.pos.begin(), st.pos.end());
    std::sort(st.neg.begin(), st.neg.end());
    for (std::uint32_t in : nd.incoming) {
      if (in == kInit)
        gba.initial.push_back(s);
      else
        gba.states[in].succ.push_back(s);
    }
  }
  for (auto& st : gba.states) {
    std::sort(st.succ.begin(), st.succ.end());
    st.succ.erase(std::unique(st.succ.begin(), st.succ.end()), st.succ.end());
  }
  std::sort(gba.initial.begin(), gba.initial.end());

  // Acceptance: one family per Until of the normal form.
  Closure cl = compute_closure(ar, root);
  for (FormulaId f : cl.subformulas)
    if (ar.node(f).op == Op::Until) gba.until_subformulas.push_back(f);
  for (FormulaId u : gba.until_subformulas) {
    FormulaId rhs = ar.node(u).kid[1];
    std::vector<std::uint32_t> family;
    for (std::uint32_t s = 0; s < gba.states.size(); ++s) {
      const auto& old = exp.done[s].old;
      if (!old.count(u) || old.count(rhs)) family.push_back(s);
    }
    gba.acceptance_families.push_back(std::move(family));
  }

  std::set<IndexedAtom> atoms;
  for (const IndexedAtom& a : collect_atoms(ar, root)) atoms.insert(a);
  gba.atoms.assign(atoms.begin(), atoms.end());
  return gba;
}

bool GeneralizedBuchi::letter_compatible(std::uint32_t state, const ZippedLetter& letter) const {
  const State& st = states[state];
  for (const IndexedAtom& a : st.pos)
    if (!letter.contains(a.ap, a.var.name)) return false;
  for (const IndexedAtom& a : st.neg)
    if (letter.contains(a.ap, a.var.name)) return false;
  return true;
}

ZippedLetter GeneralizedBuchi::canonical_letter(std::uint32_t state) const {
  return ZippedLetter(states[state].pos);
}

namespace {

struct SccResult {
  std::vector<std::int32_t> comp;  // state -> component id
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<bool> has_cycle;
};

SccResult tarjan(const std::vector<GeneralizedBuchi::State>& states) {
  const std::size_t n = states.size();
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<std::int32_t> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::int32_t counter = 0;

  // Iterative Tarjan.
  struct Frame {
    std::uint32_t v;
    std::size_t child;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.child < states[fr.v].succ.size()) {
        std::uint32_t w = states[fr.v].succ[fr.child++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        std::uint32_t v = fr.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<std::uint32_t> members;
          for (;;) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            r.comp[w] = static_cast<std::int32_t>(r.members.size());
            members.push_back(w);
            if (w == v) break;
          }
          std::sort(members.begin(), members.end());
          r.members.push_back(std::move(members));
        }
      }
    }
  }
  r.has_cycle.assign(r.members.size(), false);
  for (std::size_t c = 0; c < r.members.size(); ++c) {
    if (r.members[c].size() > 1) {
      r.has_cycle[c] = true;
      continue;
    }
    std::uint32_t v = r.members[c][0];
    for (std::uint32_t w : states[v].succ)
      if (w == v) r.has_cycle[c] = true;
  }
  return r;
}

std::vector<bool> fair_components(const GeneralizedBuchi& gba, const SccResult& scc) {
  std::vector<bool> fair(scc.members.size(), false);
  for (std::size_t c = 0; c < scc.members.size(); ++c) {
    if (!scc.has_cycle[c]) continue;
    bool ok = true;
    for (const auto& family : gba.acceptance_families) {
      bool hit = false;
      for (std::uint32_t s : family)
        if (scc.comp[s] == static_cast<std::int32_t>(c)) {
          hit = true;
          break;
        }
      if (!hit) {
        ok = false;
        break;
      }
    }
    fair[c] = ok;
  }
  return fair;
}

}  // namespace

std::vector<bool> GeneralizedBuchi::live_states() const {
  SccResult scc = tarjan(states);
  std::vector<bool> fair = fair_components(*this, scc);
  std::vector<bool> live(states.size(), false);
  std::deque<std::uint32_t> queue;
  std::vector<std::vector<std::uint32_t>> rev(states.size());
  for (std::uint32_t s = 0; s < states.size(); ++s)
    for (std::uint32_t w : states[s].succ) rev[w].push_back(s);
  for (std::uint32_t s = 0; s < states.size(); ++s)
    if (fair[scc.comp[s]]) {
      live[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::uint32_t p : rev[s])
      if (!live[p]) {
        live[p] = true;
        queue.push_back(p);
      }
  }
  return live;
}

namespace {

// Shortest path from `from` to a target, optionally confined to one SCC.
// Returns the node sequence starting at `from`; empty when unreachable.
std::vector<std::uint32_t> bfs_path(const GeneralizedBuchi& gba, std::uint32_t from,
                                    const std::function<bool(std::uint32_t)>& is_target,
                                    const std::int32_t* comp, std::int32_t confine) {
  std::vector<std::int32_t> parent(gba.states.size(), -2);
  std::deque<std::uint32_t> queue{from};
  parent[from] = -1;
  // A path of length zero counts when `from` is a target.
  if (is_target(from)) return {from};
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t w : gba.states[v].succ) {
      if (confine >= 0 && comp[w] != confine) continue;
      if (parent[w] != -2) continue;
      parent[w] = static_cast<std::int32_t>(v);
      if (is_target(w)) {
        std::vector<std::uint32_t> path{w};
        std::int32_t cur = static_cast<std::int32_t>(v);
        while (cur != -1) {
          path.push_back(static_cast<std::uint32_t>(cur));
          cur = parent[cur];
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return {};
}

// Nonempty cycle from `anchor` back to itself inside its SCC, visiting
// every acceptance family.
std::vector<std::uint32_t> fair_cycle(const GeneralizedBuchi& gba, const SccResult& scc,
                                      std::uint32_t anchor) {
  std::int32_t c = scc.comp[anchor];
  std::vector<std::uint32_t> walk{anchor};
  for (const auto& family : gba.acceptance_families) {
    std::set<std::uint32_t> targets;
    for (std::uint32_t s : family)
      if (scc.comp[s] == c) targets.insert(s);
    auto seg = bfs_path(
        gba, walk.back(), [&](std::uint32_t s) { return targets.count(s) > 0; },
        scc.comp.data(), c);
    for (std::size_t i = 1; i < seg.size(); ++i) walk.push_back(seg[i]);
  }
  if (walk.size() == 1) {
    // Still at the anchor; force one move through the component.
    bool self_loop = false;
    for (std::uint32_t w : gba.states[anchor].succ)
      if (w == anchor) self_loop = true;
    if (self_loop) return {anchor};
    for (std::uint32_t w : gba.states[anchor].succ) {
      if (scc.comp[w] != c) continue;
      walk.push_back(w);
      break;
    }
  }
  if (walk.back() != anchor) {
    auto back = bfs_path(
        gba, walk.back(), [&](std::uint32_t s) { return s == anchor; }, scc.comp.data(), c);
    for (std::size_t i = 1; i < back.size(); ++i) walk.push_back(back[i]);
    walk.pop_back();  // anchor closes the loop, do not duplicate it
  } else if (walk.size() > 1) {
    walk.pop_back();
  }
  return walk;
}

}  // namespace

SatResult is_satisfiable(FormulaArena& ar, FormulaId core_body, std::size_t state_cap) {
  GeneralizedBuchi gba = build_gba(ar, core_body, state_cap);
  if (gba.initial.empty()) return SatResult{false, std::nullopt};
  SccResult scc = tarjan(gba.states);
  std::vector<bool> fair = fair_components(gba, scc);

  bool any_fair = false;
  for (bool f : fair) any_fair = any_fair || f;
  if (!any_fair) return SatResult{false, std::nullopt};

  // Shortest path from an initial state into a fair component.
  std::vector<std::uint32_t> best;
  for (std::uint32_t init : gba.initial) {
    auto path = bfs_path(
        gba, init, [&](std::uint32_t s) { return fair[scc.comp[s]]; }, nullptr, -1);
    if (!path.empty() && (best.empty() || path.size() < best.size())) best = path;
  }
  if (best.empty()) return SatResult{false, std::nullopt};

  std::uint32_t anchor = best.back();
  std::vector<std::uint32_t> cycle = fair_cycle(gba, scc, anchor);

  LassoWitness w;
  for (std::size_t i = 0; i + 1 < best.size(); ++i)
    w.prefix.push_back(gba.canonical_letter(best[i]));
  for (std::uint32_t s : cycle) w.loop.push_back(gba.canonical_letter(s));
  return SatResult{true, std::move(w)};
}

bool eval_on_lasso(const FormulaArena& ar, FormulaId core_body, const LassoWitness& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  if (!is_core(ar, core_body))
    throw std::invalid_argument("eval_on_lasso expects a core body");
  const std::size_t P = w.prefix.size(), L = w.loop.size();
  const std::size_t W = P + 2 * L;
  auto letter = [&](std::size_t p) -> const ZippedLetter& {
    return p < P ? w.prefix[p] : w.loop[(p - P) % L];
  };
  auto next = [&](std::size_t p) { return p + 1 < W ? p + 1 : P + L; };

  Closure cl = compute_closure(ar, core_body);
  std::map<FormulaId, std::vector<char>> val;
  for (FormulaId f : cl.subformulas) {
    const FormulaNode& n = ar.node(f);
    std::vector<char> row(W, 0);
    switch (n.op) {
      case Op::True: row.assign(W, 1); break;
      case Op::Atom: {
        for (std::size_t p = 0; p < W; ++p)
          row[p] = letter(p).contains(ar.ap_name(n.ap), ar.var_name(n.var));
        break;
      }
      case Op::Not: {
        const auto& a = val.at(n.kid[0]);
        for (std::size_t p = 0; p < W; ++p) row[p] = !a[p];
        break;
      }
      case Op::Or: {
        const auto& a = val.at(n.kid[0]);
        const auto& b = val.at(n.kid[1]);
        for (std::size_t p = 0; p < W; ++p) row[p] = a[p] || b[p];
        break;
      }
      case Op::Next: {
        const auto& a = val.at(n.kid[0]);
        for (std::size_t p = 0; p < W; ++p) row[p] = a[next(p)];
        break;
      }
      case Op::Until: {
        // Least fixpoint by Kleene iteration from false.
        const auto& a = val.at(n.kid[0]);
        const auto& b = val.at(n.kid[1]);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t q = W; q-- > 0;) {
            char v = b[q] || (a[q] && row[next(q)]);
            if (v != row[q]) {
              row[q] = v;
              changed = true;
            }
          }
        }
        break;
      }
      default: break;
    }
    val.emplace(f, std::move(row));
  }
  return val.at(core_body)[0] != 0;
}

std::string format_lasso(const LassoWitness& w, const std::vector<TraceVariable>& vars) {
  std::string out;
  for (const TraceVariable& v : vars) {
    out += "# " + v.name + "\n";
    auto fmt = [&](const std::vector<ZippedLetter>& part) {
      std::string s;
      for (std::size_t i = 0; i < part.size(); ++i) {
        if (i) s += ";";
        s += format_step(project(part[i], v));
      }
      return s;
    };
    out += "prefix: " + fmt(w.prefix) + "\n";
    out += "loop:   " + fmt(w.loop) + "\n";
  }
  return out;
}

// --- three-verdict monitor FSM --------------------------------------------------

std::size_t MonitorFsm::letter_index(const ZippedLetter& letter) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (letter.contains(atoms_[i].ap, atoms_[i].var.name)) idx |= std::size_t{1} << i;
  return idx;
}

ZippedLetter MonitorFsm::letter_at(std::size_t index) const {
  std::vector<IndexedAtom> atoms;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if ((index >> i) & 1) atoms.push_back(atoms_[i]);
  return ZippedLetter(std::move(atoms));
}

std::uint32_t MonitorFsm::next_letter(std::uint32_t state, const ZippedLetter& letter) const {
  return next(state, letter_index(letter));
}

MonitorFsm build_fsm_monitor(FormulaArena& ar, FormulaId core_body, std::size_t state_cap) {
  GeneralizedBuchi pos = build_gba(ar, core_body, state_cap);
  GeneralizedBuchi neg = build_gba(ar, ar.not_(core_body), state_cap);
  std::vector<bool> live_pos = pos.live_states();
  std::vector<bool> live_neg = neg.live_states();

  MonitorFsm fsm;
  {
    std::set<IndexedAtom> atoms;
    for (const IndexedAtom& a : collect_atoms(ar, core_body)) atoms.insert(a);
    fsm.atoms_.assign(atoms.begin(), atoms.end());
  }
  if (fsm.atoms_.size() > 20) throw StateExplosion(state_cap);

  using Frontier = std::vector<std::uint32_t>;
  auto step_frontier = [](const GeneralizedBuchi& gba, const Frontier& fr,
                          const ZippedLetter& letter) {
    std::set<std::uint32_t> nxt;
    for (std::uint32_t s : fr)
      if (gba.letter_compatible(s, letter)) nxt.insert(gba.states[s].succ.begin(),
                                                       gba.states[s].succ.end());
    return Frontier(nxt.begin(), nxt.end());
  };
  auto verdict_of = [&](const Frontier& fp, const Frontier& fn) {
    bool pos_live = false, neg_live = false;
    for (std::uint32_t s : fp) pos_live = pos_live || live_pos[s];
    for (std::uint32_t s : fn) neg_live = neg_live || live_neg[s];
    if (!pos_live) return FsmVerdict::Bottom;
    if (!neg_live) return FsmVerdict::Top;
    return FsmVerdict::Unknown;
  };

  std::map<std::pair<Frontier, Frontier>, std::uint32_t> index;
  std::vector<std::pair<Frontier, Frontier>> work;
  auto intern = [&](Frontier fp, Frontier fn) -> std::uint32_t {
    auto key = std::make_pair(fp, fn);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (index.size() >= state_cap) throw StateExplosion(state_cap);
    std::uint32_t id = static_cast<std::uint32_t>(index.size());
    index.emplace(key, id);
    work.push_back(std::move(key));
    fsm.verdicts_.push_back(verdict_of(fp, fn));
    fsm.transitions_.emplace_back();
    return id;
  };

  fsm.initial_ = intern(pos.initial, neg.initial);
  for (std::uint32_t s = 0; s < work.size(); ++s) {
    auto [fp, fn] = work[s];
    fsm.transitions_[s].resize(fsm.letter_count());
    for (std::size_t li = 0; li < fsm.letter_count(); ++li) {
      ZippedLetter letter = fsm.letter_at(li);
      fsm.transitions_[s][li] = intern(step_frontier(pos, fp, letter), step_frontier(neg, fn, letter));
    }
  }
  return fsm;
}

}  // namespace hypermon
