#include "hypermon/semantics.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace hypermon {

namespace {

void collect_subformulas(const FormulaArena& ar, FormulaId id, std::vector<FormulaId>& out,
                         std::unordered_map<FormulaId, std::size_t>& index) {
  if (index.count(id)) return;
  const FormulaNode& n = ar.node(id);
  if (n.kid[0] != kNoFormula) collect_subformulas(ar, n.kid[0], out, index);
  if (n.kid[1] != kNoFormula) collect_subformulas(ar, n.kid[1], out, index);
  index.emplace(id, out.size());
  out.push_back(id);
}

void require_core(const FormulaArena& ar, FormulaId id) {
  if (!is_core(ar, id))
    throw std::invalid_argument("expression is not in core form: " + print_expr(ar, id));
}

}  // namespace

bool eval_recursive(const FormulaArena& ar, FormulaId body, const FiniteAssignment& pi) {
  require_core(ar, body);
  for (const TraceVariable& v : collect_variables(ar, body))
    if (!pi.count(v))
      throw std::invalid_argument("assignment does not cover variable " + v.name);

  std::size_t max_len = 0;
  for (auto& [v, t] : pi) max_len = std::max(max_len, t->length());

  // Literal clause-by-clause evaluation, memoized on (subformula, shift).
  // Shifts are clamped at max_len, where every trace has become epsilon.
  std::unordered_map<std::uint64_t, char> memo;
  std::function<bool(FormulaId, std::size_t)> ev = [&](FormulaId f, std::size_t i) -> bool {
    if (i > max_len) i = max_len;
    std::uint64_t key = (static_cast<std::uint64_t>(f) << 32) | i;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second != 0;
    const FormulaNode& n = ar.node(f);
    bool r = false;
    switch (n.op) {
      case Op::True: r = true; break;
      case Op::Atom: {
        const TracePtr& t = pi.at(TraceVariable{ar.var_name(n.var)});
        r = i < t->length() && t->steps[i].contains(ar.ap_name(n.ap));
        break;
      }
      case Op::Not: r = !ev(n.kid[0], i); break;
      case Op::Or: r = ev(n.kid[0], i) || ev(n.kid[1], i); break;
      case Op::Next: r = ev(n.kid[0], i + 1); break;
      case Op::Until: {
        // exists k >= i with psi at k and phi on [i, k); positions beyond
        // max_len repeat the all-epsilon state.
        for (std::size_t k = i;; ++k) {
          if (ev(n.kid[1], k)) {
            r = true;
            break;
          }
          if (!ev(n.kid[0], k)) break;
          if (k >= max_len) break;
        }
        break;
      }
      default: break;
    }
    memo.emplace(key, r ? 1 : 0);
    return r;
  };
  return ev(body, 0);
}

std::size_t SubformulaTable::index_of(FormulaId f) const {
  for (std::size_t i = 0; i < subformulas.size(); ++i)
    if (subformulas[i] == f) return i;
  throw std::out_of_range("subformula not in table");
}

SubformulaTable eval_backwards_table(const FormulaArena& ar, FormulaId body, const ZippedWord& w) {
  require_core(ar, body);
  SubformulaTable tab;
  std::unordered_map<FormulaId, std::size_t> index;
  collect_subformulas(ar, body, tab.subformulas, index);
  std::size_t m = w.length();
  tab.positions = m;
  tab.rows.assign(m + 1, std::vector<char>(tab.subformulas.size(), 0));

  // Epsilon row: atoms false, X phi |-> phi, phi U psi |-> psi, booleans
  // homomorphic.
  for (std::size_t s = 0; s < tab.subformulas.size(); ++s) {
    const FormulaNode& n = ar.node(tab.subformulas[s]);
    char v = 0;
    switch (n.op) {
      case Op::True: v = 1; break;
      case Op::Atom: v = 0; break;
      case Op::Not: v = !tab.rows[m][index.at(n.kid[0])]; break;
      case Op::Or: v = tab.rows[m][index.at(n.kid[0])] || tab.rows[m][index.at(n.kid[1])]; break;
      case Op::Next: v = tab.rows[m][index.at(n.kid[0])]; break;
      case Op::Until: v = tab.rows[m][index.at(n.kid[1])]; break;
      default: break;
    }
    tab.rows[m][s] = v;
  }

  for (std::size_t pos = m; pos-- > 0;) {
    const ZippedLetter& letter = w.letters[pos];
    for (std::size_t s = 0; s < tab.subformulas.size(); ++s) {
      const FormulaNode& n = ar.node(tab.subformulas[s]);
      char v = 0;
      switch (n.op) {
        case Op::True: v = 1; break;
        case Op::Atom: v = letter.contains(ar.ap_name(n.ap), ar.var_name(n.var)); break;
        case Op::Not: v = !tab.rows[pos][index.at(n.kid[0])]; break;
        case Op::Or:
          v = tab.rows[pos][index.at(n.kid[0])] || tab.rows[pos][index.at(n.kid[1])];
          break;
        case Op::Next: v = tab.rows[pos + 1][index.at(n.kid[0])]; break;
        case Op::Until:
          v = tab.rows[pos][index.at(n.kid[1])] ||
              (tab.rows[pos][index.at(n.kid[0])] && tab.rows[pos + 1][s]);
          break;
        default: break;
      }
      tab.rows[pos][s] = v;
    }
  }
  return tab;
}

bool eval_backwards(const FormulaArena& ar, FormulaId body, const ZippedWord& w) {
  SubformulaTable tab = eval_backwards_table(ar, body, w);
  return tab.rows[0].back() != 0;
}

bool eval_hyper_finite(const QuantifiedFormula& phi, const TraceSet& traces) {
  FormulaArena& ar = *phi.arena;
  FormulaId core = desugar(ar, phi.body);
  FiniteAssignment pi;
  std::function<bool(std::size_t)> go = [&](std::size_t qi) -> bool {
    if (qi == phi.prefix.size()) return eval_recursive(ar, core, pi);
    const auto& [q, v] = phi.prefix[qi];
    if (q == Quantifier::Forall) {
      for (const TracePtr& t : traces) {
        pi[v] = t;
        if (!go(qi + 1)) {
          pi.erase(v);
          return false;
        }
      }
      pi.erase(v);
      return true;
    }
    for (const TracePtr& t : traces) {
      pi[v] = t;
      if (go(qi + 1)) {
        pi.erase(v);
        return true;
      }
    }
    pi.erase(v);
    return false;
  };
  return go(0);
}

}  // namespace hypermon
