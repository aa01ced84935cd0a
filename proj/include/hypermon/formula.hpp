// ============================================================================
// hypermon/formula.hpp — HyperLTL abstract syntax, parsing and rewriting
// ============================================================================
//
// Design notes:
//
//   Formula bodies live in an interned DAG owned by a FormulaArena. Two
//   structurally identical expressions share the same FormulaId, so
//   equality within one arena is a handle comparison. Arenas are
//   append-only; expressions are immutable once created.
//
//   A QuantifiedFormula is a quantifier prefix over trace variables plus a
//   body over trace-indexed atoms a[v], together with the atomic
//   proposition set (the mentioned atoms unless declared with an `#ap`
//   header line).
//
//   Concrete syntax (see parse_formula):
//     formula := {("forall"|"exists") IDENT "."} expr
//     expr    := "true" | "false" | IDENT "[" IDENT "]" | "!" expr
//              | expr ("&"|"|"|"->"|"<->"|"U"|"W") expr
//              | ("X"|"G"|"F") expr | "G[<" NAT "]" expr | "(" expr ")"
//   Precedence: unary > U/W > & > | > -> > <->; U and W associate to the
//   right, -> to the right, the rest to the left. `#` starts a comment.
//
// ============================================================================

#ifndef HYPERMON_FORMULA_HPP
#define HYPERMON_FORMULA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypermon {

using FormulaId = std::uint32_t;
inline constexpr FormulaId kNoFormula = static_cast<FormulaId>(-1);

enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Next,
  Until,
  WeakUntil,
  Globally,
  Finally,
  BoundedGlobally,  // G[<k]
};

struct TraceVariable {
  std::string name;
  bool operator==(const TraceVariable& o) const { return name == o.name; }
  bool operator!=(const TraceVariable& o) const { return name != o.name; }
  bool operator<(const TraceVariable& o) const { return name < o.name; }
};

struct IndexedAtom {
  std::string ap;
  TraceVariable var;
  bool operator==(const IndexedAtom& o) const { return ap == o.ap && var == o.var; }
  bool operator<(const IndexedAtom& o) const {
    return var.name != o.var.name ? var.name < o.var.name : ap < o.ap;
  }
};

struct FormulaNode {
  Op op{};
  std::uint32_t ap = 0;    // Atom: index into arena AP names
  std::uint32_t var = 0;   // Atom: index into arena variable names
  FormulaId kid[2] = {kNoFormula, kNoFormula};
  std::uint32_t bound = 0;  // BoundedGlobally: k
};

class FormulaArena {
 public:
  FormulaId truth(bool b) { return b ? intern({Op::True}) : intern({Op::False}); }
  FormulaId atom(const std::string& ap, const std::string& var);
  FormulaId not_(FormulaId a) { return unary(Op::Not, a); }
  FormulaId and_(FormulaId a, FormulaId b) { return binary(Op::And, a, b); }
  FormulaId or_(FormulaId a, FormulaId b) { return binary(Op::Or, a, b); }
  FormulaId implies(FormulaId a, FormulaId b) { return binary(Op::Implies, a, b); }
  FormulaId iff(FormulaId a, FormulaId b) { return binary(Op::Iff, a, b); }
  FormulaId next(FormulaId a) { return unary(Op::Next, a); }
  FormulaId until(FormulaId a, FormulaId b) { return binary(Op::Until, a, b); }
  FormulaId weak_until(FormulaId a, FormulaId b) { return binary(Op::WeakUntil, a, b); }
  FormulaId globally(FormulaId a) { return unary(Op::Globally, a); }
  FormulaId finally_(FormulaId a) { return unary(Op::Finally, a); }
  FormulaId bounded_globally(std::uint32_t k, FormulaId a);

  const FormulaNode& node(FormulaId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  const std::string& ap_name(std::uint32_t i) const { return ap_names_[i]; }
  const std::string& var_name(std::uint32_t i) const { return var_names_[i]; }
  std::uint32_t intern_ap(const std::string& s);
  std::uint32_t intern_var(const std::string& s);

  IndexedAtom atom_of(FormulaId id) const;

 private:
  FormulaId unary(Op op, FormulaId a) {
    FormulaNode n{op};
    n.kid[0] = a;
    return intern(n);
  }
  FormulaId binary(Op op, FormulaId a, FormulaId b) {
    FormulaNode n{op};
    n.kid[0] = a;
    n.kid[1] = b;
    return intern(n);
  }
  FormulaId intern(FormulaNode n);

  std::vector<FormulaNode> nodes_;
  std::unordered_map<std::uint64_t, std::vector<FormulaId>> intern_;
  std::vector<std::string> ap_names_, var_names_;
  std::unordered_map<std::string, std::uint32_t> ap_index_, var_index_;
};

enum class Quantifier : std::uint8_t { Forall, Exists };

enum class PrefixShape : std::uint8_t { ForallOnly, ExistsOnly, ForallExists, ExistsForall, Other };

struct QuantifiedFormula {
  std::shared_ptr<FormulaArena> arena;
  std::vector<std::pair<Quantifier, TraceVariable>> prefix;
  FormulaId body = kNoFormula;
  std::vector<std::string> ap_set;  // sorted

  std::size_t arity() const { return prefix.size(); }
  bool alternation_free() const;
  PrefixShape shape() const;
  // Number of leading quantifiers in the first block (ForallExists(n,m):
  // first_block() == n, second_block() == m).
  std::size_t first_block() const;
  std::size_t second_block() const { return prefix.size() - first_block(); }
  std::vector<TraceVariable> variables() const;
};

// --- errors -----------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnboundVariable, DuplicateVariable };
  ParseError(Kind kind, std::string msg, std::size_t line, std::size_t column)
      : std::runtime_error(std::move(msg)), kind(kind), line(line), column(column) {}
  Kind kind;
  std::size_t line, column;
};

class UnmappedVariable : public std::runtime_error {
 public:
  explicit UnmappedVariable(const std::string& name)
      : std::runtime_error("variable not covered by substitution: " + name) {}
};

// --- operations ---------------------------------------------------------------

QuantifiedFormula parse_formula(std::string_view text);

std::string print_expr(const FormulaArena& arena, FormulaId id);
std::string print_formula(const QuantifiedFormula& phi);

// Rewrites into the core fragment {True, Atom, Not, Or, Next, Until}.
FormulaId desugar(FormulaArena& arena, FormulaId id);
bool is_core(const FormulaArena& arena, FormulaId id);

// Renames every trace variable occurring in atoms; the map must cover them.
FormulaId substitute_variables(FormulaArena& arena, FormulaId id,
                               const std::map<TraceVariable, TraceVariable>& map);

bool equal_exprs(const FormulaArena& a, FormulaId ia, const FormulaArena& b, FormulaId ib);

// Atoms mentioned in an expression, deduplicated, in (var, ap) order.
std::vector<IndexedAtom> collect_atoms(const FormulaArena& arena, FormulaId id);
// Trace variables mentioned in atoms, in first-occurrence order.
std::vector<TraceVariable> collect_variables(const FormulaArena& arena, FormulaId id);

}  // namespace hypermon

#endif  // HYPERMON_FORMULA_HPP
