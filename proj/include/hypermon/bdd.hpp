// Reduced ordered binary decision diagrams with a shared unique table.
//
// Nodes are identified by dense 32-bit handles; 0 and 1 are the terminal
// constants. Variables are identified by 32-bit indices and ordered by
// index (lower index closer to the root). Canonicity: two functions over
// the same manager are semantically equal iff their handles are equal.

#ifndef HYPERMON_BDD_HPP
#define HYPERMON_BDD_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypermon {

using Bdd = std::uint32_t;

class BddManager {
 public:
  static constexpr Bdd kFalse = 0;
  static constexpr Bdd kTrue = 1;

  BddManager();

  Bdd var(std::uint32_t v);
  Bdd nvar(std::uint32_t v);

  Bdd not_(Bdd f);
  Bdd and_(Bdd f, Bdd g);
  Bdd or_(Bdd f, Bdd g);
  Bdd xor_(Bdd f, Bdd g);
  Bdd iff_(Bdd f, Bdd g);
  Bdd implies(Bdd f, Bdd g);
  Bdd ite(Bdd f, Bdd g, Bdd h);

  // f with variable `v` fixed to `value`.
  Bdd restrict_var(Bdd f, std::uint32_t v, bool value);

  // f with every variable replaced per `subst` (nullopt keeps the variable).
  // Substitutions may mention arbitrary variables; the result is reduced.
  Bdd compose(Bdd f, const std::function<std::optional<Bdd>(std::uint32_t)>& subst);

  // Evaluate under a total assignment.
  bool eval(Bdd f, const std::function<bool(std::uint32_t)>& assign) const;
  // Evaluate with variables < 64 read from a bitmask.
  bool eval_mask(Bdd f, std::uint64_t mask) const;

  // Deterministic satisfying assignment (variables not mentioned are left
  // out and may take any value). Returns nullopt for kFalse.
  std::optional<std::vector<std::pair<std::uint32_t, bool>>> sat_one(Bdd f) const;

  // Distinct subfunctions of f obtained by fixing all variables < boundary,
  // i.e. the cofactor nodes at the boundary cut. Sorted by handle.
  std::vector<Bdd> cofactors_below(Bdd f, std::uint32_t boundary) const;

  // Characteristic function (over variables < boundary) of the assignments
  // whose cofactor equals `target`.
  Bdd cofactor_guard(Bdd f, std::uint32_t boundary, Bdd target);

  bool is_terminal(Bdd f) const { return f <= 1; }
  std::uint32_t top_var(Bdd f) const { return nodes_[f].var; }
  std::size_t node_count() const { return nodes_.size(); }

  // Disjunctive-normal-form rendering; cubes are rendered through `lit`.
  std::string to_dnf_string(Bdd f, const std::function<std::string(std::uint32_t, bool)>& lit,
                            std::size_t max_cubes = 32) const;

 private:
  struct Node {
    std::uint32_t var;
    Bdd lo, hi;
  };
  struct IteKey {
    Bdd f, g, h;
    bool operator==(const IteKey&) const = default;
  };
  struct IteKeyHash {
    std::size_t operator()(const IteKey& k) const noexcept;
  };

  Bdd mk(std::uint32_t v, Bdd lo, Bdd hi);

  static constexpr std::uint32_t kTermVar = 0xffffffffu;

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::vector<Bdd>> unique_;  // hash buckets, verified
  std::unordered_map<IteKey, Bdd, IteKeyHash> ite_cache_;
};

}  // namespace hypermon

#endif  // HYPERMON_BDD_HPP
