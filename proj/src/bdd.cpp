#include "hypermon/bdd.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace hypermon {

namespace {
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
  return a;
}
}  // namespace

std::size_t BddManager::IteKeyHash::operator()(const IteKey& k) const noexcept {
  return mix(mix(k.f, k.g), mix(k.h, 0x1234567u));
}

BddManager::BddManager() {
  nodes_.push_back(Node{kTermVar, 0, 0});  // kFalse
  nodes_.push_back(Node{kTermVar, 1, 1});  // kTrue
}

Bdd BddManager::mk(std::uint32_t v, Bdd lo, Bdd hi) {
  if (lo == hi) return lo;
  std::uint64_t key = mix(mix(v, lo), hi);
  auto& bucket = unique_[key];
  for (Bdd n : bucket) {
    const Node& nd = nodes_[n];
    if (nd.var == v && nd.lo == lo && nd.hi == hi) return n;
  }
  Bdd id = static_cast<Bdd>(nodes_.size());
  nodes_.push_back(Node{v, lo, hi});
  bucket.push_back(id);
  return id;
}

Bdd BddManager::var(std::uint32_t v) { return mk(v, kFalse, kTrue); }
Bdd BddManager::nvar(std::uint32_t v) { return mk(v, kTrue, kFalse); }

Bdd BddManager::ite(Bdd f, Bdd g, Bdd h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  IteKey key{f, g, h};
  auto it = ite_cache_.find(key);
  if (it != ite_cache_.end()) return it->second;

  std::uint32_t v = top_var(f);
  if (!is_terminal(g)) v = std::min(v, top_var(g));
  if (!is_terminal(h)) v = std::min(v, top_var(h));

  auto cof = [&](Bdd x, bool hi) -> Bdd {
    if (is_terminal(x) || top_var(x) != v) return x;
    return hi ? nodes_[x].hi : nodes_[x].lo;
  };
  Bdd lo = ite(cof(f, false), cof(g, false), cof(h, false));
  Bdd hi = ite(cof(f, true), cof(g, true), cof(h, true));
  Bdd r = mk(v, lo, hi);
  ite_cache_.emplace(key, r);
  return r;
}

Bdd BddManager::not_(Bdd f) { return ite(f, kFalse, kTrue); }
Bdd BddManager::and_(Bdd f, Bdd g) { return ite(f, g, kFalse); }
Bdd BddManager::or_(Bdd f, Bdd g) { return ite(f, kTrue, g); }
Bdd BddManager::xor_(Bdd f, Bdd g) { return ite(f, not_(g), g); }
Bdd BddManager::iff_(Bdd f, Bdd g) { return ite(f, g, not_(g)); }
Bdd BddManager::implies(Bdd f, Bdd g) { return ite(f, g, kTrue); }

Bdd BddManager::restrict_var(Bdd f, std::uint32_t v, bool value) {
  if (is_terminal(f)) return f;
  const Node nd = nodes_[f];
  if (nd.var > v) return f;
  if (nd.var == v) return value ? nd.hi : nd.lo;
  Bdd lo = restrict_var(nd.lo, v, value);
  Bdd hi = restrict_var(nd.hi, v, value);
  return mk(nd.var, lo, hi);
}

Bdd BddManager::compose(Bdd f, const std::function<std::optional<Bdd>(std::uint32_t)>& subst) {
  std::unordered_map<Bdd, Bdd> memo;
  std::function<Bdd(Bdd)> go = [&](Bdd n) -> Bdd {
    if (is_terminal(n)) return n;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const Node nd = nodes_[n];
    Bdd lo = go(nd.lo);
    Bdd hi = go(nd.hi);
    std::optional<Bdd> s = subst(nd.var);
    Bdd sel = s ? *s : var(nd.var);
    Bdd r = ite(sel, hi, lo);
    memo.emplace(n, r);
    return r;
  };
  return go(f);
}

bool BddManager::eval(Bdd f, const std::function<bool(std::uint32_t)>& assign) const {
  while (!is_terminal(f)) {
    const Node& nd = nodes_[f];
    f = assign(nd.var) ? nd.hi : nd.lo;
  }
  return f == kTrue;
}

bool BddManager::eval_mask(Bdd f, std::uint64_t mask) const {
  while (!is_terminal(f)) {
    const Node& nd = nodes_[f];
    f = ((mask >> nd.var) & 1u) ? nd.hi : nd.lo;
  }
  return f == kTrue;
}

std::optional<std::vector<std::pair<std::uint32_t, bool>>> BddManager::sat_one(Bdd f) const {
  if (f == kFalse) return std::nullopt;
  std::vector<std::pair<std::uint32_t, bool>> out;
  while (!is_terminal(f)) {
    const Node& nd = nodes_[f];
    if (nd.lo != kFalse) {
      out.emplace_back(nd.var, false);
      f = nd.lo;
    } else {
      out.emplace_back(nd.var, true);
      f = nd.hi;
    }
  }
  return out;
}

std::vector<Bdd> BddManager::cofactors_below(Bdd f, std::uint32_t boundary) const {
  std::vector<Bdd> out;
  std::vector<Bdd> stack{f};
  std::unordered_map<Bdd, bool> seen;
  while (!stack.empty()) {
    Bdd n = stack.back();
    stack.pop_back();
    if (seen.count(n)) continue;
    seen[n] = true;
    if (is_terminal(n) || nodes_[n].var >= boundary) {
      out.push_back(n);
      continue;
    }
    stack.push_back(nodes_[n].lo);
    stack.push_back(nodes_[n].hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Bdd BddManager::cofactor_guard(Bdd f, std::uint32_t boundary, Bdd target) {
  std::unordered_map<Bdd, Bdd> memo;
  std::function<Bdd(Bdd)> go = [&](Bdd n) -> Bdd {
    if (is_terminal(n) || nodes_[n].var >= boundary) return n == target ? kTrue : kFalse;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const Node nd = nodes_[n];
    Bdd r = mk(nd.var, go(nd.lo), go(nd.hi));
    memo.emplace(n, r);
    return r;
  };
  return go(f);
}

std::string BddManager::to_dnf_string(Bdd f, const std::function<std::string(std::uint32_t, bool)>& lit,
                                      std::size_t max_cubes) const {
  if (f == kFalse) return "false";
  if (f == kTrue) return "true";
  std::vector<std::string> cubes;
  std::vector<std::pair<std::uint32_t, bool>> path;
  std::function<void(Bdd)> go = [&](Bdd n) {
    if (cubes.size() >= max_cubes) return;
    if (n == kFalse) return;
    if (n == kTrue) {
      std::string cube;
      for (auto& [v, pos] : path) {
        if (!cube.empty()) cube += " & ";
        cube += lit(v, pos);
      }
      cubes.push_back(cube.empty() ? "true" : cube);
      return;
    }
    const Node& nd = nodes_[n];
    path.emplace_back(nd.var, true);
    go(nd.hi);
    path.back().second = false;
    go(nd.lo);
    path.pop_back();
  };
  go(f);
  std::string out;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (i) out += " | ";
    out += cubes[i];
  }
  if (cubes.size() >= max_cubes) out += " | ...";
  return out;
}

}  // namespace hypermon
