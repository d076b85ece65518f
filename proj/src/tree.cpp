#include "treeshift/tree.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace treeshift {

namespace {

std::string describe(const vertex_address& v) {
  std::string s = "(up=" + std::to_string(v.up) + ", down=[";
  for (std::size_t i = 0; i < v.down.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v.down[i]);
  }
  return s + "])";
}

std::size_t sat_add(std::size_t a, std::size_t b, std::size_t cap) {
  if (a >= cap || b >= cap - a) return cap;
  return a + b;
}

std::size_t sat_mul(std::size_t a, std::size_t b, std::size_t cap) {
  if (a == 0 || b == 0) return 0;
  if (a >= cap || b > cap / a) return cap;
  return std::min(a * b, cap);
}

/// Product of profile arities over `depth` generations starting at g
/// (valid only where no override reaches), saturated at cap.
std::size_t pure_count(long g, std::uint32_t depth, const tree_spec& t, std::size_t cap) {
  std::size_t r = 1;
  for (std::uint32_t i = 0; i < depth && r < cap; ++i)
    r = sat_mul(r, t.arity.at(g + static_cast<long>(i)), cap);
  return r;
}

/// |Child^depth(v)| saturated at cap. Override-bearing child slots recurse
/// explicitly; the remaining slots share the profile-pure product.
std::size_t count_descendants(const vertex_address& v, std::uint32_t depth, const tree_spec& t,
                              std::size_t cap) {
  if (depth == 0) return 1;
  std::set<std::uint32_t> specials;
  bool self_override = t.arity_overrides.contains(v);
  for (const auto& [addr, a] : t.arity_overrides) {
    auto w = descent_between(v, addr, t);
    if (w && !w->empty() && w->size() <= static_cast<std::size_t>(depth) - 1)
      specials.insert((*w)[0]);
  }
  if (specials.empty() && !self_override)
    return pure_count(generation_of(v), depth, t, cap);
  std::size_t bulk = t.arity_of(v) - specials.size();
  std::size_t total = sat_mul(bulk, pure_count(generation_of(v) + 1, depth - 1, t, cap), cap);
  for (auto s : specials)
    total = sat_add(total, count_descendants(child_at(v, s, t), depth - 1, t, cap), cap);
  return total;
}

}  // namespace

std::uint32_t tree_spec::spine_slot(std::uint32_t k) const {
  auto it = spine.find(k);
  return it == spine.end() ? 0 : it->second;
}

std::uint32_t tree_spec::arity_of(const vertex_address& v) const {
  if (auto it = arity_overrides.find(v); it != arity_overrides.end()) return it->second;
  return arity.at(generation_of(v));
}

std::uint32_t tree_spec::max_arity() const {
  std::uint32_t m = 1;
  for (const auto& [g, a] : arity.prefix) m = std::max(m, a);
  for (auto a : arity.period) m = std::max(m, a);
  if (kind == tree_kind::unrooted)
    for (auto a : arity.left_period) m = std::max(m, a);
  for (const auto& [addr, a] : arity_overrides) m = std::max(m, a);
  return m;
}

void tree_spec::validate() const {
  arity.validate_shape("tree");
  auto check_positive = [](std::uint32_t a) {
    if (a == 0) throw invalid_spec("tree: arities must be >= 1 (leafless)");
  };
  for (const auto& [g, a] : arity.prefix) {
    check_positive(a);
    if (kind == tree_kind::rooted && g < 0)
      throw invalid_spec("tree: rooted profiles are indexed by generations >= 0");
  }
  for (auto a : arity.period) check_positive(a);
  for (auto a : arity.left_period) check_positive(a);
  if (kind == tree_kind::rooted && !spine.empty())
    throw invalid_spec("tree: spine slots apply only to unrooted trees");
  for (const auto& [k, slot] : spine) {
    if (k == 0) throw invalid_spec("tree: spine heights start at 1");
    if (slot >= arity_of({k, {}}))
      throw slot_out_of_range("tree: spine slot at height " + std::to_string(k) +
                              " exceeds the arity there");
  }
  for (const auto& [addr, a] : arity_overrides) {
    check_positive(a);
    if (canonical_address(addr.up, addr.down, *this) != addr)
      throw invalid_spec("tree: override address " + describe(addr) + " is not canonical");
  }
}

vertex_address canonical_address(std::uint32_t up, std::vector<std::uint32_t> down,
                                 const tree_spec& t) {
  if (t.kind == tree_kind::rooted && up != 0)
    throw invalid_spec("rooted tree addresses cannot step above the root");
  std::size_t skip = 0;
  while (up > 0 && skip < down.size() && down[skip] == t.spine_slot(up)) {
    ++skip;
    --up;
  }
  vertex_address cur{up, {}};
  cur.down.reserve(down.size() - skip);
  for (std::size_t i = skip; i < down.size(); ++i) {
    if (down[i] >= t.arity_of(cur))
      throw slot_out_of_range("slot " + std::to_string(down[i]) + " out of range below " +
                              describe(cur));
    cur.down.push_back(down[i]);
  }
  return cur;
}

vertex_address parent_of(const vertex_address& v, const tree_spec& t) {
  if (!v.down.empty()) {
    vertex_address r = v;
    r.down.pop_back();
    return r;
  }
  if (t.kind == tree_kind::rooted)
    throw root_has_no_parent("the root of a rooted tree has no parent");
  return {v.up + 1, {}};
}

vertex_address ancestor_of(vertex_address v, std::uint32_t steps, const tree_spec& t) {
  while (steps > 0) {
    std::uint32_t strip = std::min<std::size_t>(steps, v.down.size());
    v.down.resize(v.down.size() - strip);
    steps -= strip;
    if (steps > 0) {
      if (t.kind == tree_kind::rooted)
        throw root_has_no_parent("the root of a rooted tree has no parent");
      v.up += steps;
      steps = 0;
    }
  }
  return v;
}

vertex_address child_at(const vertex_address& v, std::uint32_t slot, const tree_spec& t) {
  if (slot >= t.arity_of(v))
    throw slot_out_of_range("slot " + std::to_string(slot) + " out of range below " +
                            describe(v));
  if (v.down.empty() && v.up > 0 && slot == t.spine_slot(v.up)) return {v.up - 1, {}};
  vertex_address r = v;
  r.down.push_back(slot);
  return r;
}

std::vector<vertex_address> children_of(const vertex_address& v, const tree_spec& t) {
  std::uint32_t a = t.arity_of(v);
  std::vector<vertex_address> out;
  out.reserve(a);
  for (std::uint32_t s = 0; s < a; ++s) out.push_back(child_at(v, s, t));
  return out;
}

std::optional<std::vector<std::uint32_t>> descent_between(const vertex_address& v,
                                                          const vertex_address& u,
                                                          const tree_spec& t) {
  // Canonical addresses hanging off a higher spine point than v's cannot lie
  // below v: their walk leaves the spine before reaching v's subtree.
  if (u.up > v.up) return std::nullopt;
  std::vector<std::uint32_t> word;
  word.reserve((v.up - u.up) + u.down.size());
  for (std::uint32_t k = v.up; k > u.up; --k) word.push_back(t.spine_slot(k));
  word.insert(word.end(), u.down.begin(), u.down.end());
  if (word.size() < v.down.size()) return std::nullopt;
  if (!std::equal(v.down.begin(), v.down.end(), word.begin())) return std::nullopt;
  return std::vector<std::uint32_t>(word.begin() + static_cast<long>(v.down.size()),
                                    word.end());
}

std::vector<vertex_address> descendants_at(const vertex_address& v, std::uint32_t depth,
                                           const tree_spec& t, std::size_t cap) {
  std::vector<vertex_address> out;
  for_each_descendant_at(v, depth, t, cap, [&](const vertex_address& u) { out.push_back(u); });
  return out;
}

generation_count generation_size(long gen, const tree_spec& t, std::size_t cap) {
  if (t.kind == tree_kind::rooted) {
    if (gen < 0) return generation_count::finite(0);
    std::size_t c = count_descendants({0, {}}, static_cast<std::uint32_t>(gen), t, cap);
    return c >= cap ? generation_count::at_least(cap) : generation_count::finite(c);
  }

  // Census over spine heights: Gen_g is the increasing union of
  // Child^{g+k}(parent^k(anchor)). The union stabilizes once every spine
  // vertex above height k has arity 1; otherwise it grows geometrically and
  // hits the cap.
  long k0 = std::max(-gen, 0L);
  bool left_ones = std::all_of(t.arity.left_period.begin(), t.arity.left_period.end(),
                               [](std::uint32_t a) { return a == 1; });
  long jmax = 0;
  if (!t.arity.prefix.empty()) jmax = std::max(jmax, -t.arity.prefix.begin()->first);
  for (const auto& [addr, a] : t.arity_overrides)
    if (addr.down.empty()) jmax = std::max(jmax, static_cast<long>(addr.up));

  long hard_stop =
      k0 + jmax + 80 * static_cast<long>(t.arity.left_period.size()) + 80;
  for (long k = k0;; ++k) {
    std::size_t s = count_descendants({static_cast<std::uint32_t>(k), {}},
                                      static_cast<std::uint32_t>(gen + k), t, cap);
    if (s >= cap) return generation_count::at_least(cap);
    if (left_ones && k >= jmax) return generation_count::finite(s);
    if (k > hard_stop)
      throw std::logic_error("generation census failed to stabilize or saturate");
  }
}

bool has_free_left_end(const tree_spec& t) {
  if (t.kind == tree_kind::rooted)
    throw not_applicable("free left end is a property of unrooted trees");
  // Some generation is a singleton iff only finitely many spine vertices
  // branch, i.e. the left-repeating tail is all ones (window and overrides
  // are finite and cannot force infinitely many branch points).
  return std::all_of(t.arity.left_period.begin(), t.arity.left_period.end(),
                     [](std::uint32_t a) { return a == 1; });
}

}  // namespace treeshift
