#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "treeshift/errors.hpp"
#include "treeshift/profile.hpp"

namespace treeshift {

enum class tree_kind { rooted, unrooted };

/// Address of a vertex relative to the anchor (the root for rooted trees):
/// walk `up` parent steps, then descend along the child slots in `down`.
/// Canonical form: for unrooted trees with up > 0, the first descent slot is
/// not the spine slot at that height (otherwise the walk would just retrace
/// the spine and a shorter address names the same vertex). Rooted addresses
/// always have up == 0.
struct vertex_address {
  std::uint32_t up = 0;
  std::vector<std::uint32_t> down;

  friend auto operator<=>(const vertex_address&, const vertex_address&) = default;
};

/// Generation index: depth below the anchor's horizontal level.
inline long generation_of(const vertex_address& v) noexcept {
  return static_cast<long>(v.down.size()) - static_cast<long>(v.up);
}

using arity_profile = two_tailed_profile<std::uint32_t>;

/// Leafless directed tree described by an eventually-periodic per-generation
/// arity profile, finitely many per-vertex arity overrides, and (for unrooted
/// trees) the slots through which the ancestor spine descends back toward the
/// anchor (default slot 0 at every height).
struct tree_spec {
  tree_kind kind = tree_kind::rooted;
  arity_profile arity;
  std::map<vertex_address, std::uint32_t> arity_overrides;
  std::map<std::uint32_t, std::uint32_t> spine;

  /// Slot of the child of parent^k(anchor) that leads back toward the anchor.
  std::uint32_t spine_slot(std::uint32_t k) const;

  /// Number of children of v (override if present, else profile at gen(v)).
  std::uint32_t arity_of(const vertex_address& v) const;

  /// Supremum of arities over the whole tree (finite by construction).
  std::uint32_t max_arity() const;

  void validate() const;

  friend bool operator==(const tree_spec&, const tree_spec&) = default;
};

inline constexpr std::size_t default_enumeration_cap = 1'000'000;

/// Normalize a raw (up, down) walk: collapse leading spine retraces and check
/// every slot against the arity of the vertex it descends from.
vertex_address canonical_address(std::uint32_t up, std::vector<std::uint32_t> down,
                                 const tree_spec& t);

vertex_address parent_of(const vertex_address& v, const tree_spec& t);

/// parent^steps(v); throws root_has_no_parent when a rooted walk overshoots.
vertex_address ancestor_of(vertex_address v, std::uint32_t steps, const tree_spec& t);

/// Canonical address of the slot-th child of v.
vertex_address child_at(const vertex_address& v, std::uint32_t slot, const tree_spec& t);

/// All children of v, in slot order.
std::vector<vertex_address> children_of(const vertex_address& v, const tree_spec& t);

/// Descent word from v to u if u lies in the subtree of v (possibly empty).
std::optional<std::vector<std::uint32_t>> descent_between(const vertex_address& v,
                                                          const vertex_address& u,
                                                          const tree_spec& t);

/// Child^depth(v) in canonical address order per level walk.
std::vector<vertex_address> descendants_at(const vertex_address& v, std::uint32_t depth,
                                           const tree_spec& t,
                                           std::size_t cap = default_enumeration_cap);

/// Visit Child^depth(v) without materializing the set; throws
/// enumeration_cap_exceeded past `cap` visits.
template <typename F>
void for_each_descendant_at(const vertex_address& v, std::uint32_t depth, const tree_spec& t,
                            std::size_t cap, F&& fn) {
  std::size_t produced = 0;
  // Explicit stack of (address, remaining depth); children pushed in reverse
  // slot order so vertices surface in slot order.
  std::vector<std::pair<vertex_address, std::uint32_t>> stack;
  stack.emplace_back(v, depth);
  while (!stack.empty()) {
    auto [cur, rem] = std::move(stack.back());
    stack.pop_back();
    if (rem == 0) {
      if (++produced > cap)
        throw enumeration_cap_exceeded("descendant enumeration exceeded cap");
      fn(cur);
      continue;
    }
    std::uint32_t a = t.arity_of(cur);
    for (std::uint32_t s = a; s-- > 0;) stack.emplace_back(child_at(cur, s, t), rem - 1);
  }
}

/// Size of a generation, either exactly or saturated at `cap`.
struct generation_count {
  std::size_t count = 0;
  bool exact = true;

  static generation_count finite(std::size_t n) { return {n, true}; }
  static generation_count at_least(std::size_t cap) { return {cap, false}; }
  friend bool operator==(const generation_count&, const generation_count&) = default;
};

/// |Gen_g|: number of vertices at generation g (rooted: Child^g(root)).
generation_count generation_size(long gen, const tree_spec& t,
                                 std::size_t cap = default_enumeration_cap);

/// True iff some generation is a singleton, i.e. the leftward tail of the
/// tree is a bare path. Equivalent to: every sufficiently deep ancestor of
/// the anchor has arity 1, which for eventually-periodic data means the left
/// period is all ones. Unrooted only.
bool has_free_left_end(const tree_spec& t);

}  // namespace treeshift
