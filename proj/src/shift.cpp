#include "treeshift/shift.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace treeshift {

space_spec space_spec::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw invalid_spec("lp space requires 1 < p < inf (use l1 for p = 1)");
  return {space_kind::lp, p};
}

void weight_spec::validate(const tree_spec& t) const {
  if (mode == weight_mode::constant) {
    if (value == scalar{}) throw invalid_spec("weights: constant value must be nonzero");
  } else {
    profile.validate_shape("weights");
    for (const auto& [g, c] : profile.prefix)
      if (c == scalar{}) throw invalid_spec("weights: profile values must be nonzero");
    for (const auto& c : profile.period)
      if (c == scalar{}) throw invalid_spec("weights: profile values must be nonzero");
    for (const auto& c : profile.left_period)
      if (c == scalar{}) throw invalid_spec("weights: profile values must be nonzero");
  }
  for (const auto& [addr, c] : overrides) {
    if (c == scalar{}) throw invalid_spec("weights: override values must be nonzero");
    if (canonical_address(addr.up, addr.down, t) != addr)
      throw invalid_spec("weights: override addresses must be canonical");
  }
}

scalar weight_at(const vertex_address& v, const weight_spec& w) {
  if (auto it = w.overrides.find(v); it != w.overrides.end()) return it->second;
  if (w.mode == weight_mode::constant) return w.value;
  return w.profile.at(generation_of(v));
}

scalar path_weight(const vertex_address& v, const vertex_address& u, const weight_spec& w,
                   const tree_spec& t) {
  auto word = descent_between(v, u, t);
  if (!word) throw not_a_descendant("path_weight: target is not below the claimed ancestor");
  scalar acc(1.0);
  vertex_address cur = v;
  for (auto s : *word) {
    cur = child_at(cur, s, t);
    acc *= weight_at(cur, w);
  }
  return acc;
}

sparse_vector apply_shift(const sparse_vector& f, const weight_spec& w, const tree_spec& t) {
  sparse_vector out;
  for (const auto& [u, c] : f.entries()) {
    if (t.kind == tree_kind::rooted && u.up == 0 && u.down.empty()) continue;
    out.add(parent_of(u, t), weight_at(u, w) * c);
  }
  return out;
}

sparse_vector apply_shift_power(const sparse_vector& f, std::uint32_t n, const weight_spec& w,
                                const tree_spec& t) {
  if (n == 0) return f;
  sparse_vector out;
  for (const auto& [u, c] : f.entries()) {
    // Climb n steps, multiplying the weights of the vertices passed through
    // (including u, excluding the landing ancestor); rooted walks that
    // overshoot the root contribute nothing.
    vertex_address cur = u;
    scalar acc = c;
    bool alive = true;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (t.kind == tree_kind::rooted && cur.up == 0 && cur.down.empty()) {
        alive = false;
        break;
      }
      acc *= weight_at(cur, w);
      cur = parent_of(cur, t);
    }
    if (alive) out.add(cur, acc);
  }
  return out;
}

double norm(const sparse_vector& f, const space_spec& s) {
  double acc = 0.0;
  switch (s.kind) {
    case space_kind::l1:
      for (const auto& [v, c] : f.entries()) acc += std::abs(c);
      return acc;
    case space_kind::lp:
      for (const auto& [v, c] : f.entries()) acc += std::pow(std::abs(c), s.p);
      return std::pow(acc, 1.0 / s.p);
    case space_kind::c0:
      for (const auto& [v, c] : f.entries()) acc = std::max(acc, std::abs(c));
      return acc;
  }
  return acc;
}

bool rolewicz_bounded(const tree_spec& t, const space_spec& s) {
  (void)s;
  // Eventually-periodic profiles plus finitely many overrides always have a
  // finite sup arity, so the constant-weight shift is bounded on every space.
  return t.max_arity() < std::numeric_limits<std::uint32_t>::max();
}

}  // namespace treeshift
