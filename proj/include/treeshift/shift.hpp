#pragma once

#include <complex>
#include <cstdint>
#include <map>

#include "treeshift/tree.hpp"

namespace treeshift {

using scalar = std::complex<double>;

/// Banach sequence space over the vertex set: l^1, l^p (1 < p < inf), or c_0.
enum class space_kind { l1, lp, c0 };

struct space_spec {
  space_kind kind = space_kind::l1;
  double p = 1.0;

  static space_spec l1() { return {space_kind::l1, 1.0}; }
  static space_spec lp(double p);
  static space_spec c0() { return {space_kind::c0, 0.0}; }

  friend bool operator==(const space_spec&, const space_spec&) = default;
};

enum class weight_mode { constant, per_generation };

using weight_profile = two_tailed_profile<scalar>;

/// Nonzero complex weight attached to every vertex, either one constant, or a
/// per-generation eventually-periodic profile; finitely many per-vertex
/// overrides on top of either mode.
struct weight_spec {
  weight_mode mode = weight_mode::constant;
  scalar value{1.0, 0.0};
  weight_profile profile;
  std::map<vertex_address, scalar> overrides;

  void validate(const tree_spec& t) const;

  friend bool operator==(const weight_spec&, const weight_spec&) = default;

  static weight_spec constant(scalar v) {
    weight_spec w;
    w.mode = weight_mode::constant;
    w.value = v;
    return w;
  }
};

/// Weight of the edge into v (override, else mode value at gen(v)).
scalar weight_at(const vertex_address& v, const weight_spec& w);

/// Finitely supported vector over the vertex set, exact-zero pruned so that
/// support, equality, and iteration order (address order) are canonical.
class sparse_vector {
 public:
  sparse_vector() = default;

  static sparse_vector unit(const vertex_address& v) {
    sparse_vector f;
    f.set(v, scalar(1.0));
    return f;
  }

  void set(const vertex_address& v, scalar c) {
    if (c == scalar{})
      entries_.erase(v);
    else
      entries_[v] = c;
  }

  void add(const vertex_address& v, scalar c) {
    auto [it, fresh] = entries_.try_emplace(v, c);
    if (!fresh) {
      it->second += c;
      if (it->second == scalar{}) entries_.erase(it);
    }
  }

  scalar coeff(const vertex_address& v) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? scalar{} : it->second;
  }

  const std::map<vertex_address, scalar>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  sparse_vector& operator+=(const sparse_vector& o) {
    for (const auto& [v, c] : o.entries_) add(v, c);
    return *this;
  }
  sparse_vector& operator-=(const sparse_vector& o) {
    for (const auto& [v, c] : o.entries_) add(v, -c);
    return *this;
  }
  sparse_vector& operator*=(scalar s) {
    if (s == scalar{}) {
      entries_.clear();
      return *this;
    }
    for (auto& [v, c] : entries_) c *= s;
    return *this;
  }

  friend sparse_vector operator+(sparse_vector a, const sparse_vector& b) { return a += b; }
  friend sparse_vector operator-(sparse_vector a, const sparse_vector& b) { return a -= b; }
  friend sparse_vector operator*(scalar s, sparse_vector a) { return a *= s; }
  friend bool operator==(const sparse_vector&, const sparse_vector&) = default;

 private:
  std::map<vertex_address, scalar> entries_;
};

/// Product of the weights along the descent from v to u (1 when u == v).
scalar path_weight(const vertex_address& v, const vertex_address& u, const weight_spec& w,
                   const tree_spec& t);

/// One application of the weighted backward shift:
/// (Bf)(x) = sum over children u of x of weight(u) f(u).
sparse_vector apply_shift(const sparse_vector& f, const weight_spec& w, const tree_spec& t);

/// B^n f via ancestor walks (B^0 = identity).
sparse_vector apply_shift_power(const sparse_vector& f, std::uint32_t n, const weight_spec& w,
                                const tree_spec& t);

double norm(const sparse_vector& f, const space_spec& s);

/// Boundedness of the constant-weight shift on lp/c0: sup arity finite.
bool rolewicz_bounded(const tree_spec& t, const space_spec& s);

}  // namespace treeshift
