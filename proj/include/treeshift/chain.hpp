#pragma once

#include <utility>
#include <vector>

#include "treeshift/criteria.hpp"

namespace treeshift {

enum class chain_direction { from_zero, to_zero };

/// Constructive certificate for one half of a delta-chain: the dual family
/// used, the bound it attains (t or s), and the per-step perturbations.
struct chain_witness {
  chain_direction direction = chain_direction::from_zero;
  int levels = 0;
  double bound = 0.0;
  sparse_vector dual;
  std::vector<sparse_vector> perturbations;
};

struct delta_chain {
  double delta = 0.0;
  space_spec space;
  std::vector<sparse_vector> vectors;
  std::vector<chain_witness> witnesses;
};

/// Dual family sigma on levels 0..levels-1 below v together with the bound
///   t = sum over those levels of weight(v->u) sigma(u)
/// it attains: Hölder-equality profile for lp, per-level point masses at the
/// largest |path weight| (ties to the lowest address) for l1, unit conjugate
/// phases for c0. All products weight(v->u) sigma(u) are nonnegative reals.
std::pair<sparse_vector, double> dual_witness_sigma(const vertex_address& v, int levels,
                                                    const tree_spec& t, const weight_spec& w,
                                                    const space_spec& s,
                                                    std::size_t cap = default_enumeration_cap);

/// Shortest delta-chain 0 -> e_v: grows the level count until the dual bound
/// clears margin/delta, then plays the scaled dual family back as
/// perturbations. Throws criterion_not_met when the level budget runs out.
delta_chain build_chain_from_zero(const vertex_address& v, double delta, const tree_spec& t,
                                  const weight_spec& w, const space_spec& s,
                                  const truncation_policy& policy = {});

/// Delta-chain e_v -> 0. Rooted trees return the exact finite trajectory
/// (every step defect is zero); unrooted trees climb the ancestor spine until
/// the normalized dual bound clears margin/delta.
delta_chain build_chain_to_zero(const vertex_address& v, double delta, const tree_spec& t,
                                const weight_spec& w, const space_spec& s,
                                const truncation_policy& policy = {});

/// Loop e_v -> 0 -> e_v, concatenating the two constructions at the shared
/// zero vector.
delta_chain build_loop_chain(const vertex_address& v, double delta, const tree_spec& t,
                             const weight_spec& w, const space_spec& s,
                             const truncation_policy& policy = {});

/// Replay of the recurrence lemma on an arbitrary vector sequence: defect
/// g_l = f_l - B(f_{l-1}) per step, validity = all ||g_l|| < delta, plus the
/// telescoping identity f_n = B^n(f_0) + sum_l B^{n-l}(g_l) as a residual.
struct chain_report {
  bool valid = false;
  std::vector<double> step_defects;
  double reconstruction_error = 0.0;
  std::vector<std::size_t> violations;
};

chain_report verify_chain(const std::vector<sparse_vector>& vectors, double delta,
                          const tree_spec& t, const weight_spec& w, const space_spec& s);

}  // namespace treeshift
