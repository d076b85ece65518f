#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treeshift/shift.hpp"

namespace treeshift {

enum class series_outcome { diverges, converges, inconclusive };

/// Decision for one divergence series, with the truncated evidence that was
/// computed along the way. `rule` names the procedure that settled (or failed
/// to settle) the verdict: "geometric-period-ratio" for the exact periodic
/// rule, "partial-sum-threshold" for the truncated heuristic,
/// "closed-form-corollary" when a corollary-level shortcut decided it.
struct series_verdict {
  series_outcome verdict = series_outcome::inconclusive;
  std::string rule;
  std::vector<double> partial_sums;
  int max_level = 0;
  double divergence_threshold = 0.0;
};

struct truncation_policy {
  int max_level = 64;
  std::size_t enumeration_cap = 1'000'000;
  double divergence_threshold = 1e6;
  /// Relative slack the chain builders demand on t*delta > 1; kept barely
  /// above 1 so strict inequalities survive floating point.
  double margin = 1.0 + 1e-9;
};

/// How level data enters the criteria: sup of |path weight| per level (l1) or
/// power sums with the given exponent (p* for lp, 1 for c0).
struct dual_mode {
  bool sup_mode = false;
  double exponent = 1.0;
};

dual_mode dual_exponent(const space_spec& s);

/// Divergence of the downward series at v:
///   sum over n >= 1 of [sum over u in Child^n(v) of |weight(v->u)|^q]
/// (sup over the level instead of the sum in sup mode).
series_verdict series_root_condition(const vertex_address& v, const tree_spec& t,
                                     const weight_spec& w, const space_spec& s,
                                     const truncation_policy& policy = {});

/// Divergence of the normalized ancestor series at v (unrooted only):
///   S(n) = sum over j < n of [sum over u in Child^j(parent^n(v)) of
///          |weight(parent^n(v)->u) / weight(parent^n(v)->v)|^q].
series_verdict series_left_condition(const vertex_address& v, const tree_spec& t,
                                     const weight_spec& w, const space_spec& s,
                                     const truncation_policy& policy = {});

enum class recurrence { chain_recurrent, not_chain_recurrent, inconclusive };

struct classification {
  recurrence result = recurrence::inconclusive;
  series_verdict condition_i;
  std::optional<series_verdict> condition_ii;
};

/// Chain recurrence of the shift: rooted trees need the downward series to
/// diverge; unrooted trees need both series to diverge.
classification classify(const tree_spec& t, const weight_spec& w, const space_spec& s,
                        const vertex_address& v = {}, const truncation_policy& policy = {});

enum class closed_form_result { chain_recurrent, not_chain_recurrent, not_covered };

/// Exact verdict for override-free specs via per-period geometric means; the
/// verdict is provably the same at every vertex, so `v` only documents the
/// query point.
closed_form_result classify_closed_form(const tree_spec& t, const weight_spec& w,
                                        const space_spec& s, const vertex_address& v = {});

/// Start-index independence of the two one-sided product series built from a
/// positive eventually-periodic step profile a:
///   forward(m):  sum over n of prod_{i=m..m+n-1} a_i
///   backward(m): sum over n of prod_{i=m-n+1..m} 1/a_i
/// Each verdict is decided by the geometric rule at m's own phase; the lemma
/// says neither depends on m.
struct invariance_entry {
  long m = 0;
  bool forward_diverges = false;
  bool backward_diverges = false;
};

struct invariance_report {
  std::vector<invariance_entry> per_m;
  bool forward_diverges = false;
  bool backward_diverges = false;
  bool forward_agrees = true;
  bool backward_agrees = true;
};

invariance_report shift_invariance_oracle(const two_tailed_profile<double>& steps,
                                          const std::vector<long>& m_list);

}  // namespace treeshift
