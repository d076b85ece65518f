#include "treeshift/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace treeshift {

namespace {

constexpr double kRatioLogTol = 1e-12;

double mag(scalar z) { return std::abs(z); }

/// Per-level aggregates of |path weight from a base vertex|, either power
/// sums with exponent q or level sups. Vertices with an override at or below
/// them are tracked individually; everything else advances in bulk groups
/// (count, common member value), so branching trees cost O(levels * specials)
/// instead of an exponential enumeration.
class level_aggregator {
 public:
  level_aggregator(const vertex_address& base, const tree_spec& t, const weight_spec& w,
                   dual_mode mode)
      : t_(t), w_(w), mode_(mode), gen_(generation_of(base)) {
    if (is_special(base))
      specials_.emplace_back(base, 1.0);
    else
      groups_.push_back({1.0, 1.0});
  }

  /// Aggregate over the current level.
  double value() const {
    double acc = 0.0;
    if (mode_.sup_mode) {
      for (const auto& [x, m] : specials_) acc = std::max(acc, m);
      for (const auto& g : groups_) acc = std::max(acc, g.member);
    } else {
      for (const auto& [x, m] : specials_) acc += m;
      for (const auto& g : groups_) acc += g.count * g.member;
    }
    return acc;
  }

  /// Advance the frontier one level down.
  void step() {
    double bulk_arity = t_.arity.at(gen_);
    double bulk_weight = member_factor(default_weight(gen_ + 1));
    for (auto& g : groups_) {
      if (!mode_.sup_mode) g.count *= bulk_arity;
      g.member *= bulk_weight;
    }
    std::vector<std::pair<vertex_address, double>> next;
    for (const auto& [x, m] : specials_) {
      std::set<std::uint32_t> special_slots;
      auto mark = [&](const std::map<vertex_address, std::uint32_t>::key_type& addr) {
        auto word = descent_between(x, addr, t_);
        if (word && !word->empty()) special_slots.insert((*word)[0]);
      };
      for (const auto& [addr, a] : t_.arity_overrides) mark(addr);
      for (const auto& [addr, c] : w_.overrides) mark(addr);
      double bulk = static_cast<double>(t_.arity_of(x)) -
                    static_cast<double>(special_slots.size());
      if (bulk > 0.0) groups_.push_back({bulk, m * bulk_weight});
      for (auto s : special_slots) {
        vertex_address c = child_at(x, s, t_);
        next.emplace_back(c, m * member_factor(weight_at(c, w_)));
      }
    }
    specials_ = std::move(next);
    ++gen_;
  }

 private:
  bool is_special(const vertex_address& x) const {
    for (const auto& [addr, a] : t_.arity_overrides)
      if (descent_between(x, addr, t_)) return true;
    for (const auto& [addr, c] : w_.overrides)
      if (descent_between(x, addr, t_)) return true;
    return false;
  }

  scalar default_weight(long gen) const {
    return w_.mode == weight_mode::constant ? w_.value : w_.profile.at(gen);
  }

  double member_factor(scalar z) const {
    return mode_.sup_mode ? mag(z) : std::pow(mag(z), mode_.exponent);
  }

  struct group {
    double count;
    double member;
  };

  const tree_spec& t_;
  const weight_spec& w_;
  dual_mode mode_;
  long gen_;
  std::vector<std::pair<vertex_address, double>> specials_;
  std::vector<group> groups_;
};

/// terms[j] = level aggregate at depth j below base, for j = 0..depth_max.
std::vector<double> level_terms(const vertex_address& base, std::uint32_t depth_max,
                                const tree_spec& t, const weight_spec& w, dual_mode mode) {
  std::vector<double> terms;
  terms.reserve(depth_max + 1);
  level_aggregator agg(base, t, w, mode);
  terms.push_back(agg.value());
  for (std::uint32_t j = 0; j < depth_max; ++j) {
    agg.step();
    terms.push_back(agg.value());
  }
  return terms;
}

bool covered_by_profiles(const tree_spec& t, const weight_spec& w) {
  return t.arity_overrides.empty() && w.overrides.empty();
}

double mean_log(const std::vector<scalar>& vals) {
  double acc = 0.0;
  for (const auto& z : vals) acc += std::log(mag(z));
  return acc / static_cast<double>(vals.size());
}

double mean_log_arity(const std::vector<std::uint32_t>& vals) {
  double acc = 0.0;
  for (auto a : vals) acc += std::log(static_cast<double>(a));
  return acc / static_cast<double>(vals.size());
}

double weight_tail_mean_log(const weight_spec& w, bool left) {
  if (w.mode == weight_mode::constant) return std::log(mag(w.value));
  return mean_log(left ? w.profile.left_period : w.profile.period);
}

/// Per-step log of the downward per-period growth factor:
/// mean log arity (sum mode only) + q * mean log |weight| over the right
/// tails. The series diverges iff this is >= 0.
double right_tail_log_step(const tree_spec& t, const weight_spec& w, dual_mode mode) {
  double step = mode.sup_mode ? 0.0 : mean_log_arity(t.arity.period);
  double q = mode.sup_mode ? 1.0 : mode.exponent;
  return step + q * weight_tail_mean_log(w, /*left=*/false);
}

bool left_tail_branches(const tree_spec& t) {
  return std::any_of(t.arity.left_period.begin(), t.arity.left_period.end(),
                     [](std::uint32_t a) { return a > 1; });
}

/// Exact divergence of the normalized ancestor series over the left tails:
/// branching left tail forces divergence in power-sum mode; otherwise the
/// series diverges iff the per-period weight product does not exceed 1.
bool left_series_diverges_exact(const tree_spec& t, const weight_spec& w, dual_mode mode) {
  if (!mode.sup_mode && left_tail_branches(t)) return true;
  double q = mode.sup_mode ? 1.0 : mode.exponent;
  return q * weight_tail_mean_log(w, /*left=*/true) <= kRatioLogTol;
}

}  // namespace

dual_mode dual_exponent(const space_spec& s) {
  switch (s.kind) {
    case space_kind::l1:
      return {true, 1.0};
    case space_kind::lp:
      return {false, s.p / (s.p - 1.0)};
    case space_kind::c0:
      return {false, 1.0};
  }
  return {true, 1.0};
}

series_verdict series_root_condition(const vertex_address& v, const tree_spec& t,
                                     const weight_spec& w, const space_spec& s,
                                     const truncation_policy& policy) {
  dual_mode mode = dual_exponent(s);
  series_verdict out;
  out.max_level = policy.max_level;
  out.divergence_threshold = policy.divergence_threshold;

  auto terms = level_terms(v, static_cast<std::uint32_t>(policy.max_level), t, w, mode);
  double acc = 0.0;
  for (int n = 1; n <= policy.max_level; ++n) {
    acc += terms[static_cast<std::size_t>(n)];
    out.partial_sums.push_back(acc);
  }

  if (covered_by_profiles(t, w)) {
    out.rule = "geometric-period-ratio";
    out.verdict = right_tail_log_step(t, w, mode) >= -kRatioLogTol
                      ? series_outcome::diverges
                      : series_outcome::converges;
    return out;
  }
  out.rule = "partial-sum-threshold";
  bool exceeded = std::any_of(out.partial_sums.begin(), out.partial_sums.end(),
                              [&](double x) { return x > policy.divergence_threshold; });
  out.verdict = exceeded ? series_outcome::diverges : series_outcome::inconclusive;
  return out;
}

series_verdict series_left_condition(const vertex_address& v, const tree_spec& t,
                                     const weight_spec& w, const space_spec& s,
                                     const truncation_policy& policy) {
  if (t.kind == tree_kind::rooted)
    throw not_applicable("the ancestor series only applies to unrooted trees");
  dual_mode mode = dual_exponent(s);
  series_verdict out;
  out.max_level = policy.max_level;
  out.divergence_threshold = policy.divergence_threshold;

  double q = mode.sup_mode ? 1.0 : mode.exponent;
  for (int n = 1; n <= policy.max_level; ++n) {
    vertex_address wn = ancestor_of(v, static_cast<std::uint32_t>(n), t);
    double denom = std::pow(mag(path_weight(wn, v, w, t)), q);
    auto terms = level_terms(wn, static_cast<std::uint32_t>(n - 1), t, w, mode);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += terms[static_cast<std::size_t>(j)];
    out.partial_sums.push_back(sum / denom);
  }

  if (covered_by_profiles(t, w)) {
    out.rule = "geometric-period-ratio";
    out.verdict = left_series_diverges_exact(t, w, mode) ? series_outcome::diverges
                                                         : series_outcome::converges;
    return out;
  }
  out.rule = "partial-sum-threshold";
  // Heuristic: settled divergent only when the whole top quartile of the
  // window sits above the threshold.
  std::size_t quartile = (out.partial_sums.size() + 3) / 4;
  bool settled = quartile > 0;
  for (std::size_t i = out.partial_sums.size() - quartile; i < out.partial_sums.size(); ++i)
    settled = settled && out.partial_sums[i] > policy.divergence_threshold;
  out.verdict = settled ? series_outcome::diverges : series_outcome::inconclusive;
  return out;
}

classification classify(const tree_spec& t, const weight_spec& w, const space_spec& s,
                        const vertex_address& v, const truncation_policy& policy) {
  if (w.mode == weight_mode::constant && s.kind != space_kind::l1 &&
      !rolewicz_bounded(t, s))
    throw unbounded_operator("constant-weight shift unbounded on this tree");

  classification out;
  out.condition_i = series_root_condition(v, t, w, s, policy);
  if (t.kind == tree_kind::rooted) {
    switch (out.condition_i.verdict) {
      case series_outcome::diverges:
        out.result = recurrence::chain_recurrent;
        break;
      case series_outcome::converges:
        out.result = recurrence::not_chain_recurrent;
        break;
      case series_outcome::inconclusive:
        out.result = recurrence::inconclusive;
        break;
    }
    return out;
  }
  out.condition_ii = series_left_condition(v, t, w, s, policy);
  auto a = out.condition_i.verdict;
  auto b = out.condition_ii->verdict;
  if (a == series_outcome::diverges && b == series_outcome::diverges)
    out.result = recurrence::chain_recurrent;
  else if (a == series_outcome::converges || b == series_outcome::converges)
    out.result = recurrence::not_chain_recurrent;
  else
    out.result = recurrence::inconclusive;
  return out;
}

closed_form_result classify_closed_form(const tree_spec& t, const weight_spec& w,
                                        const space_spec& s, const vertex_address& v) {
  (void)v;  // the verdict is vertex-independent on covered data
  if (!covered_by_profiles(t, w)) return closed_form_result::not_covered;
  dual_mode mode = dual_exponent(s);
  bool down = right_tail_log_step(t, w, mode) >= -kRatioLogTol;
  if (t.kind == tree_kind::rooted)
    return down ? closed_form_result::chain_recurrent
                : closed_form_result::not_chain_recurrent;
  bool up = left_series_diverges_exact(t, w, mode);
  return down && up ? closed_form_result::chain_recurrent
                    : closed_form_result::not_chain_recurrent;
}

invariance_report shift_invariance_oracle(const two_tailed_profile<double>& steps,
                                          const std::vector<long>& m_list) {
  auto window_log = [&](long from, long count) {
    double acc = 0.0;
    for (long i = 0; i < count; ++i) acc += std::log(steps.at(from + i));
    return acc;
  };

  invariance_report rep;
  long pr = static_cast<long>(steps.period.size());
  long pl = static_cast<long>(steps.left_period.size());
  // Canonical verdicts straight off the period arrays.
  double right_log = window_log(steps.right_tail_start(), pr);
  double left_log = window_log(steps.left_tail_end() - pl + 1, pl);
  rep.forward_diverges = right_log >= -kRatioLogTol;
  rep.backward_diverges = left_log <= kRatioLogTol;

  for (long m : m_list) {
    invariance_entry e;
    e.m = m;
    // Forward terms multiply a_i for i >= m; once past the explicit window
    // the per-period ratio is one full period product at m's own phase.
    long f0 = std::max(m, steps.right_tail_start());
    e.forward_diverges = window_log(f0, pr) >= -kRatioLogTol;
    // Backward terms divide by a_i for i <= m, marching left.
    long b0 = std::min(m, steps.left_tail_end());
    e.backward_diverges = window_log(b0 - pl + 1, pl) <= kRatioLogTol;
    rep.forward_agrees = rep.forward_agrees && e.forward_diverges == rep.forward_diverges;
    rep.backward_agrees =
        rep.backward_agrees && e.backward_diverges == rep.backward_diverges;
    rep.per_m.push_back(e);
  }
  return rep;
}

}  // namespace treeshift
