#include "treeshift/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace treeshift {

namespace {

constexpr double kEndpointTol = 1e-9;

/// Levels 0..L-1 below a base vertex with the (complex) path weight of every
/// member, built breadth-first; `seed` scales every coefficient.
struct level_family {
  std::vector<std::vector<std::pair<vertex_address, scalar>>> levels;

  level_family(const vertex_address& base, scalar seed) {
    levels.push_back({{base, seed}});
  }

  void grow(const tree_spec& t, const weight_spec& w, std::size_t cap) {
    std::vector<std::pair<vertex_address, scalar>> next;
    for (const auto& [u, c] : levels.back()) {
      for (std::uint32_t s = 0, a = t.arity_of(u); s < a; ++s) {
        vertex_address x = child_at(u, s, t);
        next.emplace_back(x, c * weight_at(x, w));
        if (next.size() > cap)
          throw enumeration_cap_exceeded("dual family level exceeded the enumeration cap");
      }
    }
    levels.push_back(std::move(next));
  }
};

scalar conj_phase(scalar z) { return std::conj(z / std::abs(z)); }

struct dual_result {
  sparse_vector dual;
  double bound = 0.0;
};

/// Dual family attaining the truncated bound; see dual_witness_sigma.
dual_result make_dual(const level_family& fam, const space_spec& s) {
  dual_result out;
  switch (s.kind) {
    case space_kind::lp: {
      double q = s.p / (s.p - 1.0);
      double a = 0.0;
      for (const auto& level : fam.levels)
        for (const auto& [u, c] : level) a += std::pow(std::abs(c), q);
      double z = std::pow(a, 1.0 / s.p);
      for (const auto& level : fam.levels)
        for (const auto& [u, c] : level)
          out.dual.set(u, conj_phase(c) * std::pow(std::abs(c), q / s.p) / z);
      out.bound = std::pow(a, 1.0 / q);
      return out;
    }
    case space_kind::l1: {
      for (const auto& level : fam.levels) {
        const std::pair<vertex_address, scalar>* best = nullptr;
        for (const auto& entry : level) {
          if (!best || std::abs(entry.second) > std::abs(best->second) ||
              (std::abs(entry.second) == std::abs(best->second) &&
               entry.first < best->first))
            best = &entry;
        }
        out.dual.set(best->first, conj_phase(best->second));
        out.bound += std::abs(best->second);
      }
      return out;
    }
    case space_kind::c0: {
      for (const auto& level : fam.levels)
        for (const auto& [u, c] : level) {
          out.dual.set(u, conj_phase(c));
          out.bound += std::abs(c);
        }
      return out;
    }
  }
  return out;
}

sparse_vector restrict_generation(const sparse_vector& f, long gen) {
  sparse_vector out;
  for (const auto& [u, c] : f.entries())
    if (generation_of(u) == gen) out.set(u, c);
  return out;
}

void check_endpoint(const sparse_vector& got, const sparse_vector& want,
                    const space_spec& s, const char* what) {
  if (norm(got - want, s) > kEndpointTol)
    throw std::logic_error(std::string(what) + ": endpoint drifted beyond tolerance");
}

}  // namespace

std::pair<sparse_vector, double> dual_witness_sigma(const vertex_address& v, int levels,
                                                    const tree_spec& t, const weight_spec& w,
                                                    const space_spec& s, std::size_t cap) {
  if (levels < 1) throw invalid_spec("dual witness needs at least one level");
  level_family fam(v, scalar(1.0));
  for (int j = 1; j < levels; ++j) fam.grow(t, w, cap);
  auto d = make_dual(fam, s);
  return {std::move(d.dual), d.bound};
}

delta_chain build_chain_from_zero(const vertex_address& v, double delta, const tree_spec& t,
                                  const weight_spec& w, const space_spec& s,
                                  const truncation_policy& policy) {
  if (!(delta > 0.0)) throw invalid_spec("delta must be positive");
  level_family fam(v, scalar(1.0));
  double best = 0.0;
  for (int n = 1; n <= policy.max_level; ++n) {
    auto d = make_dual(fam, s);
    best = std::max(best, d.bound);
    if (d.bound * delta > policy.margin) {
      delta_chain chain;
      chain.delta = delta;
      chain.space = s;
      chain_witness wit;
      wit.direction = chain_direction::from_zero;
      wit.levels = n;
      wit.bound = d.bound;
      wit.dual = d.dual;

      long base_gen = generation_of(v);
      scalar scale(1.0 / d.bound);
      chain.vectors.emplace_back();  // f_0 = 0
      for (int l = 1; l <= n; ++l) {
        sparse_vector g = scale * restrict_generation(d.dual, base_gen + (n - l));
        sparse_vector f = apply_shift(chain.vectors.back(), w, t) + g;
        wit.perturbations.push_back(std::move(g));
        chain.vectors.push_back(std::move(f));
      }
      check_endpoint(chain.vectors.back(), sparse_vector::unit(v), s, "from-zero chain");
      chain.witnesses.push_back(std::move(wit));
      return chain;
    }
    fam.grow(t, w, policy.enumeration_cap);
  }
  throw criterion_not_met(
      "dual bound reached " + std::to_string(best) + " after " +
          std::to_string(policy.max_level) + " levels; needs > " +
          std::to_string(policy.margin / delta),
      best, policy.max_level);
}

delta_chain build_chain_to_zero(const vertex_address& v, double delta, const tree_spec& t,
                                const weight_spec& w, const space_spec& s,
                                const truncation_policy& policy) {
  if (!(delta > 0.0)) throw invalid_spec("delta must be positive");
  delta_chain chain;
  chain.delta = delta;
  chain.space = s;

  if (t.kind == tree_kind::rooted) {
    // Finite trajectory: B annihilates e_root after gen(v)+1 steps and every
    // step defect is exactly zero, so any delta works.
    chain.vectors.push_back(sparse_vector::unit(v));
    while (!chain.vectors.back().empty())
      chain.vectors.push_back(apply_shift(chain.vectors.back(), w, t));
    return chain;
  }

  double best = 0.0;
  for (int m = 1; m <= policy.max_level; ++m) {
    vertex_address wm = ancestor_of(v, static_cast<std::uint32_t>(m), t);
    scalar denom = path_weight(wm, v, w, t);
    level_family fam(wm, scalar(1.0) / denom);
    for (int j = 1; j < m; ++j) fam.grow(t, w, policy.enumeration_cap);
    auto d = make_dual(fam, s);
    best = std::max(best, d.bound);
    if (d.bound * delta > policy.margin) {
      chain_witness wit;
      wit.direction = chain_direction::to_zero;
      wit.levels = m;
      wit.bound = d.bound;
      wit.dual = d.dual;

      long base_gen = generation_of(v);
      scalar scale(-1.0 / d.bound);
      chain.vectors.push_back(sparse_vector::unit(v));
      for (int j = 1; j <= m; ++j) {
        sparse_vector q = scale * restrict_generation(d.dual, base_gen - j);
        sparse_vector p = apply_shift(chain.vectors.back(), w, t) + q;
        wit.perturbations.push_back(std::move(q));
        chain.vectors.push_back(std::move(p));
      }
      check_endpoint(chain.vectors.back(), sparse_vector{}, s, "to-zero chain");
      chain.witnesses.push_back(std::move(wit));
      return chain;
    }
  }
  throw criterion_not_met(
      "normalized dual bound reached " + std::to_string(best) + " after " +
          std::to_string(policy.max_level) + " ancestor steps; needs > " +
          std::to_string(policy.margin / delta),
      best, policy.max_level);
}

delta_chain build_loop_chain(const vertex_address& v, double delta, const tree_spec& t,
                             const weight_spec& w, const space_spec& s,
                             const truncation_policy& policy) {
  delta_chain down = build_chain_to_zero(v, delta, t, w, s, policy);
  delta_chain up = build_chain_from_zero(v, delta, t, w, s, policy);
  delta_chain chain;
  chain.delta = delta;
  chain.space = s;
  chain.vectors = std::move(down.vectors);
  chain.vectors.insert(chain.vectors.end(), up.vectors.begin() + 1, up.vectors.end());
  chain.witnesses = std::move(down.witnesses);
  for (auto& wit : up.witnesses) chain.witnesses.push_back(std::move(wit));
  return chain;
}

chain_report verify_chain(const std::vector<sparse_vector>& vectors, double delta,
                          const tree_spec& t, const weight_spec& w, const space_spec& s) {
  if (vectors.size() < 2) throw invalid_spec("a chain needs at least two vectors");
  chain_report rep;
  rep.valid = true;
  std::size_t n = vectors.size() - 1;
  std::vector<sparse_vector> defects;
  defects.reserve(n);
  for (std::size_t l = 1; l <= n; ++l) {
    sparse_vector g = vectors[l] - apply_shift(vectors[l - 1], w, t);
    double d = norm(g, s);
    rep.step_defects.push_back(d);
    if (!(d < delta)) {
      rep.valid = false;
      rep.violations.push_back(l);
    }
    defects.push_back(std::move(g));
  }
  sparse_vector recon =
      apply_shift_power(vectors[0], static_cast<std::uint32_t>(n), w, t);
  for (std::size_t l = 1; l <= n; ++l)
    recon += apply_shift_power(defects[l - 1], static_cast<std::uint32_t>(n - l), w, t);
  rep.reconstruction_error = norm(vectors[n] - recon, s);
  return rep;
}

}  // namespace treeshift
