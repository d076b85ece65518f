#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_util.hpp"

using namespace treeshift;
using tsu::addr;
using doctest::Approx;

namespace {

/// Sup over the union of supports of |difference of coefficients|.
double max_diff(const sparse_vector& a, const sparse_vector& b) {
  double m = 0.0;
  for (const auto& [v, c] : a.entries()) m = std::max(m, std::abs(c - b.coeff(v)));
  for (const auto& [v, c] : b.entries()) m = std::max(m, std::abs(c - a.coeff(v)));
  return m;
}

}  // namespace

TEST_SUITE("shift") {

TEST_CASE("weights per vertex") {
  weight_spec cw = weight_spec::constant(scalar(2.5, 0.0));
  CHECK(weight_at(addr(0, {1, 0}), cw) == scalar(2.5, 0.0));

  weight_spec pw;
  pw.mode = weight_mode::per_generation;
  pw.profile.prefix[0] = scalar(5.0, 0.0);
  pw.profile.period = {scalar(2.0, 0.0), scalar(3.0, 0.0)};
  pw.profile.left_period = {scalar(0.5, 0.0)};
  CHECK(weight_at(addr(0), pw) == scalar(5.0, 0.0));
  CHECK(weight_at(addr(0, {0}), pw) == scalar(2.0, 0.0));
  CHECK(weight_at(addr(0, {0, 0}), pw) == scalar(3.0, 0.0));
  CHECK(weight_at(addr(0, {0, 0, 0}), pw) == scalar(2.0, 0.0));
  CHECK(weight_at(addr(2), pw) == scalar(0.5, 0.0));

  pw.overrides[addr(0, {0})] = scalar(0.0, 7.0);
  CHECK(weight_at(addr(0, {0}), pw) == scalar(0.0, 7.0));

  SUBCASE("validation rejects zeros and non-canonical override addresses") {
    tree_spec t = tsu::line_tree(tree_kind::rooted);
    weight_spec bad = weight_spec::constant(scalar(0.0, 0.0));
    CHECK_THROWS_AS(bad.validate(t), invalid_spec);
    weight_spec ok = weight_spec::constant(scalar(1.0, 0.0));
    ok.overrides[addr(1)] = scalar(2.0, 0.0);  // rooted addresses cannot go up
    CHECK_THROWS_AS(ok.validate(t), invalid_spec);
  }
}

TEST_CASE("path weights") {
  tree_spec line = tsu::line_tree(tree_kind::rooted);
  weight_spec two = weight_spec::constant(scalar(2.0, 0.0));

  CHECK(path_weight(addr(0), addr(0), two, line) == scalar(1.0, 0.0));
  CHECK(path_weight(addr(0), addr(0, {0, 0, 0}), two, line) == scalar(8.0, 0.0));
  CHECK_THROWS_AS(path_weight(addr(0, {0, 0}), addr(0, {0}), two, line), not_a_descendant);

  SUBCASE("siblings are not descendants") {
    tree_spec t = tsu::regular_tree(tree_kind::rooted, 2);
    CHECK_THROWS_AS(path_weight(addr(0, {0}), addr(0, {1}), two, t), not_a_descendant);
  }
  SUBCASE("overrides multiply in") {
    tree_spec t = tsu::regular_tree(tree_kind::rooted, 2);
    weight_spec w = weight_spec::constant(scalar(1.0, 0.0));
    w.overrides[addr(0, {1})] = scalar(3.0, 0.0);
    w.overrides[addr(0, {1, 0})] = scalar(2.0, 0.0);
    CHECK(path_weight(addr(0), addr(0, {1, 0}), w, t) == scalar(6.0, 0.0));
    CHECK(path_weight(addr(0), addr(0, {0, 0}), w, t) == scalar(1.0, 0.0));
  }
  SUBCASE("complex phases accumulate") {
    tree_spec t = tsu::line_tree(tree_kind::unrooted);
    weight_spec w = weight_spec::constant(scalar(0.0, 1.0));
    CHECK(path_weight(addr(2), addr(0), w, t) == scalar(-1.0, 0.0));
  }
  SUBCASE("paths chain multiplicatively") {
    tsu::rng r(606);
    for (int i = 0; i < 30; ++i) {
      tree_spec t = tsu::random_tree(r);
      weight_spec w = tsu::random_weights(r, t);
      vertex_address v = tsu::random_vertex(r, t, 2);
      auto mids = descendants_at(v, 2, t, 10000);
      vertex_address mid = mids[static_cast<std::size_t>(r.pick(
          0, static_cast<int>(mids.size()) - 1))];
      auto lows = descendants_at(mid, 2, t, 10000);
      vertex_address low = lows[static_cast<std::size_t>(r.pick(
          0, static_cast<int>(lows.size()) - 1))];
      scalar whole = path_weight(v, low, w, t);
      scalar split = path_weight(v, mid, w, t) * path_weight(mid, low, w, t);
      CHECK(std::abs(whole - split) < 1e-12 * (1.0 + std::abs(whole)));
    }
  }
}

TEST_CASE("single shift application") {
  tree_spec rbin = tsu::regular_tree(tree_kind::rooted, 2);
  weight_spec two = weight_spec::constant(scalar(2.0, 0.0));

  CHECK(apply_shift(sparse_vector::unit(addr(0, {1})), two, rbin) ==
        scalar(2.0, 0.0) * sparse_vector::unit(addr(0)));
  CHECK(apply_shift(sparse_vector::unit(addr(0)), two, rbin).empty());

  SUBCASE("siblings pool at the parent") {
    sparse_vector f;
    f.set(addr(0, {0}), scalar(1.0, 0.0));
    f.set(addr(0, {1}), scalar(3.0, 0.0));
    sparse_vector g = apply_shift(f, two, rbin);
    CHECK(g.size() == 1);
    CHECK(g.coeff(addr(0)) == scalar(8.0, 0.0));
  }
  SUBCASE("unrooted anchors shift upward") {
    tree_spec line = tsu::line_tree(tree_kind::unrooted);
    sparse_vector g = apply_shift(sparse_vector::unit(addr(0)), two, line);
    CHECK(g.size() == 1);
    CHECK(g.coeff(addr(1)) == scalar(2.0, 0.0));
  }
  SUBCASE("linearity") {
    tsu::rng r(707);
    for (int i = 0; i < 20; ++i) {
      tree_spec t = tsu::random_tree(r);
      weight_spec w = tsu::random_weights(r, t);
      sparse_vector f = tsu::random_vector(r, t, 5, 3);
      sparse_vector g = tsu::random_vector(r, t, 5, 3);
      scalar alpha = tsu::random_scalar(r, 0.3, 2.0);
      sparse_vector lhs = apply_shift(alpha * f + g, w, t);
      sparse_vector rhs = alpha * apply_shift(f, w, t) + apply_shift(g, w, t);
      CHECK(max_diff(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("shift powers") {
  tree_spec rbin = tsu::regular_tree(tree_kind::rooted, 2);
  weight_spec two = weight_spec::constant(scalar(2.0, 0.0));

  SUBCASE("zeroth power is the identity") {
    tsu::rng r(808);
    tree_spec t = tsu::random_tree(r);
    sparse_vector f = tsu::random_vector(r, t, 4, 3);
    CHECK(apply_shift_power(f, 0, two, t) == f);
  }
  SUBCASE("rooted walks that overshoot vanish") {
    CHECK(apply_shift_power(sparse_vector::unit(addr(0, {0})), 3, two, rbin).empty());
    CHECK(apply_shift_power(sparse_vector::unit(addr(0, {0, 1})), 2, two, rbin) ==
          scalar(4.0, 0.0) * sparse_vector::unit(addr(0)));
  }
  SUBCASE("matches iterated single steps") {
    tsu::rng r(909);
    for (int i = 0; i < 20; ++i) {
      tree_spec t = tsu::random_tree(r);
      weight_spec w = tsu::random_weights(r, t);
      sparse_vector f = tsu::random_vector(r, t, 5, 3);
      sparse_vector once = f;
      for (int n = 1; n <= 4; ++n) {
        once = apply_shift(once, w, t);
        CHECK(max_diff(apply_shift_power(f, static_cast<std::uint32_t>(n), w, t), once) <
              1e-12);
      }
    }
  }
  SUBCASE("matches the level-sum formula") {
    // (B^n f)(x) = sum over u in Child^n(x) of pathweight(x -> u) f(u)
    tsu::rng r(1010);
    for (int i = 0; i < 20; ++i) {
      tree_spec t = tsu::random_tree(r);
      weight_spec w = tsu::random_weights(r, t);
      sparse_vector f = tsu::random_vector(r, t, 5, 3);
      std::uint32_t n = static_cast<std::uint32_t>(r.pick(1, 3));
      sparse_vector got = apply_shift_power(f, n, w, t);
      std::set<vertex_address> bases;
      for (const auto& [u, c] : f.entries()) {
        if (t.kind == tree_kind::rooted && u.down.size() < n) continue;
        bases.insert(ancestor_of(u, n, t));
      }
      for (const auto& [x, c] : got.entries()) CHECK(bases.contains(x));
      for (const auto& x : bases) {
        scalar want{};
        for (const auto& u : descendants_at(x, n, t, 100000))
          want += path_weight(x, u, w, t) * f.coeff(u);
        CHECK(std::abs(got.coeff(x) - want) < 1e-12 * (1.0 + std::abs(want)));
      }
    }
  }
}

TEST_CASE("norms") {
  sparse_vector f;
  f.set(addr(0), scalar(1.0, 0.0));
  f.set(addr(0, {0}), scalar(-2.0, 0.0));
  f.set(addr(0, {0, 0}), scalar(3.0, 4.0));

  CHECK(norm(f, space_spec::l1()) == Approx(8.0));
  CHECK(norm(f, space_spec::lp(2.0)) == Approx(std::sqrt(30.0)));
  CHECK(norm(f, space_spec::lp(3.0)) == Approx(std::cbrt(1.0 + 8.0 + 125.0)));
  CHECK(norm(f, space_spec::c0()) == Approx(5.0));
  CHECK(norm(sparse_vector{}, space_spec::lp(2.0)) == 0.0);

  SUBCASE("homogeneity and triangle inequality") {
    tsu::rng r(1111);
    for (int i = 0; i < 20; ++i) {
      tree_spec t = tsu::random_tree(r);
      space_spec s = tsu::random_space(r);
      sparse_vector a = tsu::random_vector(r, t, 5, 3);
      sparse_vector b = tsu::random_vector(r, t, 5, 3);
      scalar alpha = tsu::random_scalar(r, 0.3, 2.0);
      CHECK(norm(alpha * a, s) == Approx(std::abs(alpha) * norm(a, s)));
      CHECK(norm(a + b, s) <= norm(a, s) + norm(b, s) + 1e-12);
    }
  }
  SUBCASE("lp parameter bounds") {
    CHECK_THROWS_AS(space_spec::lp(1.0), invalid_spec);
    CHECK_THROWS_AS(space_spec::lp(0.5), invalid_spec);
  }
}

TEST_CASE("sparse vector bookkeeping") {
  sparse_vector f;
  f.add(addr(0), scalar(1.0, 0.0));
  f.add(addr(0), scalar(-1.0, 0.0));
  CHECK(f.empty());

  f.set(addr(0, {1}), scalar(2.0, 0.0));
  f.set(addr(0, {1}), scalar{});
  CHECK(f.empty());

  f.set(addr(0), scalar(3.0, 0.0));
  f *= scalar{};
  CHECK(f.empty());

  CHECK(sparse_vector::unit(addr(1)).coeff(addr(1)) == scalar(1.0, 0.0));
  CHECK(sparse_vector::unit(addr(1)) == sparse_vector::unit(addr(1)));
  CHECK_FALSE(sparse_vector::unit(addr(1)) == sparse_vector::unit(addr(2)));
}

TEST_CASE("boundedness screen") {
  CHECK(rolewicz_bounded(tsu::regular_tree(tree_kind::rooted, 5), space_spec::lp(2.0)));
  CHECK(rolewicz_bounded(tsu::line_tree(tree_kind::unrooted), space_spec::c0()));
}

}  // TEST_SUITE
