#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_util.hpp"

using namespace treeshift;
using tsu::addr;

TEST_SUITE("tree") {

TEST_CASE("canonical addresses") {
  SUBCASE("rooted descent is already canonical") {
    tree_spec t = tsu::regular_tree(tree_kind::rooted, 2);
    CHECK(canonical_address(0, {1}, t) == addr(0, {1}));
    CHECK(canonical_address(0, {}, t) == addr(0));
  }
  SUBCASE("spine retrace collapses") {
    tree_spec t = tsu::line_tree(tree_kind::unrooted);
    CHECK(canonical_address(1, {0}, t) == addr(0));
    CHECK(canonical_address(3, {0, 0}, t) == addr(1));
  }
  SUBCASE("designated spine slots") {
    tree_spec t = tsu::regular_tree(tree_kind::unrooted, 3);
    t.spine = {{1, 2}, {2, 1}};
    t.validate();
    CHECK(canonical_address(1, {2}, t) == addr(0));
    CHECK(canonical_address(1, {0}, t) == addr(1, {0}));
    CHECK(canonical_address(2, {1, 1}, t) == addr(1, {1}));
    // collapse continues across heights when the word keeps retracing
    CHECK(canonical_address(2, {1, 2, 0}, t) == addr(0, {0}));
  }
  SUBCASE("slot bounds enforced along the walk") {
    tree_spec t = tsu::regular_tree(tree_kind::rooted, 2);
    CHECK_THROWS_AS(canonical_address(0, {2}, t), slot_out_of_range);
    CHECK_THROWS_AS(canonical_address(0, {0, 5}, t), slot_out_of_range);
  }
  SUBCASE("rooted walks cannot go above the root") {
    tree_spec t = tsu::regular_tree(tree_kind::rooted, 2);
    CHECK_THROWS_AS(canonical_address(1, {0}, t), invalid_spec);
  }
  SUBCASE("idempotence on random specs") {
    tsu::rng r(101);
    for (int i = 0; i < 50; ++i) {
      tree_spec t = tsu::random_tree(r);
      vertex_address v = tsu::random_vertex(r, t, 4);
      vertex_address again = canonical_address(v.up, v.down, t);
      CHECK(again == v);
    }
  }
}

TEST_CASE("parents and children") {
  tree_spec line = tsu::line_tree(tree_kind::unrooted);
  tree_spec rline = tsu::line_tree(tree_kind::rooted);
  tree_spec rbin = tsu::regular_tree(tree_kind::rooted, 2);

  CHECK(parent_of(addr(0, {1, 0}), rbin) == addr(0, {1}));
  CHECK(parent_of(addr(0), line) == addr(1));
  CHECK(parent_of(addr(2), line) == addr(3));
  CHECK_THROWS_AS(parent_of(addr(0), rline), root_has_no_parent);

  CHECK(ancestor_of(addr(0, {1, 0, 1}), 2, rbin) == addr(0, {1}));
  CHECK(ancestor_of(addr(0, {0}), 3, line) == addr(2));
  CHECK_THROWS_AS(ancestor_of(addr(0, {0}), 2, rline), root_has_no_parent);

  SUBCASE("children come in slot order and include the spine child") {
    tree_spec t = tsu::regular_tree(tree_kind::unrooted, 3);
    t.spine = {{1, 2}};
    t.validate();
    auto kids = children_of(addr(1), t);
    REQUIRE(kids.size() == 3);
    CHECK(kids[0] == addr(1, {0}));
    CHECK(kids[1] == addr(1, {1}));
    CHECK(kids[2] == addr(0));  // designated slot leads back down the spine
  }
  SUBCASE("parent/child round trip on random specs") {
    tsu::rng r(202);
    for (int i = 0; i < 40; ++i) {
      tree_spec t = tsu::random_tree(r);
      vertex_address v = tsu::random_vertex(r, t, 3);
      auto kids = children_of(v, t);
      CHECK(kids.size() == t.arity_of(v));
      for (const auto& c : kids) CHECK(parent_of(c, t) == v);
      std::set<vertex_address> uniq(kids.begin(), kids.end());
      CHECK(uniq.size() == kids.size());
    }
  }
}

TEST_CASE("descendant enumeration") {
  tree_spec rbin = tsu::regular_tree(tree_kind::rooted, 2);
  tree_spec line = tsu::line_tree(tree_kind::unrooted);

  CHECK(descendants_at(addr(0), 0, rbin) == std::vector<vertex_address>{addr(0)});
  CHECK(descendants_at(addr(0), 3, rbin).size() == 8);
  CHECK(descendants_at(addr(2), 5, line).size() == 1);
  CHECK_THROWS_AS(descendants_at(addr(0), 8, rbin, 100), enumeration_cap_exceeded);

  SUBCASE("levels compose") {
    tsu::rng r(303);
    for (int i = 0; i < 25; ++i) {
      tree_spec t = tsu::random_tree(r);
      vertex_address v = tsu::random_vertex(r, t, 2);
      auto direct = descendants_at(v, 3, t, 100000);
      std::multiset<vertex_address> via;
      for (const auto& mid : descendants_at(v, 1, t, 100000))
        for (const auto& u : descendants_at(mid, 2, t, 100000)) via.insert(u);
      CHECK(via.size() == direct.size());
      std::multiset<vertex_address> direct_set(direct.begin(), direct.end());
      CHECK(via == direct_set);
      for (const auto& u : direct) {
        CHECK(generation_of(u) == generation_of(v) + 3);
        auto word = descent_between(v, u, t);
        REQUIRE(word.has_value());
        CHECK(word->size() == 3);
      }
    }
  }
}

TEST_CASE("generation sizes") {
  SUBCASE("rooted counts are plain products") {
    CHECK(generation_size(3, tsu::regular_tree(tree_kind::rooted, 2)) ==
          generation_count::finite(8));
    CHECK(generation_size(5, tsu::line_tree(tree_kind::rooted)) ==
          generation_count::finite(1));
    CHECK(generation_size(-2, tsu::line_tree(tree_kind::rooted)) ==
          generation_count::finite(0));
  }
  SUBCASE("unrooted line generations are singletons") {
    tree_spec t = tsu::line_tree(tree_kind::unrooted);
    for (long g : {-3L, 0L, 4L}) CHECK(generation_size(g, t) == generation_count::finite(1));
  }
  SUBCASE("branching left tail saturates, matching brute enumeration") {
    tree_spec t = tsu::regular_tree(tree_kind::unrooted, 2);
    auto res = generation_size(0, t, 1000);
    CHECK(res == generation_count::at_least(1000));
    // brute force from ever-higher spine points also blows past the cap
    CHECK(tsu::naive_generation_size(0, t, 11) > 1000);
  }
  SUBCASE("left window branching with free left tail stays exact") {
    tree_spec t;
    t.kind = tree_kind::unrooted;
    for (long g = -4; g <= -1; ++g) t.arity.prefix[g] = 2;
    t.validate();
    auto res = generation_size(0, t);
    REQUIRE(res.exact);
    CHECK(res.count == tsu::naive_generation_size(0, t, 8));
    CHECK(res.count == 16);
  }
  SUBCASE("overrides reshape counts") {
    tree_spec t = tsu::regular_tree(tree_kind::rooted, 2);
    t.arity_overrides[addr(0)] = 3;
    t.arity_overrides[addr(0, {1})] = 1;
    t.validate();
    for (long g = 0; g <= 5; ++g) {
      auto res = generation_size(g, t);
      REQUIRE(res.exact);
      CHECK(res.count == tsu::naive_generation_size(g, t, 0));
    }
  }
  SUBCASE("random free-left or rooted specs match brute enumeration and are monotone") {
    tsu::rng r(404);
    int done = 0;
    while (done < 30) {
      tree_spec t = tsu::random_tree(r);
      if (t.kind == tree_kind::unrooted && !has_free_left_end(t)) continue;
      ++done;
      std::size_t prev = 0;
      for (long g = -3; g <= 4; ++g) {
        if (t.kind == tree_kind::rooted && g < 0) continue;
        auto res = generation_size(g, t);
        REQUIRE(res.exact);
        CHECK(res.count == tsu::naive_generation_size(g, t, 9));
        if (g > -3) CHECK(prev <= res.count);
        prev = res.count;
      }
    }
  }
}

TEST_CASE("free left end") {
  CHECK(has_free_left_end(tsu::line_tree(tree_kind::unrooted)));
  CHECK_FALSE(has_free_left_end(tsu::regular_tree(tree_kind::unrooted, 2)));
  CHECK_THROWS_AS(has_free_left_end(tsu::line_tree(tree_kind::rooted)), not_applicable);

  SUBCASE("window branching does not spoil a free end") {
    tree_spec t;
    t.kind = tree_kind::unrooted;
    for (long g = -4; g <= 0; ++g) t.arity.prefix[g] = 2;
    t.arity.period = {2};
    t.validate();
    CHECK(has_free_left_end(t));
  }
  SUBCASE("agrees with a generation-size window scan") {
    tsu::rng r(505);
    for (int i = 0; i < 30; ++i) {
      tree_spec t = tsu::random_tree(r, true, 2);
      if (t.kind == tree_kind::rooted) continue;
      bool all_exact = true;
      for (long g = -6; g <= 6; ++g)
        all_exact = all_exact && generation_size(g, t, 100000).exact;
      CHECK(has_free_left_end(t) == all_exact);
    }
  }
}

TEST_CASE("spec validation") {
  SUBCASE("zero arity rejected") {
    tree_spec t;
    t.arity.period = {0};
    CHECK_THROWS_AS(t.validate(), invalid_spec);
  }
  SUBCASE("prefix must be contiguous") {
    tree_spec t;
    t.arity.prefix[0] = 2;
    t.arity.prefix[2] = 2;
    CHECK_THROWS_AS(t.validate(), invalid_spec);
  }
  SUBCASE("spine slot must exist") {
    tree_spec t = tsu::line_tree(tree_kind::unrooted);
    t.spine[1] = 1;
    CHECK_THROWS_AS(t.validate(), slot_out_of_range);
  }
  SUBCASE("spine is unrooted-only") {
    tree_spec t = tsu::line_tree(tree_kind::rooted);
    t.spine[1] = 0;
    CHECK_THROWS_AS(t.validate(), invalid_spec);
  }
  SUBCASE("override addresses must be canonical") {
    tree_spec t = tsu::regular_tree(tree_kind::unrooted, 2);
    t.arity_overrides[addr(1, {0})] = 3;  // retraces the spine: names addr(0)
    CHECK_THROWS_AS(t.validate(), invalid_spec);
  }
}

}  // TEST_SUITE
