#include "peelkit/construction.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "testutil.hpp"

using namespace peelkit;

TEST_CASE("child sizes split into near-thirds, largest first", "[construction]") {
  CHECK(child_sizes(9) == std::array<int, 3>{3, 3, 3});
  CHECK(child_sizes(10) == std::array<int, 3>{4, 3, 3});
  CHECK(child_sizes(11) == std::array<int, 3>{4, 4, 3});
  CHECK(child_sizes(3) == std::array<int, 3>{1, 1, 1});
  CHECK(child_sizes(7) == std::array<int, 3>{3, 2, 2});
  CHECK_THROWS_AS(child_sizes(2), std::invalid_argument);
}

TEST_CASE("construction height follows the largest branch", "[construction]") {
  CHECK(construction_height(1) == 0);
  CHECK(construction_height(2) == 0);
  CHECK(construction_height(3) == 1);
  CHECK(construction_height(4) == 1);
  CHECK(construction_height(9) == 2);
  CHECK(construction_height(10) == 2);
  CHECK(construction_height(27) == 3);
}

TEST_CASE("build_s produces validated sets of the right shape", "[construction]") {
  for (int n = 3; n <= 16; ++n) {
    auto r = build_s(n);
    CHECK(r.set.size() == n);
    CHECK(r.retries == 0);
    auto ids = r.set.ids();
    std::vector<int> want(n);
    std::iota(want.begin(), want.end(), 1);
    CHECK(ids == want);  // ids in emission order
    auto rep = validate_structure(r.set, r.node, 50, 99);
    CHECK(rep.all_ok());
  }
}

TEST_CASE("hull vertices are exactly the three ray tips", "[construction]") {
  auto s9 = build_s(9);
  auto h9 = hull_ids(s9.set);
  std::sort(h9.begin(), h9.end());
  CHECK(h9 == std::vector<int>{1, 4, 7});

  // S_10 splits 4/3/3, so the ray blocks start at ids 1, 5, 8
  auto s10 = build_s(10);
  auto h10 = hull_ids(s10.set);
  std::sort(h10.begin(), h10.end());
  CHECK(h10 == std::vector<int>{1, 5, 8});
}

TEST_CASE("every point claims a top-level ray in block order", "[construction]") {
  auto r = build_s(10);
  std::array<int, 3> per_ray{0, 0, 0};
  for (const auto& p : r.set.points) {
    REQUIRE(!p.path.empty());
    REQUIRE((p.path[0] >= 1 && p.path[0] <= 3));
    per_ray[p.path[0] - 1]++;
  }
  CHECK(per_ray == std::array<int, 3>{4, 3, 3});
  for (int i = 0; i < 4; ++i) CHECK(r.set.points[i].path[0] == 1);
  for (int i = 4; i < 7; ++i) CHECK(r.set.points[i].path[0] == 2);
  for (int i = 7; i < 10; ++i) CHECK(r.set.points[i].path[0] == 3);
}

TEST_CASE("per-node flattening factor follows the height schedule", "[construction]") {
  auto r = build_s(9);
  CHECK(r.node.flatten_factor == Rational(1, 4096));  // (1/64)^height, height 2
  for (const auto& c : r.node.children) CHECK(c.flatten_factor == Rational(1, 64));
}

TEST_CASE("frozen exact counts for the S family", "[construction][peeling]") {
  const std::vector<long> expected = {6, 18, 60, 180, 624, 2184, 6552, 23532, 83628, 250884};
  for (int n = 3; n <= 12; ++n) {
    auto r = build_s(n);
    CHECK(count_peelings(r.set) == expected[n - 3]);
  }
}

TEST_CASE("frozen exact counts and sizes for the B family", "[construction][peeling]") {
  const std::vector<long> expected = {936, 2184, 8328, 36564};
  for (int n = 9; n <= 12; ++n) {
    auto r = build_b(n, 1);
    CHECK(r.set.size() == n - 2 * (n / 9));
    CHECK(count_peelings(r.set) == expected[n - 9]);
    CHECK(static_cast<int>(r.node.removed_ids.size()) == 2 * (n / 9));
    CHECK(r.node.removed_ray == 1);
    CHECK((r.node.removed_subrays == std::array<int, 2>{2, 3}));
    // survivors keep their original ids
    for (const auto& p : r.set.points)
      CHECK_FALSE(std::binary_search(r.node.removed_ids.begin(), r.node.removed_ids.end(), p.id));
  }
}

TEST_CASE("B_9 removes exactly the two smaller subrays of ray 1", "[construction]") {
  auto r = build_b(9, 1);
  CHECK(r.node.removed_ids == std::vector<int>{2, 3});
  CHECK(r.set.ids() == std::vector<int>{1, 4, 5, 6, 7, 8, 9});
  auto rep = validate_structure(r.set, r.node, 50, 5);
  CHECK(rep.all_ok());
}

TEST_CASE("removal ray is configurable", "[construction]") {
  for (int ray = 1; ray <= 3; ++ray) {
    auto r = build_b(12, ray);
    CHECK(r.set.size() == 10);
    CHECK(r.node.removed_ray == ray);
  }
  // counts should not depend on which ray loses its subrays at n = 12
  CHECK(count_peelings(build_b(12, 1).set) == count_peelings(build_b(12, 2).set));
}

TEST_CASE("flatten scales y only and preserves counts", "[construction][peeling]") {
  auto s = testutil::triangle_interior();
  auto f = flatten(s, Rational(1, 7));
  for (int i = 0; i < s.size(); ++i) {
    CHECK(f.points[i].x == s.points[i].x);
    CHECK(f.points[i].y == s.points[i].y / 7);
  }
  CHECK(count_peelings(f) == 18);
  CHECK_THROWS_AS(flatten(s, Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(flatten(s, Rational(-1, 2)), std::invalid_argument);

  // un-flattening the built set is an affine map, so the count is unchanged
  auto s9 = build_s(9);
  auto wide = flatten(s9.set, 4096);
  CHECK(count_peelings(wide) == 6552);
}

TEST_CASE("without flattening the validator rejects the set", "[construction]") {
  ConstructionParams prm;
  prm.flatten = 1;
  prm.self_check = false;
  auto r = build_s(12, prm);
  auto rep = validate_structure(r.set, r.node, 50, 31337);
  CHECK(rep.general_position);
  CHECK_FALSE(rep.hull_is_ray_tips);
  CHECK_FALSE(rep.all_ok());
  CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("construction rejects bad parameters", "[construction]") {
  CHECK_THROWS_AS(build_s(0), std::invalid_argument);
  CHECK_THROWS_AS(build_s(-4), std::invalid_argument);
  CHECK_THROWS_AS(build_s(65), std::invalid_argument);
  CHECK_THROWS_AS(build_b(8, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_b(12, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_b(12, 4), std::invalid_argument);
  ConstructionParams bad;
  bad.flatten = 0;
  CHECK_THROWS_AS(build_s(9, bad), std::invalid_argument);
}

TEST_CASE("tiny families work and skip the triangle checks", "[construction]") {
  auto s1 = build_s(1);
  CHECK(s1.set.size() == 1);
  auto s2 = build_s(2);
  CHECK(s2.set.size() == 2);
  CHECK(s2.set.points[0].x != s2.set.points[1].x);
}

TEST_CASE("worst-case B subray sizes cover n", "[construction]") {
  for (int n = 9; n <= 64; ++n) {
    auto w = worst_case_b_sizes(n);
    CHECK(w.removed_each == n / 9);
    int total = 2 * w.removed_each;
    for (int i = 0; i < 7; ++i) total += w.kept[i];
    CHECK(total == n);
    for (int i = 0; i + 1 < 7; ++i) CHECK(w.kept[i] >= w.kept[i + 1]);
  }
  CHECK_THROWS_AS(worst_case_b_sizes(8), std::invalid_argument);
}
