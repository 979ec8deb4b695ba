#include "peelkit/partition.hpp"

#include "peelkit/construction.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "testutil.hpp"

using namespace peelkit;

namespace {

Partition singleton_partition(const PointSet& s) {
  Partition p;
  for (int id : s.ids()) p.parts.push_back({id});
  return p;
}

// restriction of seq to the given part, in original ids
std::vector<int> restrict_to(const std::vector<int>& seq, const std::vector<int>& part) {
  std::vector<int> out;
  for (int id : seq)
    if (std::find(part.begin(), part.end(), id) != part.end()) out.push_back(id);
  return out;
}

}  // namespace

TEST_CASE("partition validation catches malformed partitions", "[partition]") {
  auto s = testutil::triangle_interior();
  CHECK_NOTHROW(validate_partition(s, Partition{{{1, 2}, {3, 4}}}));
  CHECK_THROWS_WITH(validate_partition(s, Partition{{{1, 2}, {}, {3, 4}}}), "empty part");
  CHECK_THROWS_WITH(validate_partition(s, Partition{{{1, 2}, {2, 3, 4}}}), "parts overlap");
  CHECK_THROWS_WITH(validate_partition(s, Partition{{{1, 2}, {3}}}),
                    "parts do not cover the set");
  CHECK_THROWS_WITH(validate_partition(s, Partition{{{1, 2}, {3, 4, 5}}}),
                    "parts do not cover the set");
}

TEST_CASE("simplify projects ids to part indices", "[partition]") {
  Partition p{{{1, 2}, {3, 4}}};
  CHECK(simplify({1, 3, 2, 4}, p) == std::vector<int>{1, 2, 1, 2});
  CHECK(simplify({4, 3, 2, 1}, p) == std::vector<int>{2, 2, 1, 1});
  CHECK_THROWS_AS(simplify({1, 9}, p), std::invalid_argument);
}

TEST_CASE("subset extraction preserves coordinates", "[partition]") {
  auto s = testutil::triangle_interior();
  auto sub = subset_by_ids(s, {4, 1});
  REQUIRE(sub.size() == 2);
  CHECK(sub.points[0].id == 4);
  CHECK(sub.points[1].id == 1);
  CHECK(sub.points[0].x == 1);
  CHECK_THROWS_AS(subset_by_ids(s, {1, 99}), std::invalid_argument);
}

TEST_CASE("simplified count of S_9 by rays is 1680", "[partition]") {
  auto r = build_s(9);
  auto p = partition_by_rays(r.set);
  REQUIRE(p.parts.size() == 3);
  for (const auto& part : p.parts) CHECK(part.size() == 3);
  CHECK(count_simplified(r.set, p) == 1680);
}

TEST_CASE("decomposition bound holds for S_9 by rays", "[partition]") {
  auto r = build_s(9);
  auto p = partition_by_rays(r.set);
  auto dc = check_decomposition(r.set, p);
  CHECK(dc.lhs == 6552);
  CHECK(dc.rhs == 362880);  // 1680 * 6^3
  CHECK(dc.holds);
}

TEST_CASE("singleton partition reproduces the exact count", "[partition]") {
  auto s = testutil::triangle_interior();
  auto p = singleton_partition(s);
  CHECK(count_simplified(s, p) == count_peelings(s));
  auto dc = check_decomposition(s, p);
  CHECK(dc.lhs == 18);
  CHECK(dc.rhs == 24);  // 4! interleavings of four singletons
  CHECK(dc.holds);
}

TEST_CASE("one-part partition collapses to a single word", "[partition]") {
  auto s = testutil::convex_ngon(5);
  Partition p{{s.ids()}};
  CHECK(count_simplified(s, p) == 1);
  CHECK(multinomial_bound(p, {count_peelings(s)}) == 120);
}

TEST_CASE("projections of real sequences restrict to valid part peelings", "[partition]") {
  auto r = build_s(9);
  auto p = partition_by_rays(r.set);
  auto some = enumerate_peelings(r.set, 60);
  REQUIRE(!some.empty());
  for (const auto& seq : some) {
    auto word = simplify(seq, p);
    CHECK(word.size() == seq.size());
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
      auto sub_seq = restrict_to(seq, p.parts[i]);
      auto sub_set = subset_by_ids(r.set, p.parts[i]);
      CHECK(is_peeling_sequence(sub_set, sub_seq));
    }
  }
}

TEST_CASE("multinomial bound multiplies interleavings with part counts", "[partition]") {
  Partition p{{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}};
  CHECK(multinomial_bound(p, {BigInt(6), BigInt(6), BigInt(6)}) == 362880);
  CHECK(multinomial_bound(p, {BigInt(1), BigInt(1), BigInt(1)}) == 1680);
  CHECK_THROWS_AS(multinomial_bound(p, {BigInt(1)}), std::invalid_argument);
}

TEST_CASE("simplified counting respects the size cap", "[partition]") {
  auto big = testutil::convex_ngon(13);
  CHECK_THROWS_WITH(count_simplified(big, singleton_partition(big)), "size over limit");
}

TEST_CASE("ray partition drops empty parts for B sets", "[partition]") {
  auto b = build_b(9, 1);  // ray 1 keeps a single point
  auto p = partition_by_rays(b.set);
  REQUIRE(p.parts.size() == 3);
  CHECK(p.parts[0].size() == 1);
  CHECK(p.parts[1].size() == 3);
  CHECK(p.parts[2].size() == 3);
  CHECK_NOTHROW(validate_partition(b.set, p));
}

TEST_CASE("path-depth partition refines the ray partition", "[partition]") {
  auto r = build_s(9);
  auto p1 = partition_by_rays(r.set);
  auto p2 = partition_by_path_depth(r.set, 2);
  CHECK(p2.parts.size() == 9);  // three subrays per ray at depth 2
  CHECK_NOTHROW(validate_partition(r.set, p2));
  // each depth-2 part sits inside a single ray part
  for (const auto& part : p2.parts) {
    REQUIRE(!part.empty());
    int ray = p1.part_of(part[0]);
    for (int id : part) CHECK(p1.part_of(id) == ray);
  }
}
