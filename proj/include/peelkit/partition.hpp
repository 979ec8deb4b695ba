#pragma once

#include "peelkit/peeling.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace peelkit {

// Parts are id lists; together they must partition the ids of the set they
// are used with.
struct Partition {
  std::vector<std::vector<int>> parts;

  int part_of(int id) const {  // 1-based; 0 when not covered
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (int x : parts[i])
        if (x == id) return static_cast<int>(i) + 1;
    return 0;
  }
};

inline void validate_partition(const PointSet& s, const Partition& p) {
  std::vector<int> all;
  for (const auto& part : p.parts) {
    if (part.empty()) throw std::invalid_argument("empty part");
    all.insert(all.end(), part.begin(), part.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("parts overlap");
  auto ids = s.ids();
  std::sort(ids.begin(), ids.end());
  if (all != ids) throw std::invalid_argument("parts do not cover the set");
}

// Projects an id sequence to the 1-based indices of the parts the ids fall in.
inline std::vector<int> simplify(const std::vector<int>& seq, const Partition& p) {
  std::unordered_map<int, int> where;
  for (std::size_t i = 0; i < p.parts.size(); ++i)
    for (int id : p.parts[i]) where[id] = static_cast<int>(i) + 1;
  std::vector<int> out;
  out.reserve(seq.size());
  for (int id : seq) {
    auto it = where.find(id);
    if (it == where.end()) throw std::invalid_argument("id not covered by partition");
    out.push_back(it->second);
  }
  return out;
}

inline PointSet subset_by_ids(const PointSet& s, const std::vector<int>& ids) {
  PointSet out;
  out.points.reserve(ids.size());
  for (int id : ids) {
    const Point* p = s.find(id);
    if (!p) throw std::invalid_argument("unknown id " + std::to_string(id));
    out.points.push_back(*p);
  }
  return out;
}

inline constexpr int kSimplifiedLimit = 12;

// Number of distinct simplified sequences, by exhaustive enumeration of full
// peeling sequences and dedup of their projections. Deliberately brute force.
inline BigInt count_simplified(const PointSet& s, const Partition& p) {
  if (s.size() > kSimplifiedLimit) throw std::invalid_argument("size over limit");
  validate_partition(s, p);
  std::unordered_map<int, char> where;
  for (std::size_t i = 0; i < p.parts.size(); ++i)
    for (int id : p.parts[i]) where[id] = static_cast<char>(i + 1);
  std::set<std::string> seen;
  for_each_peeling(s, [&](const std::vector<int>& seq) {
    std::string key;
    key.reserve(seq.size());
    for (int id : seq) key.push_back(where[id]);
    seen.insert(std::move(key));
    return true;
  });
  return BigInt(static_cast<unsigned long>(seen.size()));
}

// Multinomial interleaving count times the per-part sequence counts.
inline BigInt multinomial_bound(const Partition& p, const std::vector<BigInt>& part_counts) {
  if (p.parts.size() != part_counts.size())
    throw std::invalid_argument("one count per part required");
  std::vector<unsigned long> sizes;
  sizes.reserve(p.parts.size());
  for (const auto& part : p.parts) sizes.push_back(part.size());
  BigInt r = multinomial(sizes);
  for (const auto& c : part_counts) r *= c;
  return r;
}

struct DecompositionCheck {
  BigInt lhs;  // exact count of the whole set
  BigInt rhs;  // multinomial bound from the parts
  bool holds = false;
};

inline DecompositionCheck check_decomposition(const PointSet& s, const Partition& p,
                                              const PeelOptions& opt = {}) {
  validate_partition(s, p);
  DecompositionCheck out;
  out.lhs = count_peelings(s, opt);
  std::vector<BigInt> per_part;
  per_part.reserve(p.parts.size());
  for (const auto& part : p.parts)
    per_part.push_back(count_peelings(subset_by_ids(s, part), opt));
  out.rhs = multinomial_bound(p, per_part);
  out.holds = out.lhs <= out.rhs;
  return out;
}

// Partition of a constructed set by top-level ray (first path entry).
inline Partition partition_by_rays(const PointSet& s) {
  Partition p;
  p.parts.assign(3, {});
  for (const auto& pt : s.points) {
    if (pt.path.empty() || pt.path[0] < 1 || pt.path[0] > 3)
      throw std::invalid_argument("point lacks a ray path");
    p.parts[pt.path[0] - 1].push_back(pt.id);
  }
  p.parts.erase(std::remove_if(p.parts.begin(), p.parts.end(),
                               [](const std::vector<int>& v) { return v.empty(); }),
                p.parts.end());
  return p;
}

// Partition by path prefix of the given depth (depth 1 == by rays).
inline Partition partition_by_path_depth(const PointSet& s, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  std::map<std::vector<int>, std::vector<int>> groups;
  for (const auto& pt : s.points) {
    std::vector<int> key(pt.path.begin(),
                         pt.path.begin() + std::min<std::size_t>(pt.path.size(), depth));
    groups[key].push_back(pt.id);
  }
  Partition p;
  for (auto& [key, ids] : groups) p.parts.push_back(std::move(ids));
  return p;
}

}  // namespace peelkit
