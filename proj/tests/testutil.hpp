#pragma once

#include "peelkit/geometry.hpp"
#include "peelkit/peeling.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace testutil {

using peelkit::BigInt;
using peelkit::Point;
using peelkit::PointSet;
using peelkit::Rational;

inline PointSet make_set(const std::vector<std::pair<long, long>>& coords) {
  PointSet s;
  int id = 1;
  for (const auto& [x, y] : coords) {
    Point p;
    p.id = id++;
    p.x = Rational(x);
    p.y = Rational(y);
    s.points.push_back(std::move(p));
  }
  return s;
}

// A(0,0) B(4,0) C(0,4) with D(1,1) strictly inside; ids 1..4.
inline PointSet triangle_interior() { return make_set({{0, 0}, {4, 0}, {0, 4}, {1, 1}}); }

// Points of the parabola (t, t^2) are in convex position and general position.
inline PointSet convex_ngon(int n) {
  std::vector<std::pair<long, long>> coords;
  for (long t = 1; t <= n; ++t) coords.emplace_back(t, t * t);
  return make_set(coords);
}

// Random integer-coordinate set in general position (rejection sampling).
inline PointSet random_gp_set(int n, std::mt19937_64& rng, long box = 50) {
  std::uniform_int_distribution<long> d(-box, box);
  while (true) {
    std::set<std::pair<long, long>> seen;
    while (static_cast<int>(seen.size()) < n) seen.insert({d(rng), d(rng)});
    PointSet s = make_set({seen.begin(), seen.end()});
    if (peelkit::is_general_position(s)) return s;
  }
}

// Hull membership oracle, independent of the monotone-chain code: p is a hull
// vertex iff some line through p keeps every other point strictly on one side.
inline bool hull_vertex_oracle(const PointSet& s, int id) {
  const Point* p = s.find(id);
  if (!p) return false;
  if (s.size() <= 2) return true;
  for (const auto& a : s.points) {
    if (a.id == p->id) continue;
    bool pos = false, neg = false;
    for (const auto& b : s.points) {
      if (b.id == p->id || b.id == a.id) continue;
      int o = peelkit::orientation(*p, a, b);
      if (o > 0) pos = true;
      if (o < 0) neg = true;
    }
    if (!(pos && neg)) return true;
  }
  return false;
}

inline std::vector<int> oracle_hull_ids(const PointSet& s) {
  std::vector<int> out;
  for (const auto& p : s.points)
    if (hull_vertex_oracle(s, p.id)) out.push_back(p.id);
  std::sort(out.begin(), out.end());
  return out;
}

// Exhaustive peeling-count oracle: filter all n! permutations through the
// step-by-step validity check. Only sane for n <= 8.
inline BigInt brute_force_count(const PointSet& s) {
  std::vector<int> ids = s.ids();
  std::sort(ids.begin(), ids.end());
  BigInt count = 0;
  do {
    if (peelkit::is_peeling_sequence(s, ids)) ++count;
  } while (std::next_permutation(ids.begin(), ids.end()));
  return count;
}

inline PointSet relabeled(const PointSet& s, int offset) {
  PointSet t = s;
  for (auto& p : t.points) p.id += offset;
  return t;
}

// Rigid-ish rational motion: rotate by the 3-4-5 angle and translate.
inline PointSet rotated_345(const PointSet& s) {
  PointSet t = s;
  const Rational c(3, 5), d(4, 5);
  for (auto& p : t.points) {
    Rational x = c * p.x - d * p.y + 7;
    Rational y = d * p.x + c * p.y - 2;
    p.x = x;
    p.y = y;
  }
  return t;
}

inline PointSet scaled(const PointSet& s, const Rational& fx, const Rational& fy) {
  PointSet t = s;
  for (auto& p : t.points) {
    p.x *= fx;
    p.y *= fy;
  }
  return t;
}

}  // namespace testutil
