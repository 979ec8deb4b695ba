#pragma once

#include "peelkit/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace peelkit {

struct Point {
  int id = 0;
  Rational x;
  Rational y;
  std::vector<int> path;  // recursion provenance for constructed sets; empty otherwise
};

struct PointSet {
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
  bool empty() const { return points.empty(); }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.id);
    return out;
  }

  const Point* find(int id) const {
    for (const auto& p : points)
      if (p.id == id) return &p;
    return nullptr;
  }

  bool ids_distinct() const {
    auto v = ids();
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  }
};

// Sign of the signed area of (p,q,r): +1 counter-clockwise, -1 clockwise, 0 collinear.
inline int orientation(const Point& p, const Point& q, const Point& r) {
  Rational cross = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  return sgn(cross);
}

namespace detail {

inline bool lex_less(const Point& a, const Point& b) {
  int cx = cmp(a.x, b.x);
  if (cx != 0) return cx < 0;
  int cy = cmp(a.y, b.y);
  if (cy != 0) return cy < 0;
  return a.id < b.id;
}

// Monotone chain over indices already sorted lexicographically with distinct
// coordinates. Returns hull vertex indices, counter-clockwise, starting at the
// lexicographic minimum. Points interior to hull edges are not vertices.
inline std::vector<std::size_t> hull_of_lex_sorted(const std::vector<Point>& pts,
                                                   const std::vector<std::size_t>& sorted) {
  const std::size_t m = sorted.size();
  if (m <= 2) return sorted;
  std::vector<std::size_t> lo, hi;
  lo.reserve(m);
  hi.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    while (lo.size() >= 2 &&
           orientation(pts[lo[lo.size() - 2]], pts[lo.back()], pts[sorted[i]]) <= 0)
      lo.pop_back();
    lo.push_back(sorted[i]);
  }
  for (std::size_t i = m; i-- > 0;) {
    while (hi.size() >= 2 &&
           orientation(pts[hi[hi.size() - 2]], pts[hi.back()], pts[sorted[i]]) <= 0)
      hi.pop_back();
    hi.push_back(sorted[i]);
  }
  lo.pop_back();
  hi.pop_back();
  lo.insert(lo.end(), hi.begin(), hi.end());
  return lo;
}

inline std::vector<std::size_t> lex_sorted_unique(const std::vector<Point>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(pts[a], pts[b]); });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](std::size_t a, std::size_t b) {
                          return pts[a].x == pts[b].x && pts[a].y == pts[b].y;
                        }),
            idx.end());
  return idx;
}

}  // namespace detail

inline std::vector<Point> convex_hull(const PointSet& s) {
  if (s.empty()) throw std::invalid_argument("empty set");
  auto idx = detail::lex_sorted_unique(s.points);
  auto hull = detail::hull_of_lex_sorted(s.points, idx);
  std::vector<Point> out;
  out.reserve(hull.size());
  for (auto i : hull) out.push_back(s.points[i]);
  return out;
}

inline std::vector<int> hull_ids(const PointSet& s) {
  std::vector<int> out;
  for (const auto& p : convex_hull(s)) out.push_back(p.id);
  return out;
}

inline bool is_general_position(const PointSet& s) {
  const auto& p = s.points;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 2 < n; ++i)
    for (std::size_t j = i + 1; j + 1 < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (orientation(p[i], p[j], p[k]) == 0) return false;
  // duplicate coordinates degenerate a set of size < 3 too
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p[i].x == p[j].x && p[i].y == p[j].y) return false;
  return true;
}

}  // namespace peelkit
