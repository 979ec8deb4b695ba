#pragma once

#include "peelkit/geometry.hpp"
#include "peelkit/peeling.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace peelkit {

struct ConstructionParams {
  Rational spacing = Rational(4);     // ray copies sit at spacing, 2*spacing, 4*spacing
  Rational flatten = Rational(1, 64); // per-level factor; a node of height h is squashed by flatten^h
  int retry_budget = 6;               // rebuilds with flatten/16 until the validator is happy
  bool self_check = true;
  int self_check_trials = 32;
  uint64_t self_check_seed = 0x5eed;
};

struct Affine {
  Rational m00{1}, m01{0}, m10{0}, m11{1}, tx{0}, ty{0};

  std::pair<Rational, Rational> apply(const Rational& x, const Rational& y) const {
    return {m00 * x + m01 * y + tx, m10 * x + m11 * y + ty};
  }

  // outer composed after this: (this.then(outer))(p) == outer(this(p))
  Affine then(const Affine& o) const {
    Affine r;
    r.m00 = o.m00 * m00 + o.m01 * m10;
    r.m01 = o.m00 * m01 + o.m01 * m11;
    r.m10 = o.m10 * m00 + o.m11 * m10;
    r.m11 = o.m10 * m01 + o.m11 * m11;
    r.tx = o.m00 * tx + o.m01 * ty + o.tx;
    r.ty = o.m10 * tx + o.m11 * ty + o.ty;
    return r;
  }

  Affine inverse() const {
    Rational det = m00 * m11 - m01 * m10;
    if (det == 0) throw std::logic_error("singular transform");
    Affine r;
    r.m00 = m11 / det;
    r.m01 = -m01 / det;
    r.m10 = -m10 / det;
    r.m11 = m00 / det;
    r.tx = -(r.m00 * tx + r.m01 * ty);
    r.ty = -(r.m10 * tx + r.m11 * ty);
    return r;
  }
};

struct ConstructionNode {
  int size = 0;
  Affine to_parent;         // node-local frame -> parent-local frame
  Affine to_final;          // node-local frame -> final coordinates
  Rational flatten_factor{1};
  std::vector<ConstructionNode> children;  // three copies, or none for 1-2 point leaves
  std::vector<int> point_ids;              // leaf points (far point first for the pair leaf)
  int removed_ray = 0;                     // nonzero only on the root after subray removal
  std::array<int, 2> removed_subrays{0, 0};
  std::vector<int> removed_ids;            // sorted

  bool is_leaf() const { return children.empty(); }
};

struct StructureReport {
  bool general_position = false;
  bool hull_is_ray_tips = false;
  bool x_order_ok = false;
  bool triangle_persistence_ok = false;
  std::vector<std::string> failures;

  bool all_ok() const {
    return general_position && hull_is_ray_tips && x_order_ok && triangle_persistence_ok;
  }
};

struct BuildResult {
  PointSet set;
  ConstructionNode node;
  int retries = 0;
};

// n >= 3 splits into near-thirds, largest first.
inline std::array<int, 3> child_sizes(int n) {
  if (n < 3) throw std::invalid_argument("no split below 3 points");
  int q = n / 3, r = n % 3;
  if (r == 0) return {q, q, q};
  if (r == 1) return {q + 1, q, q};
  return {q + 1, q + 1, q};
}

inline int construction_height(int n) {
  return n <= 2 ? 0 : 1 + construction_height(child_sizes(n)[0]);
}

inline PointSet flatten(const PointSet& s, const Rational& eps) {
  if (sgn(eps) <= 0) throw std::invalid_argument("flatten factor must be positive");
  PointSet out = s;
  for (auto& p : out.points) p.y *= eps;
  return out;
}

namespace detail {

// unit vectors along the three rays; exactly 120 degrees is irrational, so the
// (33,56,65) triple stands in at ~120.5 degrees
inline const std::array<std::pair<Rational, Rational>, 3>& ray_dirs() {
  static const std::array<std::pair<Rational, Rational>, 3> dirs = {{
      {Rational(1), Rational(0)},
      {Rational(-33, 65), Rational(-56, 65)},
      {Rational(-33, 65), Rational(56, 65)},
  }};
  return dirs;
}

struct LocalPoint {
  std::vector<int> path;
  Rational x, y;
};

struct LocalBuild {
  std::vector<LocalPoint> pts;
  ConstructionNode node;
};

inline LocalBuild build_local(int n, const Rational& spacing, const Rational& flatten_base) {
  LocalBuild out;
  out.node.size = n;
  if (n == 1) {
    out.pts.push_back({{}, Rational(0), Rational(0)});
    return out;
  }
  if (n == 2) {
    out.pts.push_back({{1}, Rational(1), Rational(0)});  // far point u
    out.pts.push_back({{2}, Rational(0), Rational(0)});  // origin point
    return out;
  }
  auto sz = child_sizes(n);
  for (int i = 0; i < 3; ++i) {
    LocalBuild cb = build_local(sz[i], spacing, flatten_base);
    Rational radius(0);
    for (const auto& p : cb.pts) {
      Rational ax = abs(p.x), ay = abs(p.y);
      if (ax > radius) radius = ax;
      if (ay > radius) radius = ay;
    }
    Rational scale = sgn(radius) > 0 ? Rational(1) / (2 * radius) : Rational(1);
    Rational dist = spacing * (1 << i);
    const auto& [ux, uy] = ray_dirs()[i];
    Affine t;
    t.m00 = scale * ux;
    t.m01 = -scale * uy;
    t.m10 = scale * uy;
    t.m11 = scale * ux;
    t.tx = dist * ux;
    t.ty = dist * uy;
    for (auto& p : cb.pts) {
      auto [nx, ny] = t.apply(p.x, p.y);
      LocalPoint q;
      q.path.reserve(p.path.size() + 1);
      q.path.push_back(i + 1);
      q.path.insert(q.path.end(), p.path.begin(), p.path.end());
      q.x = nx;
      q.y = ny;
      out.pts.push_back(std::move(q));
    }
    cb.node.to_parent = t;
    out.node.children.push_back(std::move(cb.node));
  }
  Rational eps = rational_pow(flatten_base, static_cast<unsigned long>(construction_height(n)));
  for (auto& p : out.pts) p.y *= eps;
  Affine squash;
  squash.m11 = eps;
  for (auto& c : out.node.children) c.to_parent = c.to_parent.then(squash);
  out.node.flatten_factor = eps;
  return out;
}

inline void assign_leaf_ids(ConstructionNode& nd, int& next) {
  if (nd.children.empty()) {
    nd.point_ids.clear();
    for (int i = 0; i < nd.size; ++i) nd.point_ids.push_back(next++);
    return;
  }
  for (auto& c : nd.children) assign_leaf_ids(c, next);
}

inline void finalize_transforms(ConstructionNode& nd, const Affine& parent_final) {
  nd.to_final = nd.to_parent.then(parent_final);
  for (auto& c : nd.children) finalize_transforms(c, nd.to_final);
}

inline void collect_leaf_ids(const ConstructionNode& nd, std::vector<int>& out) {
  if (nd.children.empty()) {
    out.insert(out.end(), nd.point_ids.begin(), nd.point_ids.end());
    return;
  }
  for (const auto& c : nd.children) collect_leaf_ids(c, out);
}

// tip = the deepest all-ones descendant: farthest point of the outermost subray
inline int tip_id(const ConstructionNode& nd) {
  const ConstructionNode* cur = &nd;
  while (!cur->children.empty()) cur = &cur->children[0];
  return cur->point_ids.at(0);
}

inline BuildResult assemble_s(int n, const Rational& spacing, const Rational& flatten_base) {
  LocalBuild lb = build_local(n, spacing, flatten_base);
  BuildResult r;
  r.node = std::move(lb.node);
  int next_id = 1;
  assign_leaf_ids(r.node, next_id);
  r.node.to_parent = Affine{};
  finalize_transforms(r.node, Affine{});
  r.set.points.reserve(lb.pts.size());
  for (std::size_t i = 0; i < lb.pts.size(); ++i) {
    Point p;
    p.id = static_cast<int>(i) + 1;
    p.x = std::move(lb.pts[i].x);
    p.y = std::move(lb.pts[i].y);
    p.path = std::move(lb.pts[i].path);
    r.set.points.push_back(std::move(p));
  }
  return r;
}

inline void check_x_order(const ConstructionNode& nd, const PointSet& s, StructureReport& rep) {
  Affine inv = nd.to_final.inverse();
  if (nd.children.empty()) {
    if (nd.point_ids.size() == 2) {
      const Point* u = s.find(nd.point_ids[0]);
      const Point* o = s.find(nd.point_ids[1]);
      if (u && o) {
        auto lu = inv.apply(u->x, u->y);
        auto lo = inv.apply(o->x, o->y);
        if (!(lu.first > lo.first)) {
          rep.x_order_ok = false;
          rep.failures.push_back("x-order: pair leaf out of order (id " +
                                 std::to_string(u->id) + ")");
        }
      }
    }
    return;
  }
  bool have[3] = {false, false, false};
  Rational mn[3], mx[3];
  for (int i = 0; i < 3; ++i) {
    std::vector<int> ids;
    collect_leaf_ids(nd.children[i], ids);
    for (int id : ids) {
      const Point* p = s.find(id);
      if (!p) continue;  // removed subray
      auto l = inv.apply(p->x, p->y);
      if (!have[i]) {
        mn[i] = l.first;
        mx[i] = l.first;
        have[i] = true;
      } else {
        if (l.first < mn[i]) mn[i] = l.first;
        if (l.first > mx[i]) mx[i] = l.first;
      }
    }
  }
  auto fail = [&](const char* msg) {
    rep.x_order_ok = false;
    rep.failures.push_back(msg);
  };
  if (have[0] && have[1] && !(mn[0] > mx[1])) fail("x-order: ray 1 copy not strictly right of ray 2 copy");
  if (have[2] && have[0] && !(mx[2] < mn[0])) fail("x-order: ray 3 copy not strictly left of ray 1 copy");
  if (have[2] && have[1] && !(mx[2] < mn[1])) fail("x-order: ray 3 copy not strictly left of ray 2 copy");
  for (const auto& c : nd.children) check_x_order(c, s, rep);
}

}  // namespace detail

inline StructureReport validate_structure(const PointSet& s, const ConstructionNode& root,
                                          int peel_trials, uint64_t rng_seed) {
  std::vector<int> expect;
  detail::collect_leaf_ids(root, expect);
  std::sort(expect.begin(), expect.end());
  if (!root.removed_ids.empty()) {
    std::vector<int> keep;
    std::set_difference(expect.begin(), expect.end(), root.removed_ids.begin(),
                        root.removed_ids.end(), std::back_inserter(keep));
    expect = std::move(keep);
  }
  auto have = s.ids();
  std::sort(have.begin(), have.end());
  if (expect != have) throw std::invalid_argument("id mismatch between set and construction");

  StructureReport rep;

  rep.general_position = is_general_position(s);
  if (!rep.general_position)
    rep.failures.push_back("general position: collinear triple or duplicate coordinates");

  rep.hull_is_ray_tips = true;
  if (s.size() >= 3 && !root.children.empty()) {
    std::vector<int> tips;
    for (const auto& c : root.children) tips.push_back(detail::tip_id(c));
    std::sort(tips.begin(), tips.end());
    auto hull = hull_ids(s);
    std::sort(hull.begin(), hull.end());
    rep.hull_is_ray_tips = (hull == tips);
    if (!rep.hull_is_ray_tips)
      rep.failures.push_back("hull: vertices are not exactly the three ray tips");
  }

  rep.x_order_ok = true;
  detail::check_x_order(root, s, rep);

  rep.triangle_persistence_ok = true;
  if (s.size() >= 3 && !root.children.empty()) {
    bool paths_ok = true;
    for (const auto& p : s.points)
      if (p.path.empty() || p.path[0] < 1 || p.path[0] > 3) paths_ok = false;
    if (!paths_ok) {
      rep.triangle_persistence_ok = false;
      rep.failures.push_back("persistence: points lack usable ray paths");
    } else {
      detail::HullMachine hm(s.points);
      std::mt19937_64 rng(rng_seed);
      int logged = 0;
      for (int trial = 0; trial < peel_trials; ++trial) {
        uint64_t alive = detail::full_mask(s.size());
        std::array<int, 3> per_ray{0, 0, 0};
        for (const auto& p : s.points) per_ray[p.path[0] - 1]++;
        int step = 0;
        while (per_ray[0] > 0 && per_ray[1] > 0 && per_ray[2] > 0) {
          auto hull = hm.hull_positions_by_id(alive);
          if (hull.size() != 3) {
            rep.triangle_persistence_ok = false;
            if (logged < 8) {
              rep.failures.push_back("persistence: trial " + std::to_string(trial) +
                                     " step " + std::to_string(step) + ": hull has " +
                                     std::to_string(hull.size()) + " vertices");
              ++logged;
            }
            break;
          }
          std::size_t pos = hull[detail::bounded_draw(rng, hull.size())];
          alive &= ~(uint64_t{1} << pos);
          per_ray[s.points[pos].path[0] - 1]--;
          ++step;
        }
      }
    }
  }
  return rep;
}

inline BuildResult build_s(int n, const ConstructionParams& prm = {}) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (n > kMaxPeelPoints)
    throw std::invalid_argument("construction capped at 64 points");
  Rational base = prm.flatten;
  if (sgn(base) <= 0) throw std::invalid_argument("flatten factor must be positive");
  std::vector<std::string> last_failures;
  for (int attempt = 0; attempt <= prm.retry_budget; ++attempt) {
    BuildResult r = detail::assemble_s(n, prm.spacing, base);
    r.retries = attempt;
    if (!prm.self_check || n <= 2) return r;
    StructureReport rep =
        validate_structure(r.set, r.node, prm.self_check_trials, prm.self_check_seed);
    if (rep.all_ok()) return r;
    last_failures = rep.failures;
    base /= 16;
  }
  std::string msg = "construction failed validation after retries";
  for (const auto& f : last_failures) msg += "; " + f;
  throw std::runtime_error(msg);
}

inline BuildResult build_b(int n, int ray_index, const ConstructionParams& prm = {}) {
  if (n < 9) throw std::invalid_argument("no subrays to remove");
  if (n > kMaxPeelPoints)
    throw std::invalid_argument("construction capped at 64 points");
  if (ray_index < 1 || ray_index > 3) throw std::invalid_argument("ray index must be 1..3");
  Rational base = prm.flatten;
  if (sgn(base) <= 0) throw std::invalid_argument("flatten factor must be positive");
  std::vector<std::string> last_failures;
  for (int attempt = 0; attempt <= prm.retry_budget; ++attempt) {
    BuildResult r = detail::assemble_s(n, prm.spacing, base);
    r.retries = attempt;
    ConstructionNode& ray = r.node.children[ray_index - 1];
    std::vector<int> removed;
    detail::collect_leaf_ids(ray.children[1], removed);
    detail::collect_leaf_ids(ray.children[2], removed);
    std::sort(removed.begin(), removed.end());
    r.node.removed_ray = ray_index;
    r.node.removed_subrays = {2, 3};
    r.node.removed_ids = removed;
    std::vector<Point> kept;
    kept.reserve(r.set.points.size() - removed.size());
    for (auto& p : r.set.points)
      if (!std::binary_search(removed.begin(), removed.end(), p.id))
        kept.push_back(std::move(p));
    r.set.points = std::move(kept);
    if (!prm.self_check) return r;
    StructureReport rep =
        validate_structure(r.set, r.node, prm.self_check_trials, prm.self_check_seed);
    if (rep.all_ok()) return r;
    last_failures = rep.failures;
    base /= 16;
  }
  std::string msg = "construction failed validation after retries";
  for (const auto& f : last_failures) msg += "; " + f;
  throw std::runtime_error(msg);
}

struct WorstCaseBSizes {
  int removed_each = 0;        // two subrays of this size are dropped
  std::array<int, 7> kept{};   // remaining subray sizes, non-increasing
};

inline WorstCaseBSizes worst_case_b_sizes(int n) {
  if (n < 9) throw std::invalid_argument("no subrays to remove");
  WorstCaseBSizes w;
  w.removed_each = n / 9;
  int rest = n - 2 * (n / 9);
  int base = rest / 7, extra = rest % 7;
  for (int i = 0; i < 7; ++i) w.kept[i] = base + (i < extra ? 1 : 0);
  return w;
}

}  // namespace peelkit
