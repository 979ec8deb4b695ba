#pragma once

#include "peelkit/construction.hpp"
#include "peelkit/geometry.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace peelkit {

struct SvgOptions {
  double width = 800;
  double height = 600;
  double margin = 40;
  bool draw_hull = false;
  bool guide_rays = true;   // ignored unless a construction tree is supplied
  bool labels = true;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

struct SvgMapper {
  double min_x = 0, min_y = 0, scale = 1, off_x = 0, off_y = 0, height = 0;

  void fit(const std::vector<std::pair<double, double>>& pts, const SvgOptions& opt) {
    double max_x = 0, max_y = 0;
    min_x = min_y = 0;
    if (!pts.empty()) {
      min_x = max_x = pts[0].first;
      min_y = max_y = pts[0].second;
      for (const auto& [x, y] : pts) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
    double dx = max_x - min_x, dy = max_y - min_y;
    if (dx <= 0) dx = 1;
    if (dy <= 0) dy = 1;
    double sx = (opt.width - 2 * opt.margin) / dx;
    double sy = (opt.height - 2 * opt.margin) / dy;
    scale = std::min(sx, sy);
    off_x = (opt.width - scale * dx) / 2;
    off_y = (opt.height - scale * dy) / 2;
    height = opt.height;
  }

  std::pair<double, double> map(double x, double y) const {
    return {off_x + (x - min_x) * scale, height - (off_y + (y - min_y) * scale)};
  }
};

inline bool node_has_live_points(const ConstructionNode& node, const std::set<int>& live) {
  if (node.is_leaf()) {
    for (int id : node.point_ids)
      if (live.count(id)) return true;
    return false;
  }
  for (const auto& ch : node.children)
    if (node_has_live_points(ch, live)) return true;
  return false;
}

inline void collect_guide_rays(const ConstructionNode& node, const std::set<int>& live,
                               std::vector<std::array<double, 4>>& out) {
  if (node.is_leaf() || !node_has_live_points(node, live)) return;
  auto [ox, oy] = node.to_final.apply(Rational(0), Rational(0));
  double x0 = ox.get_d(), y0 = oy.get_d();
  for (const auto& ch : node.children) {
    auto [cx, cy] = ch.to_final.apply(Rational(0), Rational(0));
    double x1 = cx.get_d(), y1 = cy.get_d();
    out.push_back({x0, y0, x0 + 1.15 * (x1 - x0), y0 + 1.15 * (y1 - y0)});
    collect_guide_rays(ch, live, out);
  }
}

}  // namespace detail

inline std::string render_svg(const PointSet& s, const ConstructionNode* tree = nullptr,
                              const SvgOptions& opt = {}) {
  using detail::svg_num;
  std::set<int> live;
  for (const auto& p : s.points) live.insert(p.id);

  std::vector<std::array<double, 4>> rays;
  if (tree && opt.guide_rays) detail::collect_guide_rays(*tree, live, rays);

  std::vector<std::pair<double, double>> coords;
  coords.reserve(s.points.size() + 2 * rays.size());
  for (const auto& p : s.points) coords.emplace_back(p.x.get_d(), p.y.get_d());
  for (const auto& r : rays) {
    coords.emplace_back(r[0], r[1]);
    coords.emplace_back(r[2], r[3]);
  }

  detail::SvgMapper m;
  m.fit(coords, opt);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(opt.width)
      << "\" height=\"" << svg_num(opt.height) << "\" viewBox=\"0 0 " << svg_num(opt.width) << " "
      << svg_num(opt.height) << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (const auto& r : rays) {
    auto [x1, y1] = m.map(r[0], r[1]);
    auto [x2, y2] = m.map(r[2], r[3]);
    out << "  <line x1=\"" << svg_num(x1) << "\" y1=\"" << svg_num(y1) << "\" x2=\"" << svg_num(x2)
        << "\" y2=\"" << svg_num(y2)
        << "\" stroke=\"#b0b0b0\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\"/>\n";
  }

  if (opt.draw_hull && !s.empty()) {
    auto hull = convex_hull(s);
    out << "  <polygon points=\"";
    for (std::size_t i = 0; i < hull.size(); ++i) {
      auto [hx, hy] = m.map(hull[i].x.get_d(), hull[i].y.get_d());
      if (i) out << " ";
      out << svg_num(hx) << "," << svg_num(hy);
    }
    out << "\" fill=\"none\" stroke=\"#cc3333\" stroke-width=\"1.5\"/>\n";
  }

  for (const auto& p : s.points) {
    auto [px, py] = m.map(p.x.get_d(), p.y.get_d());
    out << "  <circle cx=\"" << svg_num(px) << "\" cy=\"" << svg_num(py)
        << "\" r=\"3\" fill=\"#202020\"/>\n";
  }

  if (opt.labels) {
    for (const auto& p : s.points) {
      auto [px, py] = m.map(p.x.get_d(), p.y.get_d());
      out << "  <text x=\"" << svg_num(px + 4.5) << "\" y=\"" << svg_num(py - 4.5)
          << "\" font-family=\"monospace\" font-size=\"10\" fill=\"#444444\">" << p.id
          << "</text>\n";
    }
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace peelkit
