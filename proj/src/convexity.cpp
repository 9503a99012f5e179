#include "cvxls/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cvxls/error.hpp"

namespace cvxls {

namespace {

// (x, y) = (col, row)
std::int64_t cross(const GridIndex& o, const GridIndex& a, const GridIndex& b) {
  return static_cast<std::int64_t>(a.col - o.col) * (b.row - o.row) -
         static_cast<std::int64_t>(a.row - o.row) * (b.col - o.col);
}

double segment_distance(double px, double py, const GridIndex& a,
                        const GridIndex& b) {
  const double ax = a.col, ay = a.row;
  const double dx = b.col - ax, dy = b.row - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

struct Box {
  int r0, r1, c0, c1;
};

Box hull_box(const std::vector<GridIndex>& hull) {
  Box box{hull[0].row, hull[0].row, hull[0].col, hull[0].col};
  for (const auto& p : hull) {
    box.r0 = std::min(box.r0, p.row);
    box.r1 = std::max(box.r1, p.row);
    box.c0 = std::min(box.c0, p.col);
    box.c1 = std::max(box.c1, p.col);
  }
  return box;
}

// Smallest signed distance to the hull edge lines; positive inside.
double inner_depth(const std::vector<GridIndex>& hull, int row, int col) {
  double depth = std::numeric_limits<double>::infinity();
  const GridIndex p{row, col};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const GridIndex& a = hull[i];
    const GridIndex& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.col - a.col, b.row - a.row);
    depth = std::min(depth, static_cast<double>(cross(a, b, p)) / len);
  }
  return depth;
}

}  // namespace

std::vector<GridIndex> convex_hull(const RegionMask& mask) {
  std::vector<GridIndex> pts;
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      if (mask(r, c)) pts.push_back({r, c});
  if (pts.empty()) throw Error(ErrorKind::invalid_input, "empty region mask");

  std::sort(pts.begin(), pts.end(), [](const GridIndex& a, const GridIndex& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  if (pts.size() < 3) {
    if (pts.size() == 2 && pts[0] == pts[1]) pts.pop_back();
    return pts;
  }

  // Andrew's monotone chain.
  std::vector<GridIndex> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

RegionMask convex_hull_mask(const RegionMask& mask, double margin) {
  const auto hull = convex_hull(mask);
  RegionMask out(mask.dims());
  const int pad = static_cast<int>(std::ceil(std::max(margin, 0.0))) + 1;
  const Box box = hull_box(hull);
  for (int r = std::max(0, box.r0 - pad); r <= std::min(mask.height() - 1, box.r1 + pad); ++r) {
    for (int c = std::max(0, box.c0 - pad); c <= std::min(mask.width() - 1, box.c1 + pad); ++c) {
      bool inside = false;
      if (hull.size() >= 3) inside = inner_depth(hull, r, c) >= 0.0;
      for (std::size_t i = 0; !inside && i < hull.size(); ++i) {
        const GridIndex& a = hull[i];
        const GridIndex& b = hull[(i + 1) % hull.size()];
        inside = segment_distance(c, r, a, b) <= margin + 1e-9;
      }
      out.set(r, c, inside);
    }
  }
  return out;
}

std::size_t convexity_defect(const RegionMask& mask, double slack) {
  const auto hull = convex_hull(mask);
  if (hull.size() < 3) return 0;  // points and segments have no interior
  const Box box = hull_box(hull);
  std::size_t missing = 0;
  for (int r = box.r0; r <= box.r1; ++r)
    for (int c = box.c0; c <= box.c1; ++c)
      if (!mask(r, c) && inner_depth(hull, r, c) > slack) ++missing;
  return missing;
}

bool is_convex_region(const RegionMask& mask, double slack) {
  return convexity_defect(mask, slack) == 0;
}

}  // namespace cvxls
