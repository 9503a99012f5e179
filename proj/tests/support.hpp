#pragma once

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Nothing here calls the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "cvxls/field.hpp"
#include "cvxls/sdf.hpp"

namespace cvxls::testing {

inline ScalarField disk_sdf(Dims dims, double cr, double cc, double radius) {
  ScalarField f(dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) f(r, c) = std::hypot(r - cr, c - cc) - radius;
  return f;
}

inline RegionMask disk_mask(Dims dims, double cr, double cc, double radius) {
  RegionMask m(dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c)
      m.set(r, c, std::hypot(r - cr, c - cc) <= radius);
  return m;
}

inline RegionMask box_mask(Dims dims, int r0, int c0, int r1, int c1) {
  RegionMask m(dims);
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) m.set(r, c, true);
  return m;
}

inline ScalarField random_field(Dims dims, std::mt19937_64& rng, double lo = -1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  ScalarField f(dims);
  for (double& v : f.values()) v = u(rng);
  return f;
}

/// Sum of a few Gaussian bumps plus noise; has an interface almost surely.
inline ScalarField bumpy_field(Dims dims, std::mt19937_64& rng, double noise = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Bump {
    double r, c, s, a;
  };
  std::vector<Bump> bumps;
  for (int k = 0; k < 4; ++k)
    bumps.push_back({u(rng) * dims.height, u(rng) * dims.width, 2.0 + 8.0 * u(rng),
                     2.0 * u(rng) - 1.0});
  ScalarField f(dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) {
      double v = noise * (u(rng) - 0.5);
      for (const Bump& b : bumps)
        v += b.a * std::exp(-((r - b.r) * (r - b.r) + (c - b.c) * (c - b.c)) / (2 * b.s * b.s));
      f(r, c) = v;
    }
  return f;
}

/// Five-point Laplacian with replicate ghosts, written out independently.
inline double lap_oracle(const ScalarField& f, int r, int c) {
  const auto at = [&](int rr, int cc) {
    rr = std::clamp(rr, 0, f.height() - 1);
    cc = std::clamp(cc, 0, f.width() - 1);
    return f(rr, cc);
  };
  return at(r + 1, c) + at(r - 1, c) + at(r, c + 1) + at(r, c - 1) - 4.0 * f(r, c);
}

/// Random crossing set of the shape extract_zero_contour produces: points on
/// horizontal edges (integer row), vertical edges (integer column) or nodes.
inline ZeroContour random_crossings(Dims dims, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> row(0, dims.height - 1), col(0, dims.width - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 2);
  ZeroContour z;
  for (int i = 0; i < n; ++i) {
    const int r = row(rng), c = col(rng);
    switch (kind(rng)) {
      case 0:
        z.points.push_back({double(r), std::min(c + frac(rng), dims.width - 1.0)});
        break;
      case 1:
        z.points.push_back({std::min(r + frac(rng), dims.height - 1.0), double(c)});
        break;
      default:
        z.points.push_back({double(r), double(c)});
    }
  }
  return z;
}

/// Minimum distance from every node to a set of points, by exhaustive search.
inline ScalarField brute_point_distance(const std::vector<Point2>& points, Dims dims) {
  ScalarField d(dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point2& p : points)
        best = std::min(best, (r - p.row) * (r - p.row) + (c - p.col) * (c - p.col));
      d(r, c) = std::sqrt(best);
    }
  return d;
}

inline double brute_segment_distance(double r, double c, const Point2& a, const Point2& b) {
  const double dr = b.row - a.row, dc = b.col - a.col;
  const double len2 = dr * dr + dc * dc;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((r - a.row) * dr + (c - a.col) * dc) / len2, 0.0, 1.0);
  return std::hypot(r - (a.row + t * dr), c - (a.col + t * dc));
}

/// Distance from every node to the polyline (points and segments).
inline ScalarField brute_polyline_distance(const ZeroContour& z, Dims dims) {
  ScalarField d = brute_point_distance(z.points, dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c)
      for (const auto& s : z.segments)
        d(r, c) = std::min(d(r, c), brute_segment_distance(r, c, z.points[s[0]], z.points[s[1]]));
  return d;
}

/// Triple-point convexity witness: some pair of inside pixels whose midpoint
/// pixel is outside. Checks pairs exhaustively on a subsample of pixels.
inline bool has_midpoint_witness(const RegionMask& m, int stride = 1) {
  std::vector<GridIndex> inside;
  for (int r = 0; r < m.height(); r += stride)
    for (int c = 0; c < m.width(); c += stride)
      if (m(r, c)) inside.push_back({r, c});
  for (std::size_t i = 0; i < inside.size(); ++i)
    for (std::size_t j = i + 1; j < inside.size(); ++j) {
      const int sr = inside[i].row + inside[j].row;
      const int sc = inside[i].col + inside[j].col;
      if (sr % 2 || sc % 2) continue;
      if (!m(sr / 2, sc / 2)) return true;
    }
  return false;
}

inline RegionMask rotate90(const RegionMask& m) {
  RegionMask out({m.width(), m.height()});
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c) out.set(c, m.height() - 1 - r, m(r, c));
  return out;
}

inline RegionMask translate(const RegionMask& m, int dr, int dc) {
  RegionMask out(m.dims());
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c)
      if (m(r, c) && m.dims().contains(r + dr, c + dc)) out.set(r + dr, c + dc, true);
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

/// Euclidean projection of phi onto {laplacian >= 0} by Hildreth's dual
/// coordinate ascent. With `fixed_ring` the outermost ring is held at phi and
/// only interior nodes are constrained; otherwise every node is constrained
/// with replicate ghosts.
inline ScalarField qp_projection(const ScalarField& phi, bool fixed_ring,
                                 int max_passes = 2000000, double tol = 1e-15) {
  const Dims dims = phi.dims();
  const auto on_ring = [&](int idx) {
    const int r = idx / dims.width, c = idx % dims.width;
    return r == 0 || c == 0 || r == dims.height - 1 || c == dims.width - 1;
  };
  struct Row {
    std::vector<std::pair<int, double>> taps;
    double free_norm2 = 0.0;
  };
  std::vector<Row> rows;
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) {
      const int self = r * dims.width + c;
      if (fixed_ring && on_ring(self)) continue;
      std::vector<double> dense(dims.size(), 0.0);
      const int nb[4][2] = {{r + 1, c}, {r - 1, c}, {r, c + 1}, {r, c - 1}};
      for (const auto& n : nb)
        dense[std::clamp(n[0], 0, dims.height - 1) * dims.width +
              std::clamp(n[1], 0, dims.width - 1)] += 1.0;
      dense[self] -= 4.0;
      Row row;
      for (int i = 0; i < static_cast<int>(dense.size()); ++i) {
        if (dense[i] == 0.0) continue;
        row.taps.push_back({i, dense[i]});
        if (!(fixed_ring && on_ring(i))) row.free_norm2 += dense[i] * dense[i];
      }
      rows.push_back(std::move(row));
    }
  std::vector<double> psi(phi.values().begin(), phi.values().end());
  std::vector<double> lambda(rows.size(), 0.0);
  for (int pass = 0; pass < max_passes; ++pass) {
    double largest = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      double ax = 0.0;
      for (const auto& [i, v] : rows[k].taps) ax += v * psi[i];
      const double next = std::max(0.0, lambda[k] - ax / rows[k].free_norm2);
      const double step = next - lambda[k];
      lambda[k] = next;
      for (const auto& [i, v] : rows[k].taps)
        if (!(fixed_ring && on_ring(i))) psi[i] += step * v;
      largest = std::max(largest, std::abs(step));
    }
    if (largest < tol) break;
  }
  return ScalarField(dims, std::move(psi));
}

inline double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s);
}

inline double l2_distance(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace cvxls::testing
