#include "cvxls/sdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxls/error.hpp"

namespace cvxls {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Interior nodes never get an exact zero so the sign survives reinitialization.
constexpr double kMinInteriorDistance = 1e-12;

bool is_negative(double v) { return v < 0.0; }

// Squared distance field plus the index of the nearest point.
struct NearestPoint {
  std::vector<double> dist2;
  std::vector<std::size_t> feature;
};

// One line of samples f[v] (kInf where absent) -> lower envelope of the
// parabolas (q - v)^2 + f[v], evaluated at every q of the line.
class EnvelopeScratch {
 public:
  void run(int n, const double* f, const std::size_t* feat, double* out_d,
           std::size_t* out_feat) {
    v_.resize(n);
    z_.resize(n + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
      if (!std::isfinite(f[q])) continue;
      const double fq = f[q] + static_cast<double>(q) * q;
      while (k >= 0) {
        const int p = v_[k];
        const double s = (fq - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
        if (s <= z_[k]) {
          --k;
          continue;
        }
        ++k;
        v_[k] = q;
        z_[k] = s;
        break;
      }
      if (k < 0) {
        k = 0;
        v_[0] = q;
        z_[0] = -kInf;
      }
      z_[k + 1] = kInf;
    }
    if (k < 0) {
      for (int q = 0; q < n; ++q) {
        out_d[q] = kInf;
        out_feat[q] = kNone;
      }
      return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
      while (z_[j + 1] < q) ++j;
      const int p = v_[j];
      const double dq = static_cast<double>(q - p);
      out_d[q] = dq * dq + f[p];
      out_feat[q] = feat[p];
    }
  }

 private:
  std::vector<int> v_;
  std::vector<double> z_;
};

// Nearest-point transform for points lying on integer lines. `line_of` gives
// the integer line coordinate and `along` the real coordinate along the line.
// Lines are rows when `rows` is true, columns otherwise.
void line_points_transform(const std::vector<Point2>& points,
                           const std::vector<std::size_t>& ids, Dims dims,
                           bool rows, NearestPoint& acc) {
  if (ids.empty()) return;
  const int n_lines = rows ? dims.height : dims.width;
  const int n_along = rows ? dims.width : dims.height;

  std::vector<std::vector<std::pair<double, std::size_t>>> per_line(n_lines);
  for (std::size_t id : ids) {
    const Point2& p = points[id];
    const int line = static_cast<int>(rows ? p.row : p.col);
    per_line[line].emplace_back(rows ? p.col : p.row, id);
  }

  // g[line][along]: squared distance along the line to the nearest point on it.
  std::vector<double> g(static_cast<std::size_t>(n_lines) * n_along, kInf);
  std::vector<std::size_t> gf(g.size(), kNone);
  for (int line = 0; line < n_lines; ++line) {
    auto& pts = per_line[line];
    if (pts.empty()) continue;
    std::sort(pts.begin(), pts.end());
    std::size_t j = 0;
    for (int a = 0; a < n_along; ++a) {
      while (j + 1 < pts.size() &&
             std::abs(pts[j + 1].first - a) <= std::abs(pts[j].first - a))
        ++j;
      const double d = a - pts[j].first;
      g[static_cast<std::size_t>(line) * n_along + a] = d * d;
      gf[static_cast<std::size_t>(line) * n_along + a] = pts[j].second;
    }
  }

  // Envelope across lines for every position along them.
  EnvelopeScratch env;
  std::vector<double> f(n_lines), out_d(n_lines);
  std::vector<std::size_t> ff(n_lines), out_f(n_lines);
  for (int a = 0; a < n_along; ++a) {
    for (int line = 0; line < n_lines; ++line) {
      f[line] = g[static_cast<std::size_t>(line) * n_along + a];
      ff[line] = gf[static_cast<std::size_t>(line) * n_along + a];
    }
    env.run(n_lines, f.data(), ff.data(), out_d.data(), out_f.data());
    for (int line = 0; line < n_lines; ++line) {
      const int r = rows ? line : a;
      const int c = rows ? a : line;
      const std::size_t idx = static_cast<std::size_t>(r) * dims.width + c;
      if (out_d[line] < acc.dist2[idx]) {
        acc.dist2[idx] = out_d[line];
        acc.feature[idx] = out_f[line];
      }
    }
  }
}

bool is_integral(double v) { return std::floor(v) == v; }

NearestPoint nearest_points(const std::vector<Point2>& points, Dims dims) {
  NearestPoint acc{std::vector<double>(dims.size(), kInf),
                   std::vector<std::size_t>(dims.size(), kNone)};
  std::vector<std::size_t> on_rows, on_cols, loose;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point2& p = points[i];
    if (is_integral(p.row) && p.row >= 0 && p.row < dims.height)
      on_rows.push_back(i);
    else if (is_integral(p.col) && p.col >= 0 && p.col < dims.width)
      on_cols.push_back(i);
    else
      loose.push_back(i);
  }
  line_points_transform(points, on_rows, dims, true, acc);
  line_points_transform(points, on_cols, dims, false, acc);
  for (std::size_t id : loose) {
    const Point2& p = points[id];
    for (int r = 0; r < dims.height; ++r) {
      for (int c = 0; c < dims.width; ++c) {
        const double dr = r - p.row;
        const double dc = c - p.col;
        const double d2 = dr * dr + dc * dc;
        const std::size_t idx = static_cast<std::size_t>(r) * dims.width + c;
        if (d2 < acc.dist2[idx]) {
          acc.dist2[idx] = d2;
          acc.feature[idx] = id;
        }
      }
    }
  }
  return acc;
}

double segment_distance2(double row, double col, const Point2& a, const Point2& b) {
  const double dr = b.row - a.row;
  const double dc = b.col - a.col;
  const double len2 = dr * dr + dc * dc;
  double t = 0.0;
  if (len2 > 0.0)
    t = std::clamp(((row - a.row) * dr + (col - a.col) * dc) / len2, 0.0, 1.0);
  const double er = row - (a.row + t * dr);
  const double ec = col - (a.col + t * dc);
  return er * er + ec * ec;
}

// Second difference of phi at (r, c) along (dr, dc); NaN if a neighbor is
// off-grid.
double second_difference(const ScalarField& phi, int r, int c, int dr, int dc) {
  if (!phi.dims().contains(r - dr, c - dc) || !phi.dims().contains(r + dr, c + dc))
    return std::numeric_limits<double>::quiet_NaN();
  return phi(r - dr, c - dc) - 2.0 * phi(r, c) + phi(r + dr, c + dc);
}

// Root in (0, 1) of the ENO quadratic through (0, a) and (1, b).
double edge_root(double a, double b, double d0, double d1) {
  double curv = 0.0;
  if (std::isnan(d0))
    curv = std::isnan(d1) ? 0.0 : d1;
  else if (std::isnan(d1))
    curv = d0;
  else if ((d0 > 0.0) == (d1 > 0.0))
    curv = std::abs(d0) < std::abs(d1) ? d0 : d1;
  const double linear = a / (a - b);
  // q(t) = a + (b - a) t + (curv / 2) t (t - 1)
  const double qa = 0.5 * curv;
  const double qb = b - a - 0.5 * curv;
  if (std::abs(qa) <= 1e-12 * (std::abs(a) + std::abs(b))) return linear;
  const double disc = qb * qb - 4.0 * qa * a;
  if (disc < 0.0) return linear;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
  for (double t : {q / qa, a / q})
    if (t > 0.0 && t < 1.0) return t;
  return linear;
}

}  // namespace

ZeroContour extract_zero_contour(const ScalarField& phi, CrossingRule rule) {
  const int h = phi.height();
  const int w = phi.width();
  bool has_negative = false;
  bool has_nonnegative = false;
  for (double v : phi.values()) {
    (is_negative(v) ? has_negative : has_nonnegative) = true;
  }
  if (!has_negative || !has_nonnegative)
    throw Error(ErrorKind::no_interface, "field has no zero crossing");

  ZeroContour out;
  const auto node = [w](int r, int c) { return static_cast<std::size_t>(r) * w + c; };

  // Zero nodes adjacent to the negative side are crossings themselves.
  std::vector<std::size_t> zero_point(static_cast<std::size_t>(h) * w, kNone);
  constexpr int kDr[4] = {1, -1, 0, 0};
  constexpr int kDc[4] = {0, 0, 1, -1};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const bool neg = is_negative(phi(r, c));
      bool touches_other = false;
      for (int k = 0; k < 4; ++k) {
        const int rr = r + kDr[k], cc = c + kDc[k];
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        if (is_negative(phi(rr, cc)) != neg) touches_other = true;
      }
      if (!touches_other) continue;
      out.boundary_pixels.push_back({r, c});
      if (phi(r, c) == 0.0) {
        zero_point[node(r, c)] = out.points.size();
        out.points.push_back({static_cast<double>(r), static_cast<double>(c)});
      }
    }
  }

  const auto crossing = [&](int r0, int c0, int r1, int c1) -> std::size_t {
    const double a = phi(r0, c0);
    const double b = phi(r1, c1);
    if (is_negative(a) == is_negative(b)) return kNone;
    if (a == 0.0) return zero_point[node(r0, c0)];
    if (b == 0.0) return zero_point[node(r1, c1)];
    const int dr = r1 - r0, dc = c1 - c0;
    const double t = rule == CrossingRule::linear
                         ? a / (a - b)
                         : edge_root(a, b, second_difference(phi, r0, c0, dr, dc),
                                     second_difference(phi, r1, c1, dr, dc));
    out.points.push_back({r0 + t * dr, c0 + t * dc});
    return out.points.size() - 1;
  };

  // Horizontal edges (r,c)-(r,c+1) and vertical edges (r,c)-(r+1,c).
  std::vector<std::size_t> hedge(static_cast<std::size_t>(h) * w, kNone);
  std::vector<std::size_t> vedge(static_cast<std::size_t>(h) * w, kNone);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) hedge[node(r, c)] = crossing(r, c, r, c + 1);
      if (r + 1 < h) vedge[node(r, c)] = crossing(r, c, r + 1, c);
    }
  }

  for (int r = 0; r + 1 < h; ++r) {
    for (int c = 0; c + 1 < w; ++c) {
      // top, right, bottom, left
      const std::size_t around[4] = {hedge[node(r, c)], vedge[node(r, c + 1)],
                                     hedge[node(r + 1, c)], vedge[node(r, c)]};
      std::size_t ids[4];
      bool is_zero_node[4];
      int n = 0;
      for (std::size_t id : around) {
        if (id == kNone) continue;
        if (n > 0 && ids[n - 1] == id) continue;
        ids[n] = id;
        const Point2& p = out.points[id];
        is_zero_node[n] = is_integral(p.row) && is_integral(p.col) &&
                          zero_point[node(static_cast<int>(p.row), static_cast<int>(p.col))] == id;
        ++n;
      }
      if (n > 1 && ids[n - 1] == ids[0]) --n;

      if (n == 2) {
        out.segments.push_back({ids[0], ids[1]});
      } else if (n == 4) {
        // Saddle: the center value decides which diagonal pair is joined.
        const double center =
            0.25 * (phi(r, c) + phi(r, c + 1) + phi(r + 1, c + 1) + phi(r + 1, c));
        if (is_negative(center) == is_negative(phi(r, c))) {
          out.segments.push_back({ids[0], ids[1]});
          out.segments.push_back({ids[2], ids[3]});
        } else {
          out.segments.push_back({ids[3], ids[0]});
          out.segments.push_back({ids[1], ids[2]});
        }
      } else if (n == 3) {
        // Only arises with exact zeros; join the two interpolated crossings.
        std::size_t plain[3];
        int m = 0;
        for (int k = 0; k < 3; ++k)
          if (!is_zero_node[k]) plain[m++] = ids[k];
        if (m == 2) out.segments.push_back({plain[0], plain[1]});
      }
    }
  }
  return out;
}

ScalarField distance_to_contour(const ZeroContour& contour, Dims dims,
                                const DistanceOptions& options) {
  if (contour.points.empty())
    throw Error(ErrorKind::invalid_input, "empty contour");
  ScalarField probe(dims);  // validates dims

  NearestPoint nearest = nearest_points(contour.points, dims);
  std::vector<double>& dist2 = nearest.dist2;

  const auto& points = contour.points;
  const auto& segments = contour.segments;
  if (!segments.empty()) {
    // Segments incident to each point.
    std::vector<std::size_t> first(points.size() + 1, 0);
    for (const auto& s : segments) {
      ++first[s[0] + 1];
      ++first[s[1] + 1];
    }
    for (std::size_t i = 0; i < points.size(); ++i) first[i + 1] += first[i];
    std::vector<std::size_t> incident(first.back());
    std::vector<std::size_t> fill(first.begin(), first.end() - 1);
    for (std::size_t k = 0; k < segments.size(); ++k) {
      incident[fill[segments[k][0]]++] = k;
      incident[fill[segments[k][1]]++] = k;
    }

    std::vector<double> refined(dist2);
    for (int r = 0; r < dims.height; ++r) {
      for (int c = 0; c < dims.width; ++c) {
        const std::size_t idx = static_cast<std::size_t>(r) * dims.width + c;
        double best = dist2[idx];
        std::size_t seen[9];
        int n_seen = 0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (!dims.contains(r + dr, c + dc)) continue;
            const std::size_t f =
                nearest.feature[static_cast<std::size_t>(r + dr) * dims.width + c + dc];
            if (std::find(seen, seen + n_seen, f) != seen + n_seen) continue;
            seen[n_seen++] = f;
            for (std::size_t k = first[f]; k < first[f + 1]; ++k) {
              const auto& s = segments[incident[k]];
              best = std::min(best, segment_distance2(r, c, points[s[0]], points[s[1]]));
            }
          }
        }
        refined[idx] = best;
      }
    }
    dist2.swap(refined);

    const double band = std::max(options.segment_band, 0.0);
    const double band2 = band * band;
    for (const auto& s : segments) {
      const Point2& a = points[s[0]];
      const Point2& b = points[s[1]];
      const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.row, b.row) - band)));
      const int r1 = std::min(dims.height - 1, static_cast<int>(std::ceil(std::max(a.row, b.row) + band)));
      const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.col, b.col) - band)));
      const int c1 = std::min(dims.width - 1, static_cast<int>(std::ceil(std::max(a.col, b.col) + band)));
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
          const double d2 = segment_distance2(r, c, a, b);
          double& cur = dist2[static_cast<std::size_t>(r) * dims.width + c];
          if (d2 <= band2 && d2 < cur) cur = d2;
        }
      }
    }
  }
  std::vector<double> dist(dims.size());
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = std::sqrt(dist2[i]);
  return ScalarField(dims, std::move(dist));
}

ScalarField reinitialize(const ScalarField& phi, InterfaceMode mode,
                         CrossingRule crossing) {
  const Dims dims = phi.dims();
  ScalarField out(dims);
  if (mode == InterfaceMode::subpixel) {
    const ZeroContour contour = extract_zero_contour(phi, crossing);
    const ScalarField d = distance_to_contour(contour, dims);
    for (int r = 0; r < dims.height; ++r) {
      for (int c = 0; c < dims.width; ++c) {
        out(r, c) = is_negative(phi(r, c)) ? -std::max(d(r, c), kMinInteriorDistance)
                                           : d(r, c);
      }
    }
    return out;
  }

  // Node-center distances: each side measures to the nearest boundary node of
  // the other side.
  const ZeroContour contour = extract_zero_contour(phi);
  std::vector<Point2> inner, outer;
  for (const GridIndex& g : contour.boundary_pixels) {
    Point2 p{static_cast<double>(g.row), static_cast<double>(g.col)};
    (is_negative(phi(g.row, g.col)) ? inner : outer).push_back(p);
  }
  const NearestPoint to_inner = nearest_points(inner, dims);
  const NearestPoint to_outer = nearest_points(outer, dims);
  for (int r = 0; r < dims.height; ++r) {
    for (int c = 0; c < dims.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * dims.width + c;
      out(r, c) = is_negative(phi(r, c)) ? -std::sqrt(to_outer.dist2[idx])
                                         : std::sqrt(to_inner.dist2[idx]);
    }
  }
  return out;
}

ScalarField signed_distance(const RegionMask& mask) {
  ScalarField f(mask.dims(), 1.0);
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      if (mask(r, c)) f(r, c) = -1.0;
  return reinitialize(f);
}

}  // namespace cvxls
