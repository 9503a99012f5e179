#include "cvxls/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "cvxls/error.hpp"

namespace cvxls {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vec {
  double x;  // col
  double y;  // row
};

// Even-odd rule; polygon in (col, row) coordinates.
bool inside_polygon(const std::vector<Vec>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec& a = poly[i];
    const Vec& b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x)
      in = !in;
  }
  return in;
}

std::vector<Vec> regular_polygon(int sides, double cx, double cy, double radius,
                                 double phase) {
  std::vector<Vec> poly;
  for (int k = 0; k < sides; ++k) {
    const double t = phase + 2.0 * kPi * k / sides;
    poly.push_back({cx + radius * std::cos(t), cy + radius * std::sin(t)});
  }
  return poly;
}

using Predicate = std::function<bool(double x, double y)>;

struct Geometry {
  Predicate shape;     // ground truth
  Predicate occluder;  // painted in background intensity; may be empty
};

Geometry geometry(const ShapeSpec& s, Dims dims, std::uint64_t seed) {
  const double cx = s.center_col >= 0.0 ? s.center_col : 0.5 * (dims.width - 1);
  const double cy = s.center_row >= 0.0 ? s.center_row : 0.5 * (dims.height - 1);
  const auto disk = [](double x0, double y0, double r) {
    return [=](double x, double y) {
      return (x - x0) * (x - x0) + (y - y0) * (y - y0) <= r * r;
    };
  };

  switch (s.kind) {
    case ShapeKind::disk:
      return {disk(cx, cy, s.radius), {}};
    case ShapeKind::square: {
      const double half = 0.5 * s.size;
      return {[=](double x, double y) {
                return x >= cx - half && x < cx + half && y >= cy - half && y < cy + half;
              },
              {}};
    }
    case ShapeKind::star: {
      if (s.points < 2) throw Error(ErrorKind::invalid_input, "star needs >= 2 points");
      std::vector<Vec> poly;
      for (int k = 0; k < 2 * s.points; ++k) {
        const double r = (k % 2 == 0) ? s.radius : s.inner_radius;
        const double t = -0.5 * kPi + kPi * k / s.points;
        poly.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
      }
      return {[poly](double x, double y) { return inside_polygon(poly, x, y); }, {}};
    }
    case ShapeKind::pacman: {
      const double half = 0.5 * s.wedge_deg * kPi / 180.0;
      const auto in_disk = disk(cx, cy, s.radius);
      return {[=](double x, double y) {
                if (!in_disk(x, y)) return false;
                if (x == cx && y == cy) return true;
                return std::abs(std::atan2(y - cy, x - cx)) > half;
              },
              {}};
    }
    case ShapeKind::l_shape: {
      const double half = 0.5 * s.size;
      return {[=](double x, double y) {
                const bool in_square =
                    x >= cx - half && x < cx + half && y >= cy - half && y < cy + half;
                const bool cut = x >= cx && y < cy;
                return in_square && !cut;
              },
              {}};
    }
    case ShapeKind::crescent: {
      const auto outer = disk(cx, cy, s.radius);
      const auto bite = disk(cx + 0.5 * s.radius, cy, 0.8 * s.radius);
      return {[=](double x, double y) { return outer(x, y) && !bite(x, y); }, {}};
    }
    case ShapeKind::notched_polygon: {
      if (s.sides < 3) throw Error(ErrorKind::invalid_input, "polygon needs >= 3 sides");
      // A flat side faces +col.
      const auto poly = regular_polygon(s.sides, cx, cy, s.radius, kPi / s.sides);
      const double apothem = s.radius * std::cos(kPi / s.sides);
      const double x0 = cx + apothem - s.notch_depth;
      const double hw = 0.5 * s.notch_width;
      return {[=](double x, double y) {
                return inside_polygon(poly, x, y) && !(x >= x0 && std::abs(y - cy) <= hw);
              },
              {}};
    }
    case ShapeKind::blob: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> amp(0.05, 0.22);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
      std::vector<double> a, p;
      for (int k = 2; k <= 5; ++k) {
        a.push_back(amp(rng) / (k - 1));
        p.push_back(phase(rng));
      }
      const double r0 = s.radius;
      return {[=](double x, double y) {
                const double t = std::atan2(y - cy, x - cx);
                double r = 1.0;
                for (std::size_t i = 0; i < a.size(); ++i)
                  r += a[i] * std::cos((i + 2) * t + p[i]);
                return std::hypot(x - cx, y - cy) <= r0 * r;
              },
              {}};
    }
    case ShapeKind::occluded_octagon: {
      const auto poly = regular_polygon(8, cx, cy, s.radius, kPi / 8.0);
      // Bar perpendicular to the diagonal toward (+col, +row), crossing the
      // corner region while leaving the tip visible.
      const double at = 0.72 * s.radius;
      const double hw = 0.5 * s.notch_width;
      return {[poly](double x, double y) { return inside_polygon(poly, x, y); },
              [=](double x, double y) {
                const double t = ((x - cx) + (y - cy)) / std::numbers::sqrt2;
                return std::abs(t - at) <= hw;
              }};
    }
    case ShapeKind::twin_disks: {
      const auto left = disk(cx - 0.5 * s.separation, cy, s.radius);
      const auto right = disk(cx + 0.5 * s.separation, cy, s.radius);
      return {[=](double x, double y) { return left(x, y) || right(x, y); }, {}};
    }
  }
  throw Error(ErrorKind::invalid_input, "unknown shape kind");
}

void check_margin(const RegionMask& mask) {
  int r0 = mask.height(), r1 = -1, c0 = mask.width(), c1 = -1;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c)) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (r1 < 0) throw Error(ErrorKind::invalid_input, "shape covers no pixels");
  constexpr int kMargin = 4;
  if (r0 < kMargin || c0 < kMargin || r1 > mask.height() - 1 - kMargin ||
      c1 > mask.width() - 1 - kMargin)
    throw Error(ErrorKind::invalid_input, "shape must keep a 4 px margin to the border");
}

}  // namespace

ShapeKind parse_shape_kind(const std::string& name) {
  static const std::pair<const char*, ShapeKind> kNames[] = {
      {"disk", ShapeKind::disk},
      {"square", ShapeKind::square},
      {"star", ShapeKind::star},
      {"pacman", ShapeKind::pacman},
      {"l_shape", ShapeKind::l_shape},
      {"crescent", ShapeKind::crescent},
      {"notched_polygon", ShapeKind::notched_polygon},
      {"blob", ShapeKind::blob},
      {"occluded_octagon", ShapeKind::occluded_octagon},
      {"twin_disks", ShapeKind::twin_disks},
  };
  for (const auto& [n, k] : kNames)
    if (name == n) return k;
  throw Error(ErrorKind::invalid_parameter, "unknown shape kind: " + name);
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::disk: return "disk";
    case ShapeKind::square: return "square";
    case ShapeKind::star: return "star";
    case ShapeKind::pacman: return "pacman";
    case ShapeKind::l_shape: return "l_shape";
    case ShapeKind::crescent: return "crescent";
    case ShapeKind::notched_polygon: return "notched_polygon";
    case ShapeKind::blob: return "blob";
    case ShapeKind::occluded_octagon: return "occluded_octagon";
    case ShapeKind::twin_disks: return "twin_disks";
  }
  return "unknown";
}

RegionMask synth_mask(const ShapeSpec& spec, Dims dims, std::uint64_t seed) {
  const Geometry geo = geometry(spec, dims, seed);
  RegionMask mask(dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) mask.set(r, c, geo.shape(c, r));
  check_margin(mask);
  return mask;
}

SynthImage synth(const ShapeSpec& spec, Dims dims, std::uint64_t seed) {
  const Geometry geo = geometry(spec, dims, seed);
  RegionMask truth(dims);
  ScalarField raw(dims, spec.background);
  for (int r = 0; r < dims.height; ++r) {
    for (int c = 0; c < dims.width; ++c) {
      const bool in = geo.shape(c, r);
      truth.set(r, c, in);
      const bool hidden = geo.occluder && geo.occluder(c, r);
      raw(r, c) = (in && !hidden) ? spec.foreground : spec.background;
    }
  }
  check_margin(truth);
  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : raw.values()) v += noise(rng);
  }
  return {LoadedImage{normalize(raw), 1, -1}, std::move(truth)};
}

}  // namespace cvxls
