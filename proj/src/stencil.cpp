#include "cvxls/stencil.hpp"

#include <cmath>

namespace cvxls {

double laplacian_at(const ScalarField& f, int row, int col) {
  const double center = f(row, col);
  return f.clamped(row + 1, col) + f.clamped(row - 1, col) +
         f.clamped(row, col + 1) + f.clamped(row, col - 1) - 4.0 * center;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.dims());
  const int h = f.height();
  const int w = f.width();
  for (int r = 0; r < h; ++r) {
    const bool edge_row = r == 0 || r == h - 1;
    for (int c = 0; c < w; ++c) {
      if (edge_row || c == 0 || c == w - 1) {
        out(r, c) = laplacian_at(f, r, c);
      } else {
        out(r, c) = f(r + 1, c) + f(r - 1, c) + f(r, c + 1) + f(r, c - 1) -
                    4.0 * f(r, c);
      }
    }
  }
  return out;
}

namespace {

// Central difference in the interior, one-sided on the first/last sample.
double diff_along(const ScalarField& f, int r, int c, int dr, int dc, int n,
                  int pos) {
  if (pos == 0) return f(r + dr, c + dc) - f(r, c);
  if (pos == n - 1) return f(r, c) - f(r - dr, c - dc);
  return 0.5 * (f(r + dr, c + dc) - f(r - dr, c - dc));
}

}  // namespace

ScalarField gradient_magnitude(const ScalarField& f) {
  ScalarField out(f.dims());
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      const double gy = diff_along(f, r, c, 1, 0, f.height(), r);
      const double gx = diff_along(f, r, c, 0, 1, f.width(), c);
      out(r, c) = std::hypot(gx, gy);
    }
  }
  return out;
}

ScalarField hessian_determinant(const ScalarField& f) {
  ScalarField out(f.dims());
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      const double fc = f(r, c);
      const double fyy = f.clamped(r + 1, c) - 2.0 * fc + f.clamped(r - 1, c);
      const double fxx = f.clamped(r, c + 1) - 2.0 * fc + f.clamped(r, c - 1);
      const double fxy = 0.25 * (f.clamped(r + 1, c + 1) - f.clamped(r + 1, c - 1) -
                                 f.clamped(r - 1, c + 1) + f.clamped(r - 1, c - 1));
      out(r, c) = fxx * fyy - fxy * fxy;
    }
  }
  return out;
}

}  // namespace cvxls
