#include "cvxls/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cvxls/error.hpp"
#include "cvxls/stencil.hpp"

namespace cvxls {

namespace {

constexpr double kInvPi = std::numbers::inv_pi;
constexpr double kMinMass = 1e-12;

void require_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorKind::invalid_parameter, "heaviside eps must be > 0");
}

void require_same_dims(const ScalarField& a, const ScalarField& b) {
  if (a.dims() != b.dims())
    throw Error(ErrorKind::invalid_input, "field dimensions differ");
}

// Gradient taps: Sobel-weighted central differences, replicate ghosts.
// The row/column smoothing halves the largest eigenvalue of the length
// term's Hessian along grid diagonals, which keeps explicit steps of size
// 0.5 stable at mu = 10.
struct Tap {
  int dr, dc;
  double wx, wy;
};
constexpr Tap kGradientTaps[] = {
    {-1, 1, 0.125, 0.0},   {0, 1, 0.25, 0.0},    {1, 1, 0.125, 0.0},
    {-1, -1, -0.125, 0.0}, {0, -1, -0.25, 0.0},  {1, -1, -0.125, 0.0},
    {1, -1, 0.0, 0.125},   {1, 0, 0.0, 0.25},    {1, 1, 0.0, 0.125},
    {-1, -1, 0.0, -0.125}, {-1, 0, 0.0, -0.25},  {-1, 1, 0.0, -0.125},
};

struct Grad {
  double x, y;
};

Grad smoothed_gradient(const ScalarField& f, int r, int c) {
  Grad g{0.0, 0.0};
  for (const Tap& t : kGradientTaps) {
    const double v = f.clamped(r + t.dr, c + t.dc);
    g.x += t.wx * v;
    g.y += t.wy * v;
  }
  return g;
}

ScalarField heaviside_field(const ScalarField& phi, double eps) {
  ScalarField h(phi.dims());
  const auto p = phi.values();
  auto o = h.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = smoothed_heaviside(p[i], eps);
  return h;
}

}  // namespace

void EnergyParams::validate() const {
  const auto weight = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::invalid_parameter, std::string(name) + " must be finite and >= 0");
  };
  weight(mu, "mu");
  weight(lambda1, "lambda1");
  weight(lambda2, "lambda2");
  if (nu != 0.0) throw Error(ErrorKind::invalid_parameter, "nu must be 0");
  require_eps(heaviside_eps);
  if (!(grad_floor > 0.0) || !std::isfinite(grad_floor))
    throw Error(ErrorKind::invalid_parameter, "grad_floor must be > 0");
}

double smoothed_heaviside(double z, double eps) {
  require_eps(eps);
  return 0.5 * (1.0 + 2.0 * kInvPi * std::atan(z / eps));
}

double smoothed_dirac(double z, double eps) {
  require_eps(eps);
  return kInvPi * eps / (eps * eps + z * z);
}

ScalarField gaussian_blur(const ScalarField& image, double sigma) {
  if (!(sigma > 0.0))
    throw Error(ErrorKind::invalid_parameter, "sigma must be > 0");
  std::array<double, 5> k{};
  double sum = 0.0;
  for (int i = -2; i <= 2; ++i) {
    k[i + 2] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + 2];
  }
  // The 2D kernel is the outer product, so normalizing each factor
  // normalizes the 5x5 kernel.
  for (double& v : k) v /= sum;

  ScalarField rows(image.dims());
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * image.clamped(r, c + i);
      rows(r, c) = acc;
    }
  ScalarField out(image.dims());
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * rows.clamped(r + i, c);
      out(r, c) = acc;
    }
  return out;
}

ScalarField edge_indicator(const ScalarField& image) {
  ScalarField g = gradient_magnitude(gaussian_blur(image));
  for (double& v : g.values()) v = 1.0 / (1.0 + v * v);
  return g;
}

RegionStats region_means(const ScalarField& image, const ScalarField& phi,
                         double eps) {
  require_eps(eps);
  require_same_dims(image, phi);
  RegionStats s;
  double sum1 = 0.0, sum2 = 0.0;
  bool any_negative = false, any_nonnegative = false;
  const auto I = image.values();
  const auto p = phi.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double h = smoothed_heaviside(p[i], eps);
    s.n1 += h;
    s.n2 += 1.0 - h;
    sum1 += I[i] * h;
    sum2 += I[i] * (1.0 - h);
    (p[i] < 0.0 ? any_negative : any_nonnegative) = true;
  }
  if (!any_nonnegative || s.n1 <= kMinMass)
    throw Error(ErrorKind::region_collapse, "background region {phi >= 0} is empty");
  if (!any_negative || s.n2 <= kMinMass)
    throw Error(ErrorKind::region_collapse, "object region {phi < 0} is empty");
  s.c1 = sum1 / s.n1;
  s.c2 = sum2 / s.n2;
  return s;
}

RegionStats phase_means(const ScalarField& image, const ScalarField& phi) {
  require_same_dims(image, phi);
  RegionStats s;
  double sum1 = 0.0, sum2 = 0.0;
  const auto I = image.values();
  const auto p = phi.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) {
      s.n2 += 1.0;
      sum2 += I[i];
    } else {
      s.n1 += 1.0;
      sum1 += I[i];
    }
  }
  if (s.n1 == 0.0)
    throw Error(ErrorKind::region_collapse, "background region {phi >= 0} is empty");
  if (s.n2 == 0.0)
    throw Error(ErrorKind::region_collapse, "object region {phi < 0} is empty");
  s.c1 = sum1 / s.n1;
  s.c2 = sum2 / s.n2;
  return s;
}

double total_energy(const ScalarField& image, const ScalarField& phi,
                    const RegionStats& stats, const ScalarField& g,
                    const EnergyParams& params) {
  require_same_dims(image, phi);
  require_same_dims(g, phi);
  const ScalarField h = heaviside_field(phi, params.heaviside_eps);
  const double eta2 = params.grad_floor * params.grad_floor;
  double length = 0.0, data = 0.0;
  for (int r = 0; r < phi.height(); ++r)
    for (int c = 0; c < phi.width(); ++c) {
      const Grad d = smoothed_gradient(h, r, c);
      length += g(r, c) * std::sqrt(d.x * d.x + d.y * d.y + eta2);
      const double e1 = image(r, c) - stats.c1;
      const double e2 = image(r, c) - stats.c2;
      data += params.lambda1 * e1 * e1 * h(r, c) + params.lambda2 * e2 * e2 * (1.0 - h(r, c));
    }
  return params.mu * length + data;
}

ScalarField descent_direction(const ScalarField& phi, const ScalarField& image,
                              const RegionStats& stats, const ScalarField& g,
                              const EnergyParams& params) {
  require_same_dims(image, phi);
  require_same_dims(g, phi);
  params.validate();
  const double eps = params.heaviside_eps;
  const double eta2 = params.grad_floor * params.grad_floor;
  const Dims dims = phi.dims();
  const ScalarField h = heaviside_field(phi, eps);

  // div(g n) with n = grad H / |grad H|_eta, assembled as the negative
  // adjoint of the gradient taps so it matches total_energy() exactly.
  ScalarField div(dims, 0.0);
  const int last_r = dims.height - 1, last_c = dims.width - 1;
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) {
      const Grad d = smoothed_gradient(h, r, c);
      const double w = g(r, c) / std::sqrt(d.x * d.x + d.y * d.y + eta2);
      for (const Tap& t : kGradientTaps) {
        const int rr = std::clamp(r + t.dr, 0, last_r);
        const int cc = std::clamp(c + t.dc, 0, last_c);
        div(rr, cc) -= w * (t.wx * d.x + t.wy * d.y);
      }
    }
  ScalarField dir(dims);
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) {
      const double e1 = image(r, c) - stats.c1;
      const double e2 = image(r, c) - stats.c2;
      dir(r, c) = smoothed_dirac(phi(r, c), eps) *
                  (params.mu * div(r, c) - params.lambda1 * e1 * e1 + params.lambda2 * e2 * e2);
    }
  return dir;
}

ScalarField evolution_step(const ScalarField& phi, const ScalarField& image,
                           const RegionStats& stats, const ScalarField& g,
                           const EnergyParams& params, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorKind::invalid_parameter, "dt must be > 0");
  ScalarField out = descent_direction(phi, image, stats, g, params);
  const auto p = phi.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = p[i] + dt * o[i];
  return out;
}

}  // namespace cvxls
