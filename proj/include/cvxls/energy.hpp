#pragma once

#include "cvxls/field.hpp"

namespace cvxls {

struct EnergyParams {
  double mu = 10.0;             ///< curve-length weight
  double lambda1 = 1.0;         ///< data weight on {phi >= 0}
  double lambda2 = 1.0;         ///< data weight on {phi < 0}
  double nu = 0.0;              ///< area weight; must stay 0
  double heaviside_eps = 1.0;   ///< smoothing width of H and delta
  double grad_floor = 1e-8;     ///< eta in |grad phi|_eta

  /// Throws invalid_parameter on negative or non-finite weights, nu != 0,
  /// or non-positive eps / eta.
  void validate() const;
};

/// c1 belongs to the background {phi >= 0}, c2 to the object {phi < 0}.
struct RegionStats {
  double c1 = 0.0;
  double c2 = 0.0;
  double n1 = 0.0;  ///< sum of H(phi)
  double n2 = 0.0;  ///< sum of 1 - H(phi)
};

/// 0.5 * (1 + (2/pi) * atan(z / eps)). Throws invalid_parameter if eps <= 0.
double smoothed_heaviside(double z, double eps);
/// (1/pi) * eps / (eps^2 + z^2), the derivative of smoothed_heaviside.
double smoothed_dirac(double z, double eps);

/// Convolution with the normalized 5x5 sampled Gaussian, replicate padding.
ScalarField gaussian_blur(const ScalarField& image, double sigma = 0.5);

/// 1 / (1 + |grad(G * I)|^2), gradient as in gradient_magnitude().
ScalarField edge_indicator(const ScalarField& image);

/// Smoothed region means. Throws region_collapse when either side of the
/// sign split holds no node or a denominator is <= 1e-12.
RegionStats region_means(const ScalarField& image, const ScalarField& phi,
                         double eps);

/// Means of the sharp partition, c1 over {phi >= 0} and c2 over {phi < 0};
/// n1 and n2 are node counts. Throws region_collapse if a side is empty.
RegionStats phase_means(const ScalarField& image, const ScalarField& phi);

/// mu * sum g * |grad H(phi)|_eta
///   + sum lambda1 (I - c1)^2 H(phi) + lambda2 (I - c2)^2 (1 - H(phi)).
/// The length term is the total variation of H(phi), which equals the
/// integral of g * delta(phi) * |grad phi| in the continuum. Gradients are
/// Sobel-weighted central differences with replicate ghosts.
double total_energy(const ScalarField& image, const ScalarField& phi,
                    const RegionStats& stats, const ScalarField& g,
                    const EnergyParams& params);

/// Negative gradient of total_energy() with respect to every node of phi,
/// stats held fixed:
///   delta(phi) * [mu * div(g n) - lambda1 (I - c1)^2 + lambda2 (I - c2)^2]
/// with n = grad H(phi) / |grad H(phi)|_eta, the unit normal of the level
/// sets, and div the negative adjoint of that gradient.
ScalarField descent_direction(const ScalarField& phi, const ScalarField& image,
                              const RegionStats& stats, const ScalarField& g,
                              const EnergyParams& params);

/// phi + dt * descent_direction(). Throws invalid_parameter if dt <= 0.
ScalarField evolution_step(const ScalarField& phi, const ScalarField& image,
                           const RegionStats& stats, const ScalarField& g,
                           const EnergyParams& params, double dt);

}  // namespace cvxls
