#pragma once

#include "cvxls/field.hpp"

namespace cvxls {

/// Five-point Laplacian with unit spacing. Missing neighbors at the grid
/// boundary take the node's own value (replicate ghosts), so the sum of the
/// result over the grid is zero up to rounding.
ScalarField laplacian(const ScalarField& f);

/// Laplacian at a single node, same stencil as laplacian().
double laplacian_at(const ScalarField& f, int row, int col);

/// |grad f| from central differences in the interior and one-sided
/// differences on the boundary rows/columns.
ScalarField gradient_magnitude(const ScalarField& f);

/// f_xx * f_yy - f_xy^2 from central second differences (replicate ghosts).
/// Used only to monitor how far a discrete SDF is from a developable surface.
ScalarField hessian_determinant(const ScalarField& f);

}  // namespace cvxls
