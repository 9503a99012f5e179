#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cvxls/field.hpp"
#include "cvxls/sdf.hpp"

namespace cvxls {

/// Partition of the grid by the sign of the discrete Laplacian: a node is
/// inactive when laplacian > active_tol, active otherwise. With
/// `include_boundary` false the outermost ring is always inactive.
class ActiveSetMask {
 public:
  ActiveSetMask(const ScalarField& psi, double active_tol,
                bool include_boundary = false);

  Dims dims() const { return inactive_.dims(); }
  bool inactive(int row, int col) const { return inactive_(row, col); }
  std::size_t inactive_count() const { return inactive_.count(); }
  std::size_t active_count() const { return dims().size() - inactive_count(); }

  friend bool operator==(const ActiveSetMask&, const ActiveSetMask&) = default;

 private:
  RegionMask inactive_;
};

enum class SweepOrder {
  jacobi,        ///< every active node reads the previous sweep's values
  gauss_seidel,  ///< in-place lexicographic update
};

enum class BoundaryHandling {
  /// The outermost ring of nodes is never active and keeps its values.
  fixed,
  /// Boundary nodes are constrained too, with replicate ghosts in both the
  /// Laplacian and the neighbor average.
  replicate,
};

struct ProjectionOptions {
  int max_sweeps = 30;
  double active_tol = 1e-12;
  SweepOrder order = SweepOrder::jacobi;
  BoundaryHandling boundary = BoundaryHandling::fixed;
};

struct ProjectionResult {
  ScalarField field;
  ActiveSetMask inactive;
  int sweeps = 0;
  /// The active set stopped changing and every active node is harmonic to
  /// within active_tol. False means the sweep cap was hit.
  bool converged = false;
};

/// Active-set approximation of the L2 projection onto {laplacian >= 0}.
///
/// Inactive nodes keep their value; active nodes take the average of their
/// four neighbors (replicate ghosts at the boundary). The active set is
/// recomputed after every sweep. Iteration stops once the set is unchanged
/// and all active nodes satisfy laplacian >= -active_tol, or after
/// max_sweeps sweeps.
ProjectionResult project_convex(const ScalarField& phi,
                                const ProjectionOptions& options = {});

/// One record per outer iteration of enforce_convex_prior().
struct OuterRecord {
  int iteration = 0;
  int sweeps = 0;
  bool sweep_converged = false;
  double relative_change = 0.0;
  double min_interior_laplacian = 0.0;
  std::size_t region_pixels = 0;
};

/// Serializes a record as a single key=value line.
std::string format_trace_line(const OuterRecord& record);

struct ProjectionDiagnostics {
  int outer_iterations = 0;
  std::vector<int> inner_iterations_per_outer;
  double final_min_laplacian = 0.0;
  double final_relative_change = 0.0;
  bool converged = false;
  std::vector<OuterRecord> records;
};

struct ConvexPriorOptions {
  double eps = 1e-4;
  int max_outer = 300;
  ProjectionOptions projection;
  /// Crossing placement used by every reinitialization.
  CrossingRule crossing = CrossingRule::linear;
  /// Called with (n, phi^n) after every outer iteration.
  std::function<void(int, const ScalarField&)> observer;
};

struct ConvexPriorResult {
  ScalarField field;
  ProjectionDiagnostics diagnostics;
};

/// Width of the grid-boundary band excluded from laplacian checks.
inline constexpr int kBoundaryBand = 2;

/// Minimum discrete Laplacian over nodes at least `margin` pixels from the
/// grid boundary.
double min_interior_laplacian(const ScalarField& f, int margin = kBoundaryBand);

/// Alternates reinitialization and project_convex until the relative L2
/// change between iterates drops to eps or max_outer is reached. Also stops
/// once the reinitialized field already has laplacian >= -active_tol at
/// every constrained node: a further reinitialization could only add
/// interpolation drift.
/// Throws region_collapse if fewer than 4 pixels stay negative or the
/// interface disappears.
ConvexPriorResult enforce_convex_prior(const ScalarField& phi,
                                       const ConvexPriorOptions& options = {});

}  // namespace cvxls
