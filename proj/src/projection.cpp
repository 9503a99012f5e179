#include "cvxls/projection.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cvxls/error.hpp"
#include "cvxls/sdf.hpp"
#include "cvxls/stencil.hpp"

namespace cvxls {

namespace {

bool on_ring(Dims dims, int r, int c) {
  return r == 0 || c == 0 || r == dims.height - 1 || c == dims.width - 1;
}

// Every node project_convex constrains already has laplacian >= -tol.
bool satisfies_constraint(const ScalarField& f, const ProjectionOptions& options) {
  const bool ring = options.boundary == BoundaryHandling::replicate;
  for (int r = 0; r < f.height(); ++r)
    for (int c = 0; c < f.width(); ++c) {
      if (!ring && on_ring(f.dims(), r, c)) continue;
      if (laplacian_at(f, r, c) < -options.active_tol) return false;
    }
  return true;
}

RegionMask inactive_mask(const ScalarField& psi, double active_tol,
                         bool include_boundary) {
  RegionMask mask(psi.dims());
  const ScalarField lap = laplacian(psi);
  for (int r = 0; r < psi.height(); ++r)
    for (int c = 0; c < psi.width(); ++c)
      mask.set(r, c, lap(r, c) > active_tol ||
                         (!include_boundary && on_ring(psi.dims(), r, c)));
  return mask;
}

double neighbor_average(const ScalarField& f, int r, int c) {
  return 0.25 * (f.clamped(r + 1, c) + f.clamped(r - 1, c) + f.clamped(r, c + 1) +
                 f.clamped(r, c - 1));
}

// Inactive flags for one sweep, recomputed from the current iterate.
// `harmonic` reports whether every active node has laplacian >= -tol.
struct SetState {
  std::vector<std::uint8_t> inactive;
  bool harmonic = true;
};

struct Classifier {
  double tol;
  bool include_boundary;

  // Flags row r of psi into state. Rows r - 1 and r + 1 must be final.
  void row(const ScalarField& psi, int r, SetState& state) const {
    const Dims dims = psi.dims();
    const int w = dims.width;
    const std::size_t base = static_cast<std::size_t>(r) * w;
    std::uint8_t* flags = state.inactive.data() + base;
    const auto ring_node = [&](int c) {
      if (!include_boundary) {
        flags[c] = 1;
        return;
      }
      const double lap = laplacian_at(psi, r, c);
      flags[c] = lap > tol;
      if (!flags[c] && lap < -tol) state.harmonic = false;
    };
    if (r == 0 || r + 1 == dims.height) {
      for (int c = 0; c < w; ++c) ring_node(c);
      return;
    }
    ring_node(0);
    const double* p = psi.values().data() + base;
    bool violated = false;
    for (int c = 1; c + 1 < w; ++c) {
      const double lap = p[c - w] + p[c + w] + p[c - 1] + p[c + 1] - 4.0 * p[c];
      const bool inactive = lap > tol;
      flags[c] = inactive;
      violated |= !inactive & (lap < -tol);
    }
    if (violated) state.harmonic = false;
    ring_node(w - 1);
  }

  void all(const ScalarField& psi, SetState& state) const {
    state.inactive.resize(psi.dims().size());
    state.harmonic = true;
    for (int r = 0; r < psi.height(); ++r) row(psi, r, state);
  }
};

// Jacobi update of one interior row; src and dst never alias here.
void interior_row(const double* __restrict src, double* __restrict dst,
                  const std::uint8_t* __restrict flags, int w) {
  for (int c = 1; c + 1 < w; ++c) {
    const double avg = 0.25 * (src[c - w] + src[c + w] + src[c - 1] + src[c + 1]);
    dst[c] = flags[c] ? src[c] : avg;
  }
}

// One lexicographic sweep. Active nodes take the neighbor average of `src`,
// inactive ones keep it; results go to `dst`. Passing the same field twice
// gives the in-place (Gauss-Seidel) variant. The active set of `dst` is
// rebuilt into `next` one row behind the update.
void sweep(const ScalarField& src, ScalarField& dst, const SetState& set,
           const Classifier& classifier, SetState& next) {
  const Dims dims = src.dims();
  const int w = dims.width;
  const double* p = src.values().data();
  double* q = dst.values().data();
  const std::uint8_t* flags = set.inactive.data();
  next.inactive.resize(dims.size());
  next.harmonic = true;
  const auto edge_node = [&](int r, int c) {
    const std::size_t i = static_cast<std::size_t>(r) * w + c;
    q[i] = flags[i] ? p[i] : neighbor_average(src, r, c);
  };
  for (int r = 0; r < dims.height; ++r) {
    if (r == 0 || r + 1 == dims.height) {
      for (int c = 0; c < w; ++c) edge_node(r, c);
    } else {
      edge_node(r, 0);
      const std::size_t row = static_cast<std::size_t>(r) * w;
      if (p == q) {
        for (int c = 1; c + 1 < w; ++c) {
          const std::size_t i = row + c;
          if (!flags[i]) q[i] = 0.25 * (p[i - w] + p[i + w] + p[i - 1] + p[i + 1]);
        }
      } else {
        interior_row(p + row, q + row, flags + row, w);
      }
      edge_node(r, w - 1);
    }
    if (r > 0) classifier.row(dst, r - 1, next);
  }
  classifier.row(dst, dims.height - 1, next);
}

}  // namespace

ActiveSetMask::ActiveSetMask(const ScalarField& psi, double active_tol,
                             bool include_boundary)
    : inactive_(inactive_mask(psi, active_tol, include_boundary)) {}

ProjectionResult project_convex(const ScalarField& phi,
                                const ProjectionOptions& options) {
  if (options.max_sweeps < 1)
    throw Error(ErrorKind::invalid_parameter, "max_sweeps must be >= 1");
  if (!(options.active_tol >= 0.0))
    throw Error(ErrorKind::invalid_parameter, "active_tol must be >= 0");

  const bool include_boundary = options.boundary == BoundaryHandling::replicate;
  ScalarField psi = phi;
  ScalarField next = phi;
  const Classifier classifier{options.active_tol, include_boundary};
  SetState set, updated;
  classifier.all(psi, set);

  int m = 1;
  bool converged = false;
  for (;; ++m) {
    if (options.order == SweepOrder::jacobi) {
      sweep(psi, next, set, classifier, updated);
      std::swap(psi, next);
    } else {
      sweep(psi, psi, set, classifier, updated);
    }
    const bool stable = updated.inactive == set.inactive;
    std::swap(set, updated);
    if (stable && set.harmonic) {
      converged = true;
      break;
    }
    if (m == options.max_sweeps) break;
  }
  ActiveSetMask mask(psi, options.active_tol, include_boundary);
  return {std::move(psi), std::move(mask), m, converged};
}

std::string format_trace_line(const OuterRecord& record) {
  std::ostringstream out;
  out << std::setprecision(9) << "outer=" << record.iteration
      << " sweeps=" << record.sweeps
      << " sweep_converged=" << (record.sweep_converged ? 1 : 0)
      << " rel_change=" << record.relative_change
      << " min_laplacian=" << record.min_interior_laplacian
      << " region_pixels=" << record.region_pixels;
  return out.str();
}

double min_interior_laplacian(const ScalarField& f, int margin) {
  double lowest = std::numeric_limits<double>::infinity();
  for (int r = margin; r < f.height() - margin; ++r)
    for (int c = margin; c < f.width() - margin; ++c)
      lowest = std::min(lowest, laplacian_at(f, r, c));
  return lowest;
}

ConvexPriorResult enforce_convex_prior(const ScalarField& phi,
                                       const ConvexPriorOptions& options) {
  if (!(options.eps > 0.0))
    throw Error(ErrorKind::invalid_parameter, "eps must be > 0");
  if (options.max_outer < 1)
    throw Error(ErrorKind::invalid_parameter, "max_outer must be >= 1");

  ProjectionDiagnostics diag;
  ScalarField current = phi;
  for (int n = 1; n <= options.max_outer; ++n) {
    ScalarField sdf = [&] {
      try {
        return reinitialize(current, InterfaceMode::subpixel, options.crossing);
      } catch (const Error& e) {
        if (n == 1 || e.kind() != ErrorKind::no_interface) throw;
        throw Error(ErrorKind::region_collapse,
                    "interface lost at outer iteration " + std::to_string(n));
      }
    }();
    const bool feasible = satisfies_constraint(sdf, options.projection);
    ProjectionResult projected = project_convex(sdf, options.projection);

    OuterRecord rec;
    rec.iteration = n;
    rec.sweeps = projected.sweeps;
    rec.sweep_converged = projected.converged;
    rec.relative_change = relative_l2_change(projected.field, current);
    rec.min_interior_laplacian = min_interior_laplacian(projected.field);
    rec.region_pixels = negative_region(projected.field).count();

    current = std::move(projected.field);
    diag.outer_iterations = n;
    diag.inner_iterations_per_outer.push_back(rec.sweeps);
    diag.final_min_laplacian = rec.min_interior_laplacian;
    diag.final_relative_change = rec.relative_change;
    diag.records.push_back(rec);
    if (options.observer) options.observer(n, current);

    if (rec.region_pixels < 4)
      throw Error(ErrorKind::region_collapse,
                  "fewer than 4 region pixels at outer iteration " + std::to_string(n));
    if (rec.region_pixels == current.size())
      throw Error(ErrorKind::region_collapse,
                  "region filled the grid at outer iteration " + std::to_string(n));
    if (rec.relative_change <= options.eps || feasible) {
      diag.converged = true;
      break;
    }
  }
  return {std::move(current), std::move(diag)};
}

}  // namespace cvxls
