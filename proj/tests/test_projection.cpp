#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "cvxls/convexity.hpp"
#include "cvxls/error.hpp"
#include "cvxls/projection.hpp"
#include "cvxls/sdf.hpp"
#include "cvxls/stencil.hpp"
#include "cvxls/synth.hpp"
#include "support.hpp"

using namespace cvxls;
using namespace cvxls::testing;

namespace {

double min_lap(const ScalarField& f, int margin) {
  double lowest = 1e300;
  for (int r = margin; r < f.height() - margin; ++r)
    for (int c = margin; c < f.width() - margin; ++c)
      lowest = std::min(lowest, lap_oracle(f, r, c));
  return lowest;
}

}  // namespace

TEST_CASE("active set splits nodes by the sign of the laplacian") {
  ScalarField f({5, 5}, 0.0);
  f(2, 2) = -1.0;  // laplacian +4 here, -1 at its 4 neighbors
  const ActiveSetMask inner(f, 1e-12);
  CHECK(inner.inactive(2, 2));
  CHECK_FALSE(inner.inactive(1, 2));
  CHECK(inner.inactive(0, 0));  // ring is never active by default
  const ActiveSetMask all(f, 1e-12, true);
  CHECK_FALSE(all.inactive(0, 0));
  CHECK(all.active_count() + all.inactive_count() == 25);
}

TEST_CASE("strictly subharmonic input is returned unchanged after one sweep") {
  ScalarField f({10, 10});
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) f(r, c) = 0.1 * c * c;
  const ProjectionResult out = project_convex(f);
  CHECK(out.field == f);
  CHECK(out.sweeps == 1);
  CHECK(out.converged);
}

TEST_CASE("concave ridge is flattened to a harmonic interior") {
  ScalarField f({9, 9});
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) f(r, c) = -(c - 4.0) * (c - 4.0);
  ProjectionOptions options;
  options.max_sweeps = 500;
  const ProjectionResult out = project_convex(f, options);
  CHECK(out.converged);
  CHECK(min_lap(out.field, 1) >= -options.active_tol);
}

TEST_CASE("property: complementarity holds nodewise at convergence") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims{6 + trial % 4, 6 + trial % 3};
    const ScalarField phi = random_field(dims, rng);
    for (const SweepOrder order : {SweepOrder::jacobi, SweepOrder::gauss_seidel}) {
      ProjectionOptions options;
      options.max_sweeps = 100000;
      options.order = order;
      const ProjectionResult out = project_convex(phi, options);
      REQUIRE(out.converged);
      for (int r = 1; r + 1 < dims.height; ++r)
        for (int c = 1; c + 1 < dims.width; ++c) {
          const double lap = lap_oracle(out.field, r, c);
          if (out.inactive.inactive(r, c))
            CHECK(lap > options.active_tol);
          else
            CHECK(std::abs(lap) <= options.active_tol);
        }
      // The ring is held fixed.
      for (int c = 0; c < dims.width; ++c) {
        CHECK(out.field(0, c) == phi(0, c));
        CHECK(out.field(dims.height - 1, c) == phi(dims.height - 1, c));
      }
    }
  }
}

TEST_CASE("property: projection always terminates within the sweep cap") {
  std::mt19937_64 rng(88);
  for (int cap : {1, 2, 5, 17}) {
    const ScalarField phi = random_field({12, 12}, rng);
    ProjectionOptions options;
    options.max_sweeps = cap;
    const ProjectionResult out = project_convex(phi, options);
    CHECK(out.sweeps >= 1);
    CHECK(out.sweeps <= cap);
    CHECK(out.field.all_finite());
  }
}

TEST_CASE("replicate boundary constrains the ring as well") {
  ScalarField f({8, 8});
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) f(r, c) = -(r - 3.5) * (r - 3.5) - (c - 3.5) * (c - 3.5);
  ProjectionOptions options;
  options.boundary = BoundaryHandling::replicate;
  options.max_sweeps = 200000;
  options.active_tol = 1e-9;
  const ProjectionResult out = project_convex(f, options);
  CHECK(out.converged);
  CHECK(min_lap(out.field, 0) >= -options.active_tol);
}

TEST_CASE("QP oracle is feasible and no farther from phi than the active-set output") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField phi = random_field({6, 6}, rng);
    const ScalarField exact = qp_projection(phi, true);
    CHECK(min_lap(exact, 1) >= -1e-9);
    ProjectionOptions options;
    options.max_sweeps = 10000;
    const ProjectionResult approx = project_convex(phi, options);
    REQUIRE(min_lap(approx.field, 1) >= -options.active_tol);
    CHECK(l2_distance(exact, phi) <= l2_distance(approx.field, phi) + 1e-9);
  }
}

TEST_CASE("convexifying a disk leaves its region unchanged") {
  for (const auto& [cr, cc, radius] : {std::tuple{40.0, 39.0, 22.0}, std::tuple{39.3, 40.2, 22.4},
                                       std::tuple{41.7, 38.1, 30.0}}) {
    const ScalarField phi = disk_sdf({80, 80}, cr, cc, radius);
    const ConvexPriorResult out = enforce_convex_prior(phi);
    CHECK(negative_region(out.field) == negative_region(phi));
    CHECK(out.diagnostics.outer_iterations <= 3);
  }
}

TEST_CASE("convexifying a rasterized disk only fills its staircase") {
  const RegionMask disk = disk_mask({80, 80}, 40, 39, 22);
  const ConvexPriorResult out = enforce_convex_prior(signed_distance(disk));
  const RegionMask region = negative_region(out.field);
  CHECK(is_subset(disk, region));
  CHECK(is_subset(region, convex_hull_mask(disk, 1.0)));
  CHECK(out.diagnostics.converged);
}

TEST_CASE("convexifying a pac-man grows it into a convex region near its hull") {
  ShapeSpec spec;
  spec.kind = ShapeKind::pacman;
  spec.radius = 36;
  const RegionMask input = synth_mask(spec, {100, 100});
  int observed = 0;
  ConvexPriorOptions options;
  options.observer = [&](int n, const ScalarField& f) {
    CHECK(n == ++observed);
    CHECK(f.all_finite());
  };
  const ConvexPriorResult out = enforce_convex_prior(signed_distance(input), options);
  const RegionMask region = negative_region(out.field);
  CHECK(is_convex_region(region, 1.0));
  CHECK(is_subset(input, region));
  CHECK(is_subset(region, convex_hull_mask(input, 2.0)));
  CHECK(min_interior_laplacian(out.field) >= -0.05);
  CHECK(observed == out.diagnostics.outer_iterations);
  CHECK(out.diagnostics.records.size() == static_cast<std::size_t>(observed));
  CHECK(out.diagnostics.inner_iterations_per_outer.size() == static_cast<std::size_t>(observed));
  CHECK(out.diagnostics.final_relative_change >= 0.0);
}

TEST_CASE("single-sign fields stay single-sign") {
  CHECK_THROWS_AS(enforce_convex_prior(ScalarField({12, 12}, 3.0)), Error);
  CHECK_THROWS_AS(enforce_convex_prior(ScalarField({12, 12}, -3.0)), Error);
}

TEST_CASE("a near-empty region raises region collapse") {
  ScalarField phi({20, 20}, 1.0);
  phi(10, 10) = -1.0;
  phi(10, 11) = -1.0;
  try {
    enforce_convex_prior(phi);
    FAIL("expected region collapse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::region_collapse);
  }
}

TEST_CASE("invalid options are rejected") {
  ConvexPriorOptions options;
  options.eps = 0.0;
  const ScalarField phi = signed_distance(disk_mask({20, 20}, 10, 10, 5));
  CHECK_THROWS_AS(enforce_convex_prior(phi, options), Error);
  ProjectionOptions p;
  p.max_sweeps = 0;
  CHECK_THROWS_AS(project_convex(phi, p), Error);
  p.max_sweeps = 3;
  p.active_tol = -1.0;
  CHECK_THROWS_AS(project_convex(phi, p), Error);
}

TEST_CASE("trace line is a single key=value record") {
  OuterRecord rec;
  rec.iteration = 7;
  rec.sweeps = 30;
  rec.relative_change = 0.25;
  rec.region_pixels = 123;
  const std::string line = format_trace_line(rec);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("outer=7") != std::string::npos);
  CHECK(line.find("sweeps=30") != std::string::npos);
  CHECK(line.find("rel_change=0.25") != std::string::npos);
  CHECK(line.find("region_pixels=123") != std::string::npos);
}
