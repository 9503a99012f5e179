// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvxls/convexity.hpp"
#include "cvxls/energy.hpp"
#include "cvxls/error.hpp"
#include "cvxls/projection.hpp"
#include "cvxls/sdf.hpp"
#include "cvxls/segmenter.hpp"
#include "cvxls/stencil.hpp"
#include "cvxls/synth.hpp"
#include "support.hpp"

using namespace cvxls;
using namespace cvxls::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::string dump(const ScalarField& f) {
  std::ostringstream out;
  write_field(out, f);
  return out.str();
}

// Dumped fields of the runs that determinism re-checks.
struct Dumps {
  std::string corpus, square, star;
};

// ---- 1: exact distance against all pairs --------------------------------

Outcome distance_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> side(8, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const Dims dims{side(rng), side(rng)};
    ZeroContour z;
    if (trial % 2 == 0) {
      z = random_crossings(dims, 1 + trial * 4, rng);
    } else {
      z = extract_zero_contour(bumpy_field(dims, rng));
      z.segments.clear();
    }
    const ScalarField d = distance_to_contour(z, dims);
    const ScalarField oracle = brute_point_distance(z.points, dims);
    for (std::size_t i = 0; i < d.size(); ++i)
      worst = std::max(worst, std::abs(d.values()[i] - oracle.values()[i]));
  }
  return {worst <= 1e-9, format("max |d - oracle| = %.3g over 25 contours", worst)};
}

// ---- 2: eikonal residual -------------------------------------------------

Outcome eikonal() {
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    ShapeSpec spec;
    spec.kind = ShapeKind::blob;
    spec.radius = 24.0 + 3.0 * k;
    const RegionMask mask = synth_mask(spec, {128, 128}, 100 + k);
    const ScalarField o = signed_distance(mask);
    const ScalarField g = gradient_magnitude(o);
    std::vector<double> residual;
    for (int r = 1; r + 1 < 128; ++r)
      for (int c = 1; c + 1 < 128; ++c) {
        if (std::abs(o(r, c)) <= 1.5) continue;
        const double sx = std::abs(o(r, c + 1) - 2 * o(r, c) + o(r, c - 1));
        const double sy = std::abs(o(r + 1, c) - 2 * o(r, c) + o(r - 1, c));
        if (sx > 0.5 || sy > 0.5) continue;  // medial axis kink
        residual.push_back(std::abs(g(r, c) - 1.0));
      }
    worst = std::max(worst, median(residual));
  }
  return {worst <= 0.05, format("worst median ||grad| - 1| = %.4f over 10 masks", worst)};
}

// ---- 3: projection contract ---------------------------------------------

Outcome projection_contract() {
  std::mt19937_64 rng(31);
  ProjectionOptions options;
  options.max_sweeps = 10000;
  int violations = 0, unconverged = 0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField phi = random_field({6, 6}, rng);
    const ProjectionResult out = project_convex(phi, options);
    unconverged += out.converged ? 0 : 1;
    for (int r = 1; r < 5; ++r)
      for (int c = 1; c < 5; ++c) {
        const double lap = lap_oracle(out.field, r, c);
        const bool ok = out.inactive.inactive(r, c) ? lap > options.active_tol
                                                    : std::abs(lap) <= options.active_tol;
        violations += ok ? 0 : 1;
      }
    const ScalarField exact = qp_projection(phi, true);
    worst_gap = std::max(worst_gap, l2_distance(out.field, exact) / l2_norm(exact));
  }
  const bool pass = violations == 0 && unconverged == 0 && worst_gap <= 0.05;
  return {pass, format("complementarity violations %d, unconverged %d, worst relative L2 gap "
                       "to QP oracle %.3f (limit 0.05)",
                       violations, unconverged, worst_gap)};
}

// ---- 4: corpus convexification -------------------------------------------

Outcome corpus(Dumps& dumps) {
  std::vector<ShapeSpec> specs(5);
  specs[0].kind = ShapeKind::star;
  specs[0].radius = 70;
  specs[0].inner_radius = 30;
  specs[1].kind = ShapeKind::pacman;
  specs[1].radius = 60;
  specs[2].kind = ShapeKind::l_shape;
  specs[2].size = 110;
  specs[3].kind = ShapeKind::crescent;
  specs[3].radius = 60;
  specs[4].kind = ShapeKind::blob;
  specs[4].radius = 55;
  ConvexPriorOptions options;
  options.projection.order = SweepOrder::gauss_seidel;
  std::string detail, fields;
  bool pass = true;
  for (const ShapeSpec& spec : specs) {
    const RegionMask input = synth_mask(spec, {200, 200}, 7);
    const ConvexPriorResult out = enforce_convex_prior(signed_distance(input), options);
    const RegionMask region = negative_region(out.field);
    const bool convex = is_convex_region(region, 1.0);
    const bool contains = is_subset(input, region);
    const bool near_hull = is_subset(region, convex_hull_mask(input, 2.0));
    pass = pass && convex && contains && near_hull;
    detail += format("%s[n=%d %s%s%s] ", to_string(spec.kind).c_str(),
                     out.diagnostics.outer_iterations, convex ? "C" : "c",
                     contains ? "S" : "s", near_hull ? "H" : "h");
    fields += dump(out.field);
  }
  dumps.corpus = fields;
  return {pass, detail + "(C convex, S contains input, H inside 2 px hull)"};
}

// ---- 5: iteration ordering -------------------------------------------------

Outcome ordering() {
  const auto iterations = [](double width) {
    ShapeSpec spec;
    spec.kind = ShapeKind::notched_polygon;
    spec.sides = 8;
    spec.radius = 60;
    spec.notch_depth = 30;
    spec.notch_width = width;
    const RegionMask input = synth_mask(spec, {200, 200}, 7);
    return enforce_convex_prior(signed_distance(input)).diagnostics.outer_iterations;
  };
  const int thin = iterations(6), wide = iterations(24);
  return {wide > thin, format("outer iterations: thin notch %d, wide notch %d", thin, wide)};
}

// ---- 6: two-phase recovery ---------------------------------------------------

double agreement_outside_band(const RegionMask& region, const RegionMask& truth) {
  double agree = 0.0, total = 0.0;
  for (int r = 0; r < truth.height(); ++r)
    for (int c = 0; c < truth.width(); ++c) {
      bool band = false;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          band |= truth.dims().contains(r + dr, c + dc) && truth(r + dr, c + dc) != truth(r, c);
      if (band) continue;
      total += 1.0;
      agree += region(r, c) == truth(r, c) ? 1.0 : 0.0;
    }
  return agree / total;
}

Outcome square(Dumps& dumps) {
  ShapeSpec spec;
  spec.kind = ShapeKind::square;
  spec.size = 60;
  const SynthImage scene = synth(spec, {128, 128}, 1);
  SegmentationConfig config = SegmentationConfig::defaults(Model::chan_vese);
  config.init = parse_init_spec("circle:63.5,63.5,25");
  const SegmentationResult out = segment(scene.image.intensity, config);
  dumps.square = dump(out.phi_final);
  const double agree = agreement_outside_band(out.region, scene.truth);
  const double e1 = std::abs(*out.c1 - 0.0), e2 = std::abs(*out.c2 - 1.0);
  return {agree >= 0.99 && e1 <= 0.02 && e2 <= 0.02,
          format("agreement outside the 1 px band %.4f, c1 %.4f, c2 %.4f, %d iterations", agree,
                 *out.c1, *out.c2, out.outer_iterations)};
}

// ---- 7: convex prior on a star ------------------------------------------------

Outcome star(Dumps& dumps) {
  ShapeSpec spec;
  spec.kind = ShapeKind::star;
  spec.points = 5;
  spec.radius = 118;
  spec.inner_radius = 85;
  const SynthImage scene = synth(spec, {256, 256}, 1);
  SegmentationConfig config = SegmentationConfig::defaults(Model::chan_vese);
  config.convex_prior_enabled = true;
  config.init = parse_init_spec("circle:127.5,127.5,121");
  const SegmentationResult out = segment(scene.image.intensity, config);
  dumps.star = dump(out.phi_final);
  const double cover = static_cast<double>(count_intersection(out.region, scene.truth)) /
                       static_cast<double>(scene.truth.count());
  return {out.convexity_certificate.convex && cover >= 0.99,
          format("certificate %s, star coverage %.4f, %d iterations",
                 out.convexity_certificate.convex ? "true" : "false", cover,
                 out.outer_iterations)};
}

// ---- 8: occlusion completion ------------------------------------------------

Outcome occlusion() {
  ShapeSpec spec;
  spec.kind = ShapeKind::occluded_octagon;
  spec.radius = 50;
  spec.notch_width = 8;
  const SynthImage scene = synth(spec, {128, 128}, 1);
  SegmentationConfig config = SegmentationConfig::defaults(Model::edge_only);
  config.convex_prior_enabled = true;
  config.init = parse_init_spec("circle:63.5,63.5,58");
  const SegmentationResult out = segment(scene.image.intensity, config);
  const double cover = static_cast<double>(count_intersection(out.region, scene.truth)) /
                       static_cast<double>(scene.truth.count());
  return {out.convexity_certificate.convex && cover >= 0.95,
          format("certificate %s, octagon coverage %.4f, %d iterations",
                 out.convexity_certificate.convex ? "true" : "false", cover,
                 out.outer_iterations)};
}

// ---- 9: gradient check ----------------------------------------------------------

Outcome gradient_check() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int nodes = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField phi = random_field({8, 8}, rng, -2, 2);
    const ScalarField image = random_field({8, 8}, rng, 0, 1);
    const ScalarField g = random_field({8, 8}, rng, 0.2, 1.0);
    const RegionStats stats{u(rng), u(rng), 0, 0};
    EnergyParams p;
    p.mu = 0.5 + 10.0 * u(rng);
    p.lambda1 = u(rng);
    p.lambda2 = u(rng);
    const ScalarField dir = descent_direction(phi, image, stats, g, p);
    const double h = 1e-5;
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) {
        if (smoothed_dirac(phi(r, c), p.heaviside_eps) <= 1e-3) continue;
        const double keep = phi(r, c);
        phi(r, c) = keep + h;
        const double up = total_energy(image, phi, stats, g, p);
        phi(r, c) = keep - h;
        const double down = total_energy(image, phi, stats, g, p);
        phi(r, c) = keep;
        const double fd = (up - down) / (2 * h);
        const double scale = std::max({std::abs(fd), std::abs(dir(r, c)), 1e-8});
        worst = std::max(worst, std::abs(dir(r, c) + fd) / scale);
        ++nodes;
      }
  }
  return {worst <= 1e-4, format("worst relative error %.3g over %d nodes", worst, nodes)};
}

// ---- 10: initialization sensitivity -------------------------------------------

Outcome initializations() {
  ShapeSpec spec;
  spec.kind = ShapeKind::twin_disks;
  spec.radius = 24;
  spec.separation = 66;
  const SynthImage scene = synth(spec, {128, 128}, 1);
  SegmentationConfig config = SegmentationConfig::defaults(Model::chan_vese);
  config.convex_prior_enabled = true;
  config.init = parse_init_spec("circle:30.5,63.5,20");
  const SegmentationResult left = segment(scene.image.intensity, config);
  config.init = parse_init_spec("circle:96.5,63.5,20");
  const SegmentationResult right = segment(scene.image.intensity, config);
  const double iou = static_cast<double>(count_intersection(left.region, right.region)) /
                     static_cast<double>(count_union(left.region, right.region));
  const bool pass = left.convexity_certificate.convex && right.convexity_certificate.convex &&
                    !(left.region == right.region) && iou < 0.5;
  return {pass, format("certificates %s/%s, region sizes %zu/%zu, IoU %.4f",
                       left.convexity_certificate.convex ? "true" : "false",
                       right.convexity_certificate.convex ? "true" : "false",
                       left.region.count(), right.region.count(), iou)};
}

// ---- 11: determinism ------------------------------------------------------------

Outcome determinism(const Dumps& first) {
  Dumps again;
  corpus(again);
  square(again);
  star(again);
  const bool c = again.corpus == first.corpus, s = again.square == first.square,
             t = again.star == first.star;
  return {c && s && t && !first.corpus.empty() && !first.square.empty() && !first.star.empty(),
          format("dumped fields identical: corpus %s, square %s, star %s", c ? "yes" : "no",
                 s ? "yes" : "no", t ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  Dumps dumps;
  const std::vector<Criterion> criteria = {
      {1, "distance transform matches all-pairs oracle", 5.0, distance_oracle},
      {2, "reinitialized fields are eikonal", 2.0, eikonal},
      {3, "projection complementarity and QP gap", 30.0, projection_contract},
      {4, "corpus becomes convex near its hull", 60.0, [&] { return corpus(dumps); }},
      {5, "wider notch needs more outer iterations", 0.0, ordering},
      {6, "two-phase square recovery", 30.0, [&] { return square(dumps); }},
      {7, "convex prior segments a star", 120.0, [&] { return star(dumps); }},
      {8, "occluded octagon is completed", 0.0, occlusion},
      {9, "descent direction matches finite differences", 0.0, gradient_check},
      {10, "initializations give different convex results", 0.0, initializations},
      {11, "reruns are bit-identical", 0.0, [&] { return determinism(dumps); }},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = format("%.2f s", seconds);
    if (c.limit_seconds > 0.0) {
      timing += format(" (limit %.0f s)", c.limit_seconds);
      if (seconds >= c.limit_seconds) outcome.pass = false;
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s criterion %d: %s: %s; %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
