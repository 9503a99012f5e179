// Command-line front end: segment, convexify, synth, verify-convex.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvxls/convexity.hpp"
#include "cvxls/error.hpp"
#include "cvxls/image_io.hpp"
#include "cvxls/projection.hpp"
#include "cvxls/render.hpp"
#include "cvxls/sdf.hpp"
#include "cvxls/segmenter.hpp"
#include "cvxls/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cvxls;

namespace {

enum ExitCode : int {
  kOk = 0,
  kNotConvex = 1,
  kRegionCollapse = 2,
  kConvexityViolation = 3,
  kIo = 4,
  kBadArguments = 5,
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::region_collapse:
      return kRegionCollapse;
    case ErrorKind::convexity_violation:
      return kConvexityViolation;
    case ErrorKind::io:
    case ErrorKind::unsupported_depth:
      return kIo;
    case ErrorKind::invalid_input:
    case ErrorKind::invalid_parameter:
    case ErrorKind::no_interface:
      break;
  }
  return kBadArguments;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorKind::io, "cannot create output directory " + dir);
  return fs::path(dir);
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
}

Dims parse_dims(const std::string& text) {
  int h = 0, w = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%dx%d%c", &h, &w, &extra) != 2 &&
      std::sscanf(text.c_str(), "%d%c%d%c", &h, &x, &w, &extra) != 3)
    throw Error(ErrorKind::invalid_parameter, "dims: expected HxW, got " + text);
  if (h <= 0 || w <= 0)
    throw Error(ErrorKind::invalid_parameter, "dims must be positive");
  return {h, w};
}

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  std::string image;
  std::string out;
  std::string config;
  std::optional<std::string> model, convex_prior, mu, lambda1, lambda2, dt, init;
  std::optional<std::string> outer_max, eps, n_max, m_max, sweep_order;
  bool trace = false;
  std::string dump_field;
  std::uint64_t seed = 0;
};

int run_segment(const SegmentArgs& a) {
  // --model goes first because it resets lambdas and dt; the other flags
  // override the file.
  SegmentationConfig config;
  if (a.model) apply_setting(config, "model", *a.model);
  if (!a.config.empty()) load_config(a.config, config);
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"convex_prior", &a.convex_prior}, {"mu", &a.mu},
      {"lambda1", &a.lambda1},           {"lambda2", &a.lambda2},
      {"dt", &a.dt},                     {"init", &a.init},
      {"outer_max", &a.outer_max},       {"eps", &a.eps},
      {"n_max", &a.n_max},               {"m_max", &a.m_max},
      {"sweep_order", &a.sweep_order},
  };
  for (const auto& [key, value] : flags)
    if (*value) apply_setting(config, key, **value);
  if (config.init.kind == InitSpec::Kind::circle && config.init.radius <= 0.0)
    throw Error(ErrorKind::invalid_parameter, "no initialization given (--init)");

  const LoadedImage image = load_image(a.image);
  const fs::path out = prepare_out_dir(a.out);
  const ScalarField phi0 = init_levelset(config.init, image.intensity.dims());

  const SegmentationResult result = segment(image.intensity, config);

  save_mask((out / "region.png").string(), result.region);
  render_overlay(image.intensity,
                 {{negative_region(phi0), kGreen}, {result.region, kRed}},
                 (out / "overlay.png").string());
  render_laplacian_map(result.phi_final, (out / "laplacian.png").string());
  if (a.trace) {
    std::ofstream csv(out / "trace.csv");
    write_trace_csv(csv, result.trace);
    if (!csv) throw Error(ErrorKind::io, "cannot write trace.csv");
  }
  if (!a.dump_field.empty()) save_field(a.dump_field, result.phi_final);

  json summary{
      {"model", to_string(config.model)},
      {"convex_prior", config.convex_prior_enabled},
      {"chosen_channel", image.chosen_channel},
      {"outer_iterations", result.outer_iterations},
      {"converged", result.converged},
      {"region_pixels", result.region.count()},
      {"convex", result.convexity_certificate.convex},
      {"slack", result.convexity_certificate.slack},
      {"seed", a.seed},
  };
  summary["c1"] = result.c1 ? json(*result.c1) : json(nullptr);
  summary["c2"] = result.c2 ? json(*result.c2) : json(nullptr);
  write_json(out / "summary.json", summary);
  std::cout << "outer_iterations=" << result.outer_iterations
            << " converged=" << result.converged
            << " region_pixels=" << result.region.count()
            << " convex=" << result.convexity_certificate.convex << '\n';
  return kOk;
}

// -------------------------------------------------------------- convexify

struct ConvexifyArgs {
  std::string mask;
  std::string out;
  double eps = 1e-4;
  int n_max = 300;
  int m_max = 30;
  std::string sweep_order = "jacobi";
  std::string dump_field;
};

std::string snapshot_tag(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", n);
  return buf;
}

int run_convexify(const ConvexifyArgs& a) {
  ConvexPriorOptions options;
  options.eps = a.eps;
  options.max_outer = a.n_max;
  options.projection.max_sweeps = a.m_max;
  SegmentationConfig probe;
  apply_setting(probe, "sweep_order", a.sweep_order);
  options.projection.order = probe.projection.projection.order;

  const RegionMask input = load_mask(a.mask);
  const fs::path out = prepare_out_dir(a.out);
  ScalarField shade(input.dims(), 1.0);
  for (int r = 0; r < input.height(); ++r)
    for (int c = 0; c < input.width(); ++c)
      if (input(r, c)) shade(r, c) = 0.6;

  const std::set<int> logged{1, 4, 25, 150};
  const auto snapshot = [&](const std::string& tag, const ScalarField& phi) {
    render_overlay(shade, {{input, kGreen}, {negative_region(phi), kRed}},
                   (out / ("overlay_" + tag + ".png")).string());
    render_laplacian_map(phi, (out / ("laplacian_" + tag + ".png")).string());
  };
  options.observer = [&](int n, const ScalarField& phi) {
    if (logged.count(n)) snapshot(snapshot_tag(n), phi);
  };

  const ConvexPriorResult result = enforce_convex_prior(signed_distance(input), options);
  snapshot("final", result.field);
  const RegionMask region = negative_region(result.field);
  save_mask((out / "region.png").string(), region);
  {
    std::ofstream trace(out / "trace.txt");
    for (const OuterRecord& rec : result.diagnostics.records)
      trace << format_trace_line(rec) << '\n';
    if (!trace) throw Error(ErrorKind::io, "cannot write trace.txt");
  }
  if (!a.dump_field.empty()) save_field(a.dump_field, result.field);

  const bool convex = is_convex_region(region, 1);
  write_json(out / "summary.json",
             {{"outer_iterations", result.diagnostics.outer_iterations},
              {"converged", result.diagnostics.converged},
              {"final_relative_change", result.diagnostics.final_relative_change},
              {"final_min_laplacian", result.diagnostics.final_min_laplacian},
              {"input_pixels", input.count()},
              {"region_pixels", region.count()},
              {"convex", convex}});
  std::cout << "outer_iterations=" << result.diagnostics.outer_iterations
            << " converged=" << result.diagnostics.converged
            << " region_pixels=" << region.count() << " convex=" << convex << '\n';
  if (!convex) {
    std::cerr << "error: region is not convex at slack 1 px (defect "
              << convexity_defect(region, 1) << " px)\n";
    return kConvexityViolation;
  }
  return kOk;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  ShapeSpec spec;
  std::string kind = "star";
  std::string dims = "256x256";
  std::uint64_t seed = 0;
  std::string out;
};

int run_synth(SynthArgs a) {
  a.spec.kind = parse_shape_kind(a.kind);
  const SynthImage s = synth(a.spec, parse_dims(a.dims), a.seed);
  const fs::path out = prepare_out_dir(a.out);
  save_gray((out / "image.png").string(), s.image.intensity);
  save_mask((out / "truth.png").string(), s.truth);
  std::cout << "kind=" << to_string(a.spec.kind) << " truth_pixels=" << s.truth.count()
            << '\n';
  return kOk;
}

// ---------------------------------------------------------- verify-convex

int run_verify(const std::string& path, int slack) {
  const RegionMask mask = load_mask(path);
  const bool convex = is_convex_region(mask, slack);
  std::cout << "convex=" << convex << " defect=" << convexity_defect(mask, slack)
            << " pixels=" << mask.count() << '\n';
  return convex ? kOk : kNotConvex;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-set segmentation with a convexity prior"};
  app.require_subcommand(1);

  SegmentArgs seg;
  CLI::App* seg_cmd = app.add_subcommand("segment", "Segment an image");
  seg_cmd->add_option("image", seg.image, "PNG/PGM/PPM input")->required();
  seg_cmd->add_option("--model", seg.model, "cv | edge");
  seg_cmd->add_option("--convex-prior", seg.convex_prior, "on | off");
  seg_cmd->add_option("--mu", seg.mu, "length weight")->check(CLI::Number);
  seg_cmd->add_option("--lambda1", seg.lambda1, "background data weight")->check(CLI::Number);
  seg_cmd->add_option("--lambda2", seg.lambda2, "object data weight")->check(CLI::Number);
  seg_cmd->add_option("--dt", seg.dt, "descent step")->check(CLI::Number);
  seg_cmd->add_option("--init", seg.init, "circle:cx,cy,r | rect:x0,y0,x1,y1 | mask:<path> | field:<path>");
  seg_cmd->add_option("--outer-max", seg.outer_max, "outer iteration cap");
  seg_cmd->add_option("--eps", seg.eps, "convexification tolerance");
  seg_cmd->add_option("--n-max", seg.n_max, "convexification iteration cap");
  seg_cmd->add_option("--m-max", seg.m_max, "projection sweep cap");
  seg_cmd->add_option("--sweep-order", seg.sweep_order, "jacobi | gauss_seidel");
  seg_cmd->add_option("--out", seg.out, "output directory")->required();
  seg_cmd->add_flag("--trace", seg.trace, "write trace.csv");
  seg_cmd->add_option("--dump-field", seg.dump_field, "write the final level set as text");
  seg_cmd->add_option("--config", seg.config, "key=value settings file");
  seg_cmd->add_option("--seed", seg.seed, "recorded in summary.json; segmentation is deterministic");

  ConvexifyArgs cvx;
  CLI::App* cvx_cmd = app.add_subcommand("convexify", "Convexify a mask standalone");
  cvx_cmd->add_option("maskfile", cvx.mask, "mask image")->required();
  cvx_cmd->add_option("--eps", cvx.eps, "relative change tolerance")->capture_default_str();
  cvx_cmd->add_option("--n-max", cvx.n_max, "outer iteration cap")->capture_default_str();
  cvx_cmd->add_option("--m-max", cvx.m_max, "sweeps per projection")->capture_default_str();
  cvx_cmd->add_option("--sweep-order", cvx.sweep_order, "jacobi | gauss_seidel")
      ->capture_default_str();
  cvx_cmd->add_option("--dump-field", cvx.dump_field, "write the final level set as text");
  cvx_cmd->add_option("--out", cvx.out, "output directory")->required();

  SynthArgs syn;
  CLI::App* syn_cmd = app.add_subcommand("synth", "Write a synthetic image and its truth mask");
  syn_cmd->add_option("--kind", syn.kind,
                      "disk | square | star | pacman | l_shape | crescent | notched_polygon | "
                      "blob | occluded_octagon | twin_disks")
      ->capture_default_str();
  syn_cmd->add_option("--dims", syn.dims, "HxW")->capture_default_str();
  syn_cmd->add_option("--seed", syn.seed, "noise and blob seed")->capture_default_str();
  syn_cmd->add_option("--radius", syn.spec.radius, "radius (outer for star)");
  syn_cmd->add_option("--inner-radius", syn.spec.inner_radius, "star inner radius");
  syn_cmd->add_option("--points", syn.spec.points, "star points");
  syn_cmd->add_option("--size", syn.spec.size, "square / L side");
  syn_cmd->add_option("--wedge", syn.spec.wedge_deg, "pacman wedge degrees");
  syn_cmd->add_option("--sides", syn.spec.sides, "polygon sides");
  syn_cmd->add_option("--notch-width", syn.spec.notch_width, "notch or bar width");
  syn_cmd->add_option("--notch-depth", syn.spec.notch_depth, "notch depth");
  syn_cmd->add_option("--separation", syn.spec.separation, "twin disk center distance");
  syn_cmd->add_option("--center-row", syn.spec.center_row, "center row (default middle)");
  syn_cmd->add_option("--center-col", syn.spec.center_col, "center column (default middle)");
  syn_cmd->add_option("--fg", syn.spec.foreground, "foreground intensity");
  syn_cmd->add_option("--bg", syn.spec.background, "background intensity");
  syn_cmd->add_option("--noise", syn.spec.noise_sigma, "Gaussian noise sigma");
  syn_cmd->add_option("--out", syn.out, "output directory")->required();

  std::string verify_path;
  int slack = 1;
  CLI::App* ver_cmd = app.add_subcommand("verify-convex", "Exit 0 if a mask is convex");
  ver_cmd->add_option("maskfile", verify_path, "mask image")->required();
  ver_cmd->add_option("--slack", slack, "allowed hull excess in px")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (*seg_cmd) return run_segment(seg);
    if (*cvx_cmd) return run_convexify(cvx);
    if (*syn_cmd) return run_synth(syn);
    return run_verify(verify_path, slack);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}
