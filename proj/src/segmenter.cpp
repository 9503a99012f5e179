#include "cvxls/segmenter.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cvxls/convexity.hpp"
#include "cvxls/error.hpp"
#include "cvxls/image_io.hpp"
#include "cvxls/sdf.hpp"

namespace cvxls {

namespace {

constexpr int kInitMargin = 2;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v))
    throw Error(ErrorKind::invalid_parameter, key + ": not a number: '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw Error(ErrorKind::invalid_parameter, key + ": not an integer: '" + value + "'");
  return v;
}

bool parse_switch(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw Error(ErrorKind::invalid_parameter, key + ": expected on/off: '" + value + "'");
}

std::vector<double> parse_list(const std::string& what, const std::string& text,
                               std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(what, trim(item)));
  if (out.size() != count)
    throw Error(ErrorKind::invalid_parameter,
                what + ": expected " + std::to_string(count) + " comma-separated values");
  return out;
}

void check_margin(bool ok, const char* what) {
  if (!ok)
    throw Error(ErrorKind::invalid_input,
                std::string(what) + " must keep a 2 px margin to the image border");
}

// Analytic SDF of the axis-aligned box [x0, x1] x [y0, y1].
double box_distance(double x, double y, const InitSpec& s) {
  const double dx = std::max({s.x0 - x, 0.0, x - s.x1});
  const double dy = std::max({s.y0 - y, 0.0, y - s.y1});
  if (dx > 0.0 || dy > 0.0) return std::hypot(dx, dy);
  return -std::min({x - s.x0, s.x1 - x, y - s.y0, s.y1 - y});
}

// Re-raises interface loss from any sub-step as region_collapse tagged with
// the outer iteration.
template <typename F>
auto at_iteration(int l, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::region_collapse && e.kind() != ErrorKind::no_interface)
      throw;
    throw Error(ErrorKind::region_collapse,
                "outer iteration " + std::to_string(l) + ": " + e.what());
  }
}

}  // namespace

Model parse_model(const std::string& name) {
  if (name == "cv" || name == "chan_vese") return Model::chan_vese;
  if (name == "edge" || name == "edge_only") return Model::edge_only;
  throw Error(ErrorKind::invalid_parameter, "unknown model: " + name);
}

std::string to_string(Model model) {
  return model == Model::chan_vese ? "cv" : "edge";
}

InitSpec parse_init_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::invalid_parameter, "init: expected kind:args, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  InitSpec s;
  if (kind == "circle") {
    const auto v = parse_list("init circle", args, 3);
    s.kind = InitSpec::Kind::circle;
    s.cx = v[0];
    s.cy = v[1];
    s.radius = v[2];
  } else if (kind == "rect") {
    const auto v = parse_list("init rect", args, 4);
    s.kind = InitSpec::Kind::rectangle;
    s.x0 = v[0];
    s.y0 = v[1];
    s.x1 = v[2];
    s.y1 = v[3];
  } else if (kind == "mask") {
    if (args.empty()) throw Error(ErrorKind::invalid_parameter, "init mask: empty path");
    s.kind = InitSpec::Kind::mask;
    s.mask_path = args;
  } else if (kind == "field") {
    if (args.empty()) throw Error(ErrorKind::invalid_parameter, "init field: empty path");
    s.kind = InitSpec::Kind::field;
    s.field_path = args;
  } else {
    throw Error(ErrorKind::invalid_parameter, "init: unknown kind '" + kind + "'");
  }
  return s;
}

ScalarField init_levelset(const InitSpec& spec, Dims dims) {
  const double xmax = dims.width - 1 - kInitMargin;
  const double ymax = dims.height - 1 - kInitMargin;
  switch (spec.kind) {
    case InitSpec::Kind::circle: {
      if (!(spec.radius > 0.0))
        throw Error(ErrorKind::invalid_input, "circle radius must be > 0");
      check_margin(spec.cx - spec.radius >= kInitMargin && spec.cx + spec.radius <= xmax &&
                       spec.cy - spec.radius >= kInitMargin && spec.cy + spec.radius <= ymax,
                   "circle");
      ScalarField phi(dims);
      for (int r = 0; r < dims.height; ++r)
        for (int c = 0; c < dims.width; ++c)
          phi(r, c) = std::hypot(c - spec.cx, r - spec.cy) - spec.radius;
      return phi;
    }
    case InitSpec::Kind::rectangle: {
      if (!(spec.x1 > spec.x0 && spec.y1 > spec.y0))
        throw Error(ErrorKind::invalid_input, "rectangle needs x1 > x0 and y1 > y0");
      check_margin(spec.x0 >= kInitMargin && spec.x1 <= xmax && spec.y0 >= kInitMargin &&
                       spec.y1 <= ymax,
                   "rectangle");
      ScalarField phi(dims);
      for (int r = 0; r < dims.height; ++r)
        for (int c = 0; c < dims.width; ++c) phi(r, c) = box_distance(c, r, spec);
      return phi;
    }
    case InitSpec::Kind::mask: {
      const RegionMask mask = spec.mask ? *spec.mask : load_mask(spec.mask_path);
      if (mask.dims() != dims)
        throw Error(ErrorKind::invalid_input, "init mask dimensions differ from the image");
      if (mask.empty()) throw Error(ErrorKind::invalid_input, "init mask is empty");
      for (int r = 0; r < dims.height; ++r)
        for (int c = 0; c < dims.width; ++c)
          if (mask(r, c))
            check_margin(r >= kInitMargin && c >= kInitMargin && r <= ymax && c <= xmax,
                         "mask");
      return signed_distance(mask);
    }
    case InitSpec::Kind::field: {
      ScalarField phi = spec.field ? *spec.field : [&] {
        std::ifstream in(spec.field_path);
        if (!in) throw Error(ErrorKind::io, "cannot open field: " + spec.field_path);
        return read_field(in);
      }();
      if (phi.dims() != dims)
        throw Error(ErrorKind::invalid_input, "init field dimensions differ from the image");
      const std::size_t inside = negative_region(phi).count();
      if (inside == 0 || inside == phi.size())
        throw Error(ErrorKind::invalid_input, "init field has no interface");
      return phi;
    }
  }
  throw Error(ErrorKind::invalid_input, "unknown init kind");
}

SegmentationConfig SegmentationConfig::defaults(Model model) {
  SegmentationConfig c;
  c.model = model;
  if (model == Model::edge_only) {
    c.energy.lambda1 = 0.0;
    c.energy.lambda2 = 0.0;
    c.dt = 1.0;
  }
  return c;
}

void SegmentationConfig::validate() const {
  energy.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorKind::invalid_parameter, "dt must be > 0");
  if (outer_max < 1) throw Error(ErrorKind::invalid_parameter, "outer_max must be >= 1");
  if (inner_evolution_steps < 1)
    throw Error(ErrorKind::invalid_parameter, "inner_evolution_steps must be >= 1");
  if (!(stop_tol >= 0.0)) throw Error(ErrorKind::invalid_parameter, "stop_tol must be >= 0");
  if (stop_patience < 1)
    throw Error(ErrorKind::invalid_parameter, "stop_patience must be >= 1");
  if (convexity_slack < 0)
    throw Error(ErrorKind::invalid_parameter, "convexity_slack must be >= 0");
  if (!(projection.eps > 0.0))
    throw Error(ErrorKind::invalid_parameter, "projection eps must be > 0");
  if (projection.max_outer < 1)
    throw Error(ErrorKind::invalid_parameter, "n_max must be >= 1");
  if (projection.projection.max_sweeps < 1)
    throw Error(ErrorKind::invalid_parameter, "m_max must be >= 1");
  if (!(projection.projection.active_tol >= 0.0))
    throw Error(ErrorKind::invalid_parameter, "active_tol must be >= 0");
  if (model == Model::edge_only && (energy.lambda1 != 0.0 || energy.lambda2 != 0.0))
    throw Error(ErrorKind::invalid_parameter, "edge model requires lambda1 = lambda2 = 0");
}

void apply_setting(SegmentationConfig& c, const std::string& key, const std::string& value) {
  if (key == "model") {
    const Model m = parse_model(value);
    const SegmentationConfig d = SegmentationConfig::defaults(m);
    c.model = m;
    c.energy.lambda1 = d.energy.lambda1;
    c.energy.lambda2 = d.energy.lambda2;
    c.dt = d.dt;
  } else if (key == "mu") {
    c.energy.mu = parse_double(key, value);
  } else if (key == "lambda1") {
    c.energy.lambda1 = parse_double(key, value);
  } else if (key == "lambda2") {
    c.energy.lambda2 = parse_double(key, value);
  } else if (key == "nu") {
    c.energy.nu = parse_double(key, value);
  } else if (key == "heaviside_eps") {
    c.energy.heaviside_eps = parse_double(key, value);
  } else if (key == "grad_floor") {
    c.energy.grad_floor = parse_double(key, value);
  } else if (key == "dt") {
    c.dt = parse_double(key, value);
  } else if (key == "outer_max") {
    c.outer_max = parse_int(key, value);
  } else if (key == "inner_evolution_steps") {
    c.inner_evolution_steps = parse_int(key, value);
  } else if (key == "convex_prior") {
    c.convex_prior_enabled = parse_switch(key, value);
  } else if (key == "eps") {
    c.projection.eps = parse_double(key, value);
  } else if (key == "n_max") {
    c.projection.max_outer = parse_int(key, value);
  } else if (key == "m_max") {
    c.projection.projection.max_sweeps = parse_int(key, value);
  } else if (key == "active_tol") {
    c.projection.projection.active_tol = parse_double(key, value);
  } else if (key == "sweep_order") {
    if (value == "jacobi")
      c.projection.projection.order = SweepOrder::jacobi;
    else if (value == "gauss_seidel")
      c.projection.projection.order = SweepOrder::gauss_seidel;
    else
      throw Error(ErrorKind::invalid_parameter, "sweep_order: expected jacobi or gauss_seidel");
  } else if (key == "boundary") {
    if (value == "fixed")
      c.projection.projection.boundary = BoundaryHandling::fixed;
    else if (value == "replicate")
      c.projection.projection.boundary = BoundaryHandling::replicate;
    else
      throw Error(ErrorKind::invalid_parameter, "boundary: expected fixed or replicate");
  } else if (key == "crossing") {
    if (value == "linear")
      c.projection.crossing = CrossingRule::linear;
    else if (value == "eno_quadratic")
      c.projection.crossing = CrossingRule::eno_quadratic;
    else
      throw Error(ErrorKind::invalid_parameter, "crossing: expected linear or eno_quadratic");
  } else if (key == "init") {
    c.init = parse_init_spec(value);
  } else if (key == "stop_tol") {
    c.stop_tol = parse_double(key, value);
  } else if (key == "stop_patience") {
    c.stop_patience = parse_int(key, value);
  } else if (key == "convexity_slack") {
    c.convexity_slack = parse_int(key, value);
  } else {
    throw Error(ErrorKind::invalid_parameter, "unknown config key: " + key);
  }
}

void read_config(std::istream& in, SegmentationConfig& config) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::invalid_parameter,
                  "config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

void load_config(const std::string& path, SegmentationConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config: " + path);
  read_config(in, config);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,energy,c1,c2,min_laplacian\n";
  std::ostringstream line;
  line.precision(17);
  for (const TraceRow& row : trace) {
    line.str({});
    line << row.iter << ',' << row.energy << ',';
    if (row.c1) line << *row.c1;
    line << ',';
    if (row.c2) line << *row.c2;
    line << ',' << row.min_laplacian << '\n';
    out << line.str();
  }
}

SegmentationResult segment(const ScalarField& image, const SegmentationConfig& config) {
  config.validate();
  const bool region_model = config.model == Model::chan_vese;
  const EnergyParams& params = config.energy;
  const ScalarField g = region_model ? ScalarField(image.dims(), 1.0) : edge_indicator(image);

  ScalarField phi = init_levelset(config.init, image.dims());
  RegionStats stats;
  if (region_model)
    stats = at_iteration(0, [&] { return region_means(image, phi, params.heaviside_eps); });

  SegmentationResult result{phi, RegionMask(image.dims()), {}, {}, {}, {}, 0, false, {}, {}};
  int streak = 0;
  for (int l = 1; l <= config.outer_max; ++l) {
    ScalarField next = phi;
    for (int k = 0; k < config.inner_evolution_steps; ++k)
      next = evolution_step(next, image, stats, g, params, config.dt);
    next = at_iteration(l, [&] {
      if (!config.convex_prior_enabled)
        return reinitialize(next, InterfaceMode::subpixel, config.projection.crossing);
      ConvexPriorResult p = enforce_convex_prior(next, config.projection);
      result.projection_diagnostics.push_back(std::move(p.diagnostics));
      return std::move(p.field);
    });
    if (region_model)
      stats = at_iteration(l, [&] { return region_means(image, next, params.heaviside_eps); });

    const double change = relative_l2_change(next, phi);
    phi = std::move(next);

    TraceRow row;
    row.iter = l;
    row.energy = total_energy(image, phi, stats, g, params);
    if (region_model) {
      row.c1 = stats.c1;
      row.c2 = stats.c2;
    }
    row.min_laplacian = min_interior_laplacian(phi);
    result.trace.push_back(row);
    result.energy_trace.push_back(row.energy);
    result.outer_iterations = l;

    streak = change <= config.stop_tol ? streak + 1 : 0;
    if (streak >= config.stop_patience) {
      result.converged = true;
      break;
    }
  }

  result.region = negative_region(phi);
  if (result.region.empty())
    throw Error(ErrorKind::region_collapse,
                "outer iteration " + std::to_string(result.outer_iterations) +
                    ": object region is empty");
  result.phi_final = std::move(phi);
  if (region_model) {
    const RegionStats sharp = phase_means(image, result.phi_final);
    result.c1 = sharp.c1;
    result.c2 = sharp.c2;
  }
  result.convexity_certificate = {is_convex_region(result.region, config.convexity_slack),
                                   config.convexity_slack};
  if (config.convex_prior_enabled && !result.convexity_certificate.convex)
    throw Error(ErrorKind::convexity_violation,
                "final region is not convex at slack " + std::to_string(config.convexity_slack) +
                    " px (defect " +
                    std::to_string(convexity_defect(result.region, config.convexity_slack)) +
                    " px, " + std::to_string(result.outer_iterations) + " outer iterations)");
  return result;
}

}  // namespace cvxls
