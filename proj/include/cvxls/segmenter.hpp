#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cvxls/energy.hpp"
#include "cvxls/field.hpp"
#include "cvxls/projection.hpp"

namespace cvxls {

enum class Model { chan_vese, edge_only };

Model parse_model(const std::string& name);  // "cv" or "edge"
std::string to_string(Model model);

/// Initial region. Coordinates are (x = column, y = row) in pixels.
struct InitSpec {
  enum class Kind { circle, rectangle, mask, field } kind = Kind::circle;
  double cx = 0.0, cy = 0.0, radius = 0.0;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  std::string mask_path;
  /// Used instead of mask_path when non-empty.
  std::optional<RegionMask> mask;
  /// Level set to resume from (Kind::field); used instead of field_path when
  /// non-empty. Taken as is, without the margin rule.
  std::optional<ScalarField> field;
  std::string field_path;
};

/// Parses "circle:cx,cy,r", "rect:x0,y0,x1,y1", "mask:<path>" or
/// "field:<path>" (text format of write_field).
InitSpec parse_init_spec(const std::string& text);

/// Exact SDF of the initial region, negative inside. Circle and rectangle
/// are analytic; masks go through signed_distance(). Throws invalid_input
/// unless the region keeps a 2 px margin to the image border. A field is
/// returned unchanged but must match dims and carry both signs.
ScalarField init_levelset(const InitSpec& spec, Dims dims);

struct SegmentationConfig {
  Model model = Model::chan_vese;
  EnergyParams energy;
  double dt = 0.5;
  int outer_max = 500;
  int inner_evolution_steps = 1;
  ConvexPriorOptions projection;
  bool convex_prior_enabled = false;
  InitSpec init;
  double stop_tol = 1e-4;
  int stop_patience = 3;
  int convexity_slack = 1;

  /// Defaults for a model: lambda1 = lambda2 = 1 and dt = 0.5 for
  /// chan_vese, lambda1 = lambda2 = 0 and dt = 1 for edge_only.
  static SegmentationConfig defaults(Model model);

  /// Throws invalid_parameter on out-of-range values or an edge_only model
  /// with nonzero data weights.
  void validate() const;
};

/// Applies one key=value setting. Unknown keys and malformed values throw
/// invalid_parameter. Setting `model` resets lambdas and dt to that model's
/// defaults, so it should come first.
void apply_setting(SegmentationConfig& config, const std::string& key,
                   const std::string& value);

/// Reads key=value lines; blank lines and lines starting with '#' are
/// skipped.
void read_config(std::istream& in, SegmentationConfig& config);
void load_config(const std::string& path, SegmentationConfig& config);

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  std::optional<double> c1, c2;
  double min_laplacian = 0.0;
};

/// CSV with header iter,energy,c1,c2,min_laplacian; absent means are left
/// empty.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

struct ConvexityCertificate {
  bool convex = false;
  int slack = 1;
};

struct SegmentationResult {
  ScalarField phi_final;
  RegionMask region;
  /// Means of the final sharp partition; the trace keeps the smoothed ones.
  std::optional<double> c1, c2;
  std::vector<double> energy_trace;
  std::vector<TraceRow> trace;
  int outer_iterations = 0;
  bool converged = false;  ///< stop rule met before outer_max
  ConvexityCertificate convexity_certificate;
  std::vector<ProjectionDiagnostics> projection_diagnostics;
};

/// Alternates one explicit descent step, P3 (or plain reinitialization with
/// the prior off) and the region-mean update. Stops after stop_patience
/// consecutive iterations with relative phi change <= stop_tol, or at
/// outer_max.
///
/// Throws region_collapse (message carries the iteration) when a region
/// vanishes, and convexity_violation when the prior is on but the final
/// region fails is_convex_region.
SegmentationResult segment(const ScalarField& image, const SegmentationConfig& config);

}  // namespace cvxls
