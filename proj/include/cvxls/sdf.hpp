#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cvxls/field.hpp"

namespace cvxls {

/// Real-valued grid position; integer values are node centers.
struct Point2 {
  double row = 0.0;
  double col = 0.0;
};

/// How a crossing is placed on a sign-changing edge.
enum class CrossingRule {
  /// Root of the linear interpolant of the two endpoint values.
  linear,
  /// Root of the quadratic through the endpoint values whose curvature is the
  /// smaller second difference along the edge when both agree in sign,
  /// otherwise linear. Removes most of the inward bias that linear roots put
  /// on convex interfaces of exact SDFs.
  eno_quadratic,
};

/// Zero level set of a field, located along the grid edges whose endpoints
/// have opposite signs (negative vs non-negative).
struct ZeroContour {
  /// Nodes with at least one 4-neighbor on the other side of the interface.
  std::vector<GridIndex> boundary_pixels;
  /// One crossing per sign-changing edge; zero-valued nodes touching the
  /// negative side contribute themselves, once.
  std::vector<Point2> points;
  /// Marching-squares pieces joining crossings that share a grid cell.
  std::vector<std::array<std::size_t, 2>> segments;
};

/// Throws no_interface unless phi has a negative and a non-negative node.
ZeroContour extract_zero_contour(const ScalarField& phi,
                                 CrossingRule rule = CrossingRule::linear);

struct DistanceOptions {
  /// Nodes within this many pixels of a segment get the exact distance to
  /// the piecewise-linear contour instead of the nearest-crossing distance.
  double segment_band = 2.0;
};

/// Unsigned distance from every node to the contour.
///
/// The base value is the exact Euclidean distance to the nearest crossing
/// point, computed by a row pass and a column pass of parabola lower
/// envelopes (crossings on horizontal edges sit on integer rows, those on
/// vertical edges on integer columns). When the contour carries segments the
/// value is then lowered to the distance to the polyline: exactly inside the
/// segment band, and via the segments incident to the nearest crossings of
/// the node and its 8 neighbors elsewhere. Points that sit on neither an
/// integer row nor an integer column are handled by direct search.
ScalarField distance_to_contour(const ZeroContour& contour, Dims dims,
                                const DistanceOptions& options = {});

enum class InterfaceMode {
  subpixel,      ///< distances to interpolated crossings and segments
  pixel_center,  ///< distances between node centers only (bwdist-style)
};

/// Signed distance function of {phi < 0}: negative inside, non-negative
/// outside, magnitude equal to the distance to the zero contour. Signs are
/// copied from phi, never recomputed, so the sub-zero region is unchanged.
ScalarField reinitialize(const ScalarField& phi,
                         InterfaceMode mode = InterfaceMode::subpixel,
                         CrossingRule crossing = CrossingRule::linear);

/// SDF of a mask: reinitializes the field that is -1 inside and +1 outside,
/// so the interface runs through the midpoints between inside and outside
/// pixel centers.
ScalarField signed_distance(const RegionMask& mask);

}  // namespace cvxls
