#pragma once

#include <cstdint>
#include <string>

#include "cvxls/field.hpp"
#include "cvxls/image_io.hpp"

namespace cvxls {

enum class ShapeKind {
  disk,
  square,
  star,
  pacman,
  l_shape,
  crescent,
  notched_polygon,
  blob,
  occluded_octagon,
  twin_disks,
};

ShapeKind parse_shape_kind(const std::string& name);
std::string to_string(ShapeKind kind);

/// Synthetic test image description. Lengths are in pixels; a negative
/// center coordinate means "grid center". Only the fields relevant to the
/// kind are read:
///   disk              radius
///   square            size (side length)
///   star              points, radius (outer), inner_radius
///   pacman            radius, wedge_deg (mouth opens toward +col)
///   l_shape           size (outer side; the upper-right quarter is removed)
///   crescent          radius (the bite is a 0.8*radius disk shifted 0.5*radius)
///   notched_polygon   sides, radius, notch_width, notch_depth (cut into the +col side)
///   blob              radius (mean), shape drawn from the seed
///   occluded_octagon  radius, notch_width (bar width); the bar is painted in
///                     background intensity across the +col/+row corner and
///                     the ground truth is the whole octagon
///   twin_disks        radius, separation (center distance along col)
struct ShapeSpec {
  ShapeKind kind = ShapeKind::disk;
  double center_row = -1.0;
  double center_col = -1.0;
  double radius = 30.0;
  double inner_radius = 12.0;
  double size = 60.0;
  int points = 5;
  double wedge_deg = 90.0;
  int sides = 8;
  double notch_width = 8.0;
  double notch_depth = 20.0;
  double separation = 60.0;
  double foreground = 1.0;
  double background = 0.0;
  double noise_sigma = 0.0;
};

struct SynthImage {
  LoadedImage image;
  RegionMask truth;
};

/// Rasterizes the shape by pixel-center inclusion, adds seeded Gaussian
/// noise, and normalizes like load_image(). Throws invalid_input when the
/// shape comes closer than 4 px to the grid border or is empty.
SynthImage synth(const ShapeSpec& spec, Dims dims, std::uint64_t seed = 0);

/// Ground-truth mask only (no noise, no occluder).
RegionMask synth_mask(const ShapeSpec& spec, Dims dims, std::uint64_t seed = 0);

}  // namespace cvxls
