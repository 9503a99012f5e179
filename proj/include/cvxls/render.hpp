#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cvxls/field.hpp"
#include "cvxls/image_io.hpp"

namespace cvxls {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};
inline constexpr Rgb kCyan{0, 255, 255};
inline constexpr Rgb kYellow{255, 255, 0};

/// 1 px outline of a region: pixels outside it with a 4-neighbor inside,
/// plus region pixels on the image frame.
RegionMask outline(const RegionMask& mask);

/// Gray image replicated to RGB with each outline drawn in its color, later
/// entries on top. Throws invalid_input on mismatched dimensions.
Raster overlay_raster(const ScalarField& image,
                      const std::vector<std::pair<RegionMask, Rgb>>& contours);
void render_overlay(const ScalarField& image,
                    const std::vector<std::pair<RegionMask, Rgb>>& contours,
                    const std::string& path);

/// Laplacian clamped to [-0.2, 0.2]: negative toward red, positive toward
/// blue, zero white.
Raster laplacian_raster(const ScalarField& phi);
void render_laplacian_map(const ScalarField& phi, const std::string& path);

}  // namespace cvxls
