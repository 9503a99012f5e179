#pragma once

#include <vector>

#include "cvxls/field.hpp"

namespace cvxls {

/// Convex hull of the inside pixel centers, counter-clockwise in (col, row)
/// coordinates, without collinear points. Throws invalid_input on an empty
/// mask.
std::vector<GridIndex> convex_hull(const RegionMask& mask);

/// Pixels whose centers lie inside the hull of `mask` or within `margin`
/// pixels of it (Euclidean offset of the hull polygon).
RegionMask convex_hull_mask(const RegionMask& mask, double margin = 0.0);

/// Discrete convexity check: every pixel whose center lies inside the hull of
/// the inside-pixel centers at distance greater than `slack` from the hull
/// boundary must itself be inside. Throws invalid_input on an empty mask.
bool is_convex_region(const RegionMask& mask, double slack = 1.0);

/// Number of hull-interior pixels deeper than `slack` that are missing from
/// the mask; zero exactly when is_convex_region() holds.
std::size_t convexity_defect(const RegionMask& mask, double slack = 1.0);

}  // namespace cvxls
