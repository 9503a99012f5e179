#include "cvxls/render.hpp"

#include <algorithm>
#include <cmath>

#include "cvxls/error.hpp"
#include "cvxls/stencil.hpp"

namespace cvxls {

namespace {

constexpr double kLaplacianRange = 0.2;

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

RegionMask outline(const RegionMask& mask) {
  const Dims dims = mask.dims();
  RegionMask out(dims);
  constexpr int kDr[4] = {1, -1, 0, 0};
  constexpr int kDc[4] = {0, 0, 1, -1};
  for (int r = 0; r < dims.height; ++r)
    for (int c = 0; c < dims.width; ++c) {
      if (mask(r, c)) {
        if (r == 0 || c == 0 || r + 1 == dims.height || c + 1 == dims.width)
          out.set(r, c, true);
        continue;
      }
      for (int k = 0; k < 4; ++k) {
        const int rr = r + kDr[k], cc = c + kDc[k];
        if (dims.contains(rr, cc) && mask(rr, cc)) {
          out.set(r, c, true);
          break;
        }
      }
    }
  return out;
}

Raster overlay_raster(const ScalarField& image,
                      const std::vector<std::pair<RegionMask, Rgb>>& contours) {
  Raster out{image.height(), image.width(), 3, {}};
  out.pixels.resize(static_cast<std::size_t>(image.height()) * image.width() * 3);
  for (int r = 0; r < image.height(); ++r)
    for (int c = 0; c < image.width(); ++c) {
      const std::uint8_t v = to_byte(image(r, c));
      for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = v;
    }
  for (const auto& [mask, color] : contours) {
    if (mask.dims() != image.dims())
      throw Error(ErrorKind::invalid_input, "contour mask dimensions differ from the image");
    const RegionMask line = outline(mask);
    for (int r = 0; r < image.height(); ++r)
      for (int c = 0; c < image.width(); ++c)
        if (line(r, c))
          for (int ch = 0; ch < 3; ++ch) out.at(r, c, ch) = color[ch];
  }
  return out;
}

void render_overlay(const ScalarField& image,
                    const std::vector<std::pair<RegionMask, Rgb>>& contours,
                    const std::string& path) {
  write_raster(path, overlay_raster(image, contours));
}

Raster laplacian_raster(const ScalarField& phi) {
  const ScalarField lap = laplacian(phi);
  Raster out{phi.height(), phi.width(), 3, {}};
  out.pixels.resize(static_cast<std::size_t>(phi.height()) * phi.width() * 3);
  for (int r = 0; r < phi.height(); ++r)
    for (int c = 0; c < phi.width(); ++c) {
      const double t = std::clamp(lap(r, c), -kLaplacianRange, kLaplacianRange) / kLaplacianRange;
      const std::uint8_t fade = to_byte(1.0 - std::abs(t));
      const bool negative = t < 0.0;
      out.at(r, c, 0) = negative ? 255 : fade;
      out.at(r, c, 1) = fade;
      out.at(r, c, 2) = negative ? fade : 255;
    }
  return out;
}

void render_laplacian_map(const ScalarField& phi, const std::string& path) {
  write_raster(path, laplacian_raster(phi));
}

}  // namespace cvxls
