#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cvxls/field.hpp"

namespace cvxls {

/// Gray image normalized to [0, 1].
struct LoadedImage {
  ScalarField intensity;
  int source_channels = 1;
  /// Index of the channel used, or -1 when the source was grayscale.
  int chosen_channel = -1;
};

/// 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
struct Raster {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  std::uint8_t& at(int row, int col, int ch) {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
  std::uint8_t at(int row, int col, int ch) const {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + ch];
  }
};

/// Reads an 8-bit PNG, PGM (P2/P5) or PPM (P3/P6). Alpha is dropped and
/// palette images are expanded to RGB. Throws io for unreadable files and
/// unsupported_depth for 16-bit data.
Raster read_raster(const std::string& path);

/// Writes PNG or PGM/PPM depending on the extension (.png, .pgm, .ppm).
void write_raster(const std::string& path, const Raster& raster);

/// (v - min) / (max - min); a constant input maps to 0.5 everywhere.
ScalarField normalize(const ScalarField& values);

/// Picks the channel with the largest raw variance (lowest index on ties)
/// and normalizes it. Grayscale input passes through.
LoadedImage to_intensity(const Raster& raster);

LoadedImage load_image(const std::string& path);

/// Quantizes [0, 1] to 8-bit gray.
Raster to_gray_raster(const ScalarField& intensity);

void save_gray(const std::string& path, const ScalarField& intensity);

/// Reads a mask image: any channel above 127 marks the object.
RegionMask load_mask(const std::string& path);
void save_mask(const std::string& path, const RegionMask& mask);

}  // namespace cvxls
