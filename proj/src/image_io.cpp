#include "cvxls/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cvxls/error.hpp"

namespace cvxls {

namespace {

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

bool has_png_signature(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8] = {};
  if (!in.read(reinterpret_cast<char*>(sig), 8)) return false;
  return png_sig_cmp(sig, 0, 8) == 0;
}

Raster read_png(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error(ErrorKind::io, path + ": " + image.message);
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw Error(ErrorKind::unsupported_depth, path + ": 16-bit images are not supported");
  }
  Raster raster;
  raster.height = static_cast<int>(image.height);
  raster.width = static_cast<int>(image.width);
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  raster.channels = color ? 3 : 1;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  raster.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::io, path + ": " + msg);
  }
  return raster;
}

void write_png(const std::string& path, const Raster& raster) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = raster.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, raster.pixels.data(), 0, nullptr))
    throw Error(ErrorKind::io, path + ": " + image.message);
}

// Next header token of a netpbm file, skipping whitespace and comments.
bool pnm_token(std::istream& in, std::string& token) {
  token.clear();
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) return true;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  return !token.empty();
}

int pnm_int(std::istream& in, const std::string& path) {
  std::string token;
  if (!pnm_token(in, token)) throw Error(ErrorKind::io, path + ": truncated header");
  try {
    return std::stoi(token);
  } catch (const std::exception&) {
    throw Error(ErrorKind::io, path + ": malformed header");
  }
}

Raster read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::string magic;
  if (!pnm_token(in, magic)) throw Error(ErrorKind::io, path + ": empty file");
  const bool ascii = magic == "P2" || magic == "P3";
  const bool binary = magic == "P5" || magic == "P6";
  if (!ascii && !binary) throw Error(ErrorKind::io, path + ": unsupported format " + magic);

  Raster raster;
  raster.channels = (magic == "P3" || magic == "P6") ? 3 : 1;
  raster.width = pnm_int(in, path);
  raster.height = pnm_int(in, path);
  const int maxval = pnm_int(in, path);
  if (raster.width <= 0 || raster.height <= 0 || maxval <= 0)
    throw Error(ErrorKind::io, path + ": bad header values");
  if (maxval > 255)
    throw Error(ErrorKind::unsupported_depth, path + ": 16-bit images are not supported");

  const std::size_t count =
      static_cast<std::size_t>(raster.width) * raster.height * raster.channels;
  raster.pixels.resize(count);
  if (binary) {
    if (!in.read(reinterpret_cast<char*>(raster.pixels.data()),
                 static_cast<std::streamsize>(count)))
      throw Error(ErrorKind::io, path + ": truncated pixel data");
  } else {
    for (auto& px : raster.pixels) {
      const int v = pnm_int(in, path);
      if (v < 0 || v > maxval) throw Error(ErrorKind::io, path + ": sample out of range");
      px = static_cast<std::uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (auto& px : raster.pixels)
      px = static_cast<std::uint8_t>(std::lround(px * 255.0 / maxval));
  }
  return raster;
}

void write_pnm(const std::string& path, const Raster& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  out << (raster.channels == 3 ? "P6" : "P5") << '\n'
      << raster.width << ' ' << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.pixels.data()),
            static_cast<std::streamsize>(raster.pixels.size()));
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

}  // namespace

Raster read_raster(const std::string& path) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error(ErrorKind::io, "cannot open " + path);
  }
  if (has_png_signature(path)) return read_png(path);
  return read_pnm(path);
}

void write_raster(const std::string& path, const Raster& raster) {
  if (raster.channels != 1 && raster.channels != 3)
    throw Error(ErrorKind::invalid_input, "raster must have 1 or 3 channels");
  const std::string ext = lower_extension(path);
  if (ext == "pgm" || ext == "ppm" || ext == "pnm")
    write_pnm(path, raster);
  else
    write_png(path, raster);
}

ScalarField normalize(const ScalarField& values) {
  const double lo = values.min();
  const double hi = values.max();
  ScalarField out(values.dims(), 0.5);
  if (hi > lo) {
    auto src = values.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - lo) / (hi - lo);
  }
  return out;
}

LoadedImage to_intensity(const Raster& raster) {
  const Dims dims{raster.height, raster.width};
  const auto channel_field = [&](int ch) {
    ScalarField f(dims);
    for (int r = 0; r < raster.height; ++r)
      for (int c = 0; c < raster.width; ++c) f(r, c) = raster.at(r, c, ch);
    return f;
  };
  if (raster.channels == 1) return {normalize(channel_field(0)), 1, -1};

  int best = 0;
  double best_var = -1.0;
  for (int ch = 0; ch < raster.channels; ++ch) {
    const ScalarField f = channel_field(ch);
    double mean = 0.0;
    for (double v : f.values()) mean += v;
    mean /= static_cast<double>(f.size());
    double var = 0.0;
    for (double v : f.values()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(f.size());
    if (var > best_var) {
      best_var = var;
      best = ch;
    }
  }
  return {normalize(channel_field(best)), raster.channels, best};
}

LoadedImage load_image(const std::string& path) {
  return to_intensity(read_raster(path));
}

Raster to_gray_raster(const ScalarField& intensity) {
  Raster raster{intensity.height(), intensity.width(), 1, {}};
  raster.pixels.resize(intensity.size());
  auto src = intensity.values();
  for (std::size_t i = 0; i < src.size(); ++i)
    raster.pixels[i] =
        static_cast<std::uint8_t>(std::lround(std::clamp(src[i], 0.0, 1.0) * 255.0));
  return raster;
}

void save_gray(const std::string& path, const ScalarField& intensity) {
  write_raster(path, to_gray_raster(intensity));
}

RegionMask load_mask(const std::string& path) {
  const Raster raster = read_raster(path);
  RegionMask mask(Dims{raster.height, raster.width});
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      bool on = false;
      for (int ch = 0; ch < raster.channels; ++ch) on = on || raster.at(r, c, ch) > 127;
      mask.set(r, c, on);
    }
  }
  return mask;
}

void save_mask(const std::string& path, const RegionMask& mask) {
  Raster raster{mask.height(), mask.width(), 1, {}};
  raster.pixels.resize(mask.dims().size());
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c) raster.at(r, c, 0) = mask(r, c) ? 255 : 0;
  write_raster(path, raster);
}

}  // namespace cvxls
