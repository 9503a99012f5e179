#include "cvxls/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cvxls/error.hpp"

namespace cvxls {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::invalid_parameter: return "invalid parameter";
    case ErrorKind::no_interface: return "no interface";
    case ErrorKind::region_collapse: return "region collapse";
    case ErrorKind::convexity_violation: return "convexity violation";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::unsupported_depth: return "unsupported depth";
  }
  return "unknown";
}

namespace {

void check_dims(Dims dims) {
  if (dims.height < 3 || dims.width < 3) {
    std::ostringstream msg;
    msg << "grid must be at least 3x3, got " << dims.height << "x" << dims.width;
    throw Error(ErrorKind::invalid_input, msg.str());
  }
}

void check_same(Dims a, Dims b) {
  if (a != b) throw Error(ErrorKind::invalid_input, "dimension mismatch");
}

}  // namespace

ScalarField::ScalarField(Dims dims, double fill) : dims_(dims) {
  check_dims(dims);
  if (!std::isfinite(fill))
    throw Error(ErrorKind::invalid_input, "non-finite fill value");
  values_.assign(dims.size(), fill);
}

ScalarField::ScalarField(Dims dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
  check_dims(dims);
  if (values_.size() != dims.size())
    throw Error(ErrorKind::invalid_input, "value count does not match dimensions");
  if (!all_finite())
    throw Error(ErrorKind::invalid_input, "non-finite value in field");
}

double ScalarField::clamped(int row, int col) const {
  row = std::clamp(row, 0, dims_.height - 1);
  col = std::clamp(col, 0, dims_.width - 1);
  return values_[index(row, col)];
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

RegionMask::RegionMask(Dims dims, bool fill) : dims_(dims) {
  if (dims.height < 1 || dims.width < 1)
    throw Error(ErrorKind::invalid_input, "mask must be non-empty");
  cells_.assign(dims.size(), fill ? 1 : 0);
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

RegionMask negative_region(const ScalarField& f) {
  RegionMask mask(f.dims());
  for (int r = 0; r < f.height(); ++r)
    for (int c = 0; c < f.width(); ++c) mask.set(r, c, f(r, c) < 0.0);
  return mask;
}

namespace {

template <typename Pred>
std::size_t count_pairs(const RegionMask& a, const RegionMask& b, Pred pred) {
  check_same(a.dims(), b.dims());
  std::size_t n = 0;
  for (int r = 0; r < a.height(); ++r)
    for (int c = 0; c < a.width(); ++c)
      if (pred(a(r, c), b(r, c))) ++n;
  return n;
}

}  // namespace

std::size_t count_difference(const RegionMask& a, const RegionMask& b) {
  return count_pairs(a, b, [](bool x, bool y) { return x != y; });
}

std::size_t count_intersection(const RegionMask& a, const RegionMask& b) {
  return count_pairs(a, b, [](bool x, bool y) { return x && y; });
}

std::size_t count_union(const RegionMask& a, const RegionMask& b) {
  return count_pairs(a, b, [](bool x, bool y) { return x || y; });
}

bool is_subset(const RegionMask& inner, const RegionMask& outer) {
  return count_pairs(inner, outer, [](bool x, bool y) { return x && !y; }) == 0;
}

double relative_l2_change(const ScalarField& a, const ScalarField& b) {
  check_same(a.dims(), b.dims());
  double diff = 0.0;
  double norm = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    diff += d * d;
    norm += av[i] * av[i];
  }
  diff = std::sqrt(diff);
  norm = std::sqrt(norm);
  return norm > 0.0 ? diff / norm : diff;
}

void write_field(std::ostream& out, const ScalarField& f) {
  out << f.height() << ' ' << f.width() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      if (c > 0) out << ' ';
      out << f(r, c);
    }
    out << '\n';
  }
}

ScalarField read_field(std::istream& in) {
  int rows = 0;
  int cols = 0;
  if (!(in >> rows >> cols))
    throw Error(ErrorKind::io, "missing field header");
  if (rows < 3 || cols < 3)
    throw Error(ErrorKind::invalid_input, "field header dimensions below 3");
  const Dims dims{rows, cols};
  std::vector<double> values(dims.size());
  for (double& v : values) {
    if (!(in >> v)) throw Error(ErrorKind::io, "truncated field data");
  }
  return ScalarField(dims, std::move(values));
}

void save_field(const std::string& path, const ScalarField& f) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_field(out, f);
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

ScalarField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return read_field(in);
}

}  // namespace cvxls
