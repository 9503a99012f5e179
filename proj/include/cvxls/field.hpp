#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvxls {

struct GridIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

struct Dims {
  int height = 0;
  int width = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  bool contains(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Real-valued samples on a unit-spaced 2D grid, stored row-major.
/// Both dimensions are at least 3 so every stencil has an interior.
class ScalarField {
 public:
  ScalarField(Dims dims, double fill = 0.0);
  ScalarField(Dims dims, std::vector<double> values);

  Dims dims() const { return dims_; }
  int height() const { return dims_.height; }
  int width() const { return dims_.width; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int row, int col) { return values_[index(row, col)]; }
  double operator()(int row, int col) const { return values_[index(row, col)]; }

  /// Value with replicated (Neumann) ghost cells outside the grid.
  double clamped(int row, int col) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;
  double min() const;
  double max() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dims_.width) +
           static_cast<std::size_t>(col);
  }

  Dims dims_;
  std::vector<double> values_;
};

/// Binary region on the grid. `inside` marks the object.
class RegionMask {
 public:
  explicit RegionMask(Dims dims, bool fill = false);

  Dims dims() const { return dims_; }
  int height() const { return dims_.height; }
  int width() const { return dims_.width; }

  bool operator()(int row, int col) const {
    return cells_[index(row, col)] != 0;
  }
  void set(int row, int col, bool inside) {
    cells_[index(row, col)] = inside ? 1 : 0;
  }

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  friend bool operator==(const RegionMask&, const RegionMask&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dims_.width) +
           static_cast<std::size_t>(col);
  }

  Dims dims_;
  std::vector<std::uint8_t> cells_;
};

/// {x : f(x) < 0}, the object under the negative-inside convention.
RegionMask negative_region(const ScalarField& f);

std::size_t count_difference(const RegionMask& a, const RegionMask& b);
std::size_t count_intersection(const RegionMask& a, const RegionMask& b);
std::size_t count_union(const RegionMask& a, const RegionMask& b);
/// true iff every inside pixel of `inner` is inside `outer`.
bool is_subset(const RegionMask& inner, const RegionMask& outer);

/// Relative L2 change ||a - b|| / ||a||; returns ||a - b|| when a is zero.
double relative_l2_change(const ScalarField& a, const ScalarField& b);

// Plain-text matrix format: "rows cols" on the first line, then row-major
// values printed with 17 significant digits.
void write_field(std::ostream& out, const ScalarField& f);
ScalarField read_field(std::istream& in);
void save_field(const std::string& path, const ScalarField& f);
ScalarField load_field(const std::string& path);

}  // namespace cvxls
