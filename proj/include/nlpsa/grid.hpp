#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlpsa {

/// Row-major image of doubles.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, double fill = 0.0);
  Grid(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool same_shape(const Grid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  double& operator()(std::size_t x, std::size_t y) { return values_[y * width_ + x]; }
  double operator()(std::size_t x, std::size_t y) const { return values_[y * width_ + x]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t y) const {
    return std::span<const double>(values_).subspan(y * width_, width_);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

/// Phase in radians per pixel: ground truth, or a wrapped estimate.
class PhaseMap : public Grid {
 public:
  using Grid::Grid;
  PhaseMap() = default;
  explicit PhaseMap(Grid grid) : Grid(std::move(grid)) {}
};

}  // namespace nlpsa
