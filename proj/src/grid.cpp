#include "nlpsa/grid.hpp"

#include <fmt/format.h>

#include "nlpsa/error.hpp"

namespace nlpsa {

Grid::Grid(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {
  if (width == 0 || height == 0) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("grid must be non-empty, got {}x{}", width, height));
  }
}

Grid::Grid(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width == 0 || height == 0) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("grid must be non-empty, got {}x{}", width, height));
  }
  if (values_.size() != width * height) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("{} values for a {}x{} grid", values_.size(), width, height));
  }
}

}  // namespace nlpsa
