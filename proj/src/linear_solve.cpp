#include "nlpsa/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nlpsa {

std::optional<ComplexLu> ComplexLu::factor(std::span<const std::complex<double>> matrix,
                                           std::size_t n) {
  std::vector<std::complex<double>> a(matrix.begin(), matrix.end());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  double scale = 0.0;
  for (const auto& v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  const double pivot_floor =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_mag = std::abs(a[col * n + col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double mag = std::abs(a[row * n + col]);
      if (mag > best_mag) {
        best = row;
        best_mag = mag;
      }
    }
    if (best_mag <= pivot_floor) return std::nullopt;
    if (best != col) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(col * n),
                       a.begin() + static_cast<std::ptrdiff_t>((col + 1) * n),
                       a.begin() + static_cast<std::ptrdiff_t>(best * n));
      std::swap(perm[col], perm[best]);
    }
    const auto pivot = a[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const auto factor = a[row * n + col] / pivot;
      a[row * n + col] = factor;
      for (std::size_t k = col + 1; k < n; ++k) a[row * n + k] -= factor * a[col * n + k];
    }
  }
  return ComplexLu(std::move(a), std::move(perm), n);
}

std::vector<std::complex<double>> ComplexLu::solve(
    std::span<const std::complex<double>> rhs) const {
  std::vector<std::complex<double>> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[perm_[i]];
  // L has a unit diagonal.
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= lu_[i * n_ + k] * x[k];
  }
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t k = i + 1; k < n_; ++k) x[i] -= lu_[i * n_ + k] * x[k];
    x[i] /= lu_[i * n_ + i];
  }
  return x;
}

double ComplexLu::inverse_norm1() const {
  double norm = 0.0;
  std::vector<std::complex<double>> unit(n_);
  for (std::size_t col = 0; col < n_; ++col) {
    std::fill(unit.begin(), unit.end(), std::complex<double>{});
    unit[col] = 1.0;
    const auto column = solve(unit);
    double sum = 0.0;
    for (const auto& v : column) sum += std::abs(v);
    norm = std::max(norm, sum);
  }
  return norm;
}

double matrix_norm1(std::span<const std::complex<double>> matrix, std::size_t n) {
  double norm = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    double sum = 0.0;
    for (std::size_t row = 0; row < n; ++row) sum += std::abs(matrix[row * n + col]);
    norm = std::max(norm, sum);
  }
  return norm;
}

}  // namespace nlpsa
