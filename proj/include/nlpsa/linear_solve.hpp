#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nlpsa {

/// LU factorization with partial (row) pivoting of a dense square complex
/// matrix stored row-major.
class ComplexLu {
 public:
  /// Returns std::nullopt when a pivot vanishes relative to the matrix scale.
  static std::optional<ComplexLu> factor(std::span<const std::complex<double>> matrix,
                                         std::size_t n);

  std::size_t size() const noexcept { return n_; }

  std::vector<std::complex<double>> solve(std::span<const std::complex<double>> rhs) const;

  /// ||A^-1||_1, formed column by column from the factors.
  double inverse_norm1() const;

 private:
  ComplexLu(std::vector<std::complex<double>> lu, std::vector<std::size_t> perm, std::size_t n)
      : lu_(std::move(lu)), perm_(std::move(perm)), n_(n) {}

  std::vector<std::complex<double>> lu_;
  std::vector<std::size_t> perm_;
  std::size_t n_;
};

/// Maximum absolute column sum.
double matrix_norm1(std::span<const std::complex<double>> matrix, std::size_t n);

}  // namespace nlpsa
