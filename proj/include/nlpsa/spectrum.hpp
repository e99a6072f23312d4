#pragma once

// Frequency transfer function analysis: evaluation, sampling, SNR gain and
// harmonic rejection of a designed coefficient set.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nlpsa/design.hpp"
#include "nlpsa/parallel.hpp"

namespace nlpsa {

/// Magnitudes at or below this count as spectral zeros.
inline constexpr double kSpectralZeroTolerance = 1e-8;

struct SpectrumSamples {
  std::vector<double> omegas;
  std::vector<Complex> values;
  std::vector<double> magnitudes;

  std::size_t size() const noexcept { return omegas.size(); }
};

enum class RejectionClass { FullyRejected, PartiallyRejected, Passed };

std::string_view to_string(RejectionClass c) noexcept;

struct HarmonicRejection {
  int order = 0;
  double h_pos = 0.0;  // |H(k)|
  double h_neg = 0.0;  // |H(-k)|
  RejectionClass classification = RejectionClass::Passed;
};

struct RejectionReport {
  double background = 0.0;  // |H(0)|
  std::vector<HarmonicRejection> harmonics;  // orders 1..k_max

  const HarmonicRejection& at(int order) const;
};

/// H(w) = sum_n c_n exp(-i theta_n w).
Complex evaluate_ftf(std::span<const Complex> coefficients, std::span<const double> steps,
                     double omega);
Complex evaluate_ftf(const CoefficientSet& coeffs, double omega);

/// Inclusive uniform grid of `count` frequencies on [omega_min, omega_max].
SpectrumSamples sample_spectrum(const CoefficientSet& coeffs, double omega_min, double omega_max,
                                std::size_t count, Parallelism par = {});

/// Frequencies of sampled local minima of |H| not exceeding `threshold`.
/// End points count as minima when they do not exceed their one neighbour.
std::vector<double> find_spectral_zeros(const SpectrumSamples& samples, double threshold);

/// |H(pass_omega)|^2 / sum_n |c_n|^2. Throws ZeroCoefficients if every c_n is 0.
double snr_gain(std::span<const Complex> coefficients, std::span<const double> steps,
                double pass_omega);
double snr_gain(const CoefficientSet& coeffs, double pass_omega);

/// Classifies harmonics 1..k_max by whether H vanishes at +k, -k, or both.
RejectionReport harmonic_rejection_report(const CoefficientSet& coeffs, int k_max);

/// Uniform-step least-squares PSA, c_k = exp(2 pi i k / n) / n, so H(1) = 1.
CoefficientSet linear_lspsa(std::size_t n);

}  // namespace nlpsa
