#include "nlpsa/spectrum.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nlpsa/error.hpp"
#include "nlpsa/linear_solve.hpp"

namespace nlpsa {

std::string_view to_string(RejectionClass c) noexcept {
  switch (c) {
    case RejectionClass::FullyRejected: return "fully-rejected";
    case RejectionClass::PartiallyRejected: return "partially-rejected";
    case RejectionClass::Passed: return "passed";
  }
  return "unknown";
}

const HarmonicRejection& RejectionReport::at(int order) const {
  for (const auto& h : harmonics) {
    if (h.order == order) return h;
  }
  throw Error(ErrorKind::InvalidArgument, fmt::format("harmonic {} not in report", order));
}

Complex evaluate_ftf(std::span<const Complex> coefficients, std::span<const double> steps,
                     double omega) {
  Complex h{};
  for (std::size_t n = 0; n < coefficients.size(); ++n) {
    h += coefficients[n] * std::polar(1.0, -steps[n] * omega);
  }
  return h;
}

Complex evaluate_ftf(const CoefficientSet& coeffs, double omega) {
  return evaluate_ftf(coeffs.values, coeffs.steps.values(), omega);
}

SpectrumSamples sample_spectrum(const CoefficientSet& coeffs, double omega_min, double omega_max,
                                std::size_t count, Parallelism par) {
  if (!(omega_min < omega_max) || !std::isfinite(omega_min) || !std::isfinite(omega_max)) {
    throw Error(ErrorKind::InvalidRange,
                fmt::format("need omega_min < omega_max, got [{}, {}]", omega_min, omega_max));
  }
  if (count < 2) {
    throw Error(ErrorKind::InvalidRange, fmt::format("need at least 2 samples, got {}", count));
  }
  SpectrumSamples out;
  out.omegas.resize(count);
  out.values.resize(count);
  out.magnitudes.resize(count);
  const double span = omega_max - omega_min;
  const double last = static_cast<double>(count - 1);
  parallel_for(count, par, [&](std::size_t k) {
    const double w =
        k + 1 == count ? omega_max : omega_min + span * static_cast<double>(k) / last;
    out.omegas[k] = w;
    out.values[k] = evaluate_ftf(coeffs, w);
    out.magnitudes[k] = std::abs(out.values[k]);
  });
  return out;
}

std::vector<double> find_spectral_zeros(const SpectrumSamples& samples, double threshold) {
  std::vector<double> zeros;
  const auto& mag = samples.magnitudes;
  const std::size_t n = mag.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(mag[k] <= threshold)) continue;
    const bool left_ok = k == 0 || mag[k] <= mag[k - 1];
    const bool right_ok = k + 1 == n || mag[k] <= mag[k + 1];
    if (left_ok && right_ok) zeros.push_back(samples.omegas[k]);
  }
  return zeros;
}

double snr_gain(std::span<const Complex> coefficients, std::span<const double> steps,
                double pass_omega) {
  double energy = 0.0;
  for (const auto& c : coefficients) energy += std::norm(c);
  if (!(energy > 0.0)) throw Error(ErrorKind::ZeroCoefficients, "all coefficients are zero");
  return std::norm(evaluate_ftf(coefficients, steps, pass_omega)) / energy;
}

double snr_gain(const CoefficientSet& coeffs, double pass_omega) {
  return snr_gain(coeffs.values, coeffs.steps.values(), pass_omega);
}

RejectionReport harmonic_rejection_report(const CoefficientSet& coeffs, int k_max) {
  if (k_max < 1) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("k_max must be >= 1, got {}", k_max));
  }
  RejectionReport report;
  report.background = std::abs(evaluate_ftf(coeffs, 0.0));
  for (int k = 1; k <= k_max; ++k) {
    HarmonicRejection h;
    h.order = k;
    h.h_pos = std::abs(evaluate_ftf(coeffs, k));
    h.h_neg = std::abs(evaluate_ftf(coeffs, -k));
    const bool pos_zero = h.h_pos <= kSpectralZeroTolerance;
    const bool neg_zero = h.h_neg <= kSpectralZeroTolerance;
    if (pos_zero && neg_zero) {
      h.classification = RejectionClass::FullyRejected;
    } else if (pos_zero || neg_zero) {
      h.classification = RejectionClass::PartiallyRejected;
    } else {
      h.classification = RejectionClass::Passed;
    }
    report.harmonics.push_back(h);
  }
  return report;
}

CoefficientSet linear_lspsa(std::size_t n) {
  auto steps = uniform_steps(n);
  auto spec = default_zero_set(n);
  std::vector<Complex> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = std::polar(1.0 / static_cast<double>(n), steps[k]);

  const auto m = design_matrix(steps, spec);
  const auto lu = ComplexLu::factor(m, n);
  const double condition = lu ? matrix_norm1(m, n) * lu->inverse_norm1() : INFINITY;
  return CoefficientSet{std::move(c), std::move(steps), std::move(spec), condition};
}

}  // namespace nlpsa
