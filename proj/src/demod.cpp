#include "nlpsa/demod.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "nlpsa/error.hpp"
#include "nlpsa/random.hpp"
#include "nlpsa/spectrum.hpp"

namespace nlpsa {
namespace {

constexpr std::size_t kTrialBlock = 4096;
constexpr std::uint64_t kPhaseStream = 0;

}  // namespace

double wrap_phase(double x) noexcept {
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r = kPi;
  return r;
}

DemodResult demodulate(const FringeStack& stack, const CoefficientSet& coeffs, Parallelism par) {
  if (stack.frames.size() != coeffs.size()) {
    throw Error(ErrorKind::FrameCountMismatch,
                fmt::format("stack has {} frames, design has {} coefficients", stack.frames.size(),
                            coeffs.size()));
  }
  stack.validate();
  if (!stack.steps.matches(coeffs.steps, kStepMatchTolerance)) {
    throw Error(ErrorKind::StepMismatch, "stack phase steps differ from the design's steps");
  }

  const std::size_t width = stack.width();
  const std::size_t height = stack.height();
  double peak = 0.0;
  for (const auto& f : stack.frames) {
    for (double v : f.values()) peak = std::max(peak, std::abs(v));
  }
  const double floor = kAmplitudeFloor * peak;

  std::vector<Complex> weights(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) weights[n] = std::conj(coeffs.values[n]);

  DemodResult out{PhaseMap(width, height), Grid(width, height),
                  std::vector<std::uint8_t>(width * height, 0)};
  parallel_for(height, par, [&](std::size_t y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t p = y * width + x;
      Complex z{};
      for (std::size_t n = 0; n < weights.size(); ++n) z += weights[n] * stack.frames[n][p];
      const double a = std::abs(z);
      out.amplitude[p] = a;
      out.phase[p] = wrap_phase(std::arg(z));
      out.valid[p] = a >= floor && a > 0.0 ? 1 : 0;
    }
  });
  return out;
}

PhaseErrorStats phase_error(const PhaseMap& estimate, const PhaseMap& truth, bool remove_piston) {
  if (!estimate.same_shape(truth)) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("estimate is {}x{}, truth is {}x{}", estimate.width(),
                            estimate.height(), truth.width(), truth.height()));
  }
  std::vector<double> delta(estimate.size());
  for (std::size_t p = 0; p < delta.size(); ++p) delta[p] = wrap_phase(estimate[p] - truth[p]);

  if (remove_piston) {
    Complex mean{};
    for (double d : delta) mean += std::polar(1.0, d);
    const double piston = std::arg(mean);
    for (double& d : delta) d = wrap_phase(d - piston);
  }

  PhaseErrorStats stats;
  stats.piston_removed = remove_piston;
  double sum_sq = 0.0;
  for (double d : delta) {
    sum_sq += d * d;
    stats.max_abs = std::max(stats.max_abs, std::abs(d));
  }
  stats.rms = std::sqrt(sum_sq / static_cast<double>(delta.size()));
  return stats;
}

MonteCarloGain mc_snr_analysis(const CoefficientSet& coeffs, double sigma, std::size_t trials,
                               std::uint64_t seed, Parallelism par) {
  if (trials < 1000) {
    throw Error(ErrorKind::BadTrialCount,
                fmt::format("need at least 1000 trials, got {}", trials));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::InvalidArgument, "noise sigma must be positive");
  }
  constexpr double kContrast = 2.0;
  const std::size_t n_steps = coeffs.size();
  const Complex gain_at_pass = std::conj(evaluate_ftf(coeffs, coeffs.spec.pass_omega()));

  std::vector<double> partial(block_count(trials, kTrialBlock), 0.0);
  parallel_for(partial.size(), par, [&](std::size_t block) {
    const std::size_t begin = block * kTrialBlock;
    const std::size_t end = std::min(trials, begin + kTrialBlock);
    double sum = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
      const double phi = kTwoPi * uniform_pair(seed, kPhaseStream, t)[0];
      Complex z{};
      for (std::size_t n = 0; n < n_steps; ++n) {
        const double sample = kContrast * std::cos(phi + coeffs.steps[n]) +
                              sigma * standard_normal(seed, n + 1, t);
        z += std::conj(coeffs.values[n]) * sample;
      }
      sum += std::norm(z - gain_at_pass * std::polar(kContrast / 2.0, phi));
    }
    partial[block] = sum;
  });

  double total = 0.0;
  for (double s : partial) total += s;

  MonteCarloGain out;
  out.trials = trials;
  out.noise_power = total / static_cast<double>(trials);
  out.signal_power = std::norm(gain_at_pass) * kContrast * kContrast / 4.0;
  const double input_snr = (kContrast * kContrast / 2.0) / (sigma * sigma);
  const double output_snr = out.signal_power / out.noise_power;
  out.gain = 2.0 * output_snr / input_snr;
  return out;
}

double mc_snr_gain(const CoefficientSet& coeffs, double sigma, std::size_t trials,
                   std::uint64_t seed, Parallelism par) {
  return mc_snr_analysis(coeffs, sigma, trials, seed, par).gain;
}

}  // namespace nlpsa
