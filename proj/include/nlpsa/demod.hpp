#pragma once

#include <cstdint>
#include <vector>

#include "nlpsa/design.hpp"
#include "nlpsa/fringe.hpp"
#include "nlpsa/grid.hpp"
#include "nlpsa/parallel.hpp"

namespace nlpsa {

/// Steps of a stack and a design must agree to this many radians.
inline constexpr double kStepMatchTolerance = 1e-9;
/// Pixels with |z| below this fraction of the largest frame sample are masked.
inline constexpr double kAmplitudeFloor = 1e-12;

struct DemodResult {
  PhaseMap phase;  // wrapped to (-pi, pi]
  Grid amplitude;
  std::vector<std::uint8_t> valid;  // 1 where amplitude >= floor
};

struct PhaseErrorStats {
  double rms = 0.0;
  double max_abs = 0.0;
  bool piston_removed = false;
};

/// x reduced to (-pi, pi].
double wrap_phase(double x) noexcept;

/// z(p) = sum_n conj(c_n) I_n(p); amplitude |z|, phase arg z.
/// Throws FrameCountMismatch if the frame count differs from the design size
/// and StepMismatch if the stack and design steps differ by more than
/// kStepMatchTolerance.
DemodResult demodulate(const FringeStack& stack, const CoefficientSet& coeffs,
                       Parallelism par = {});

/// Circular phase difference statistics. With `remove_piston`, the circular
/// mean of the difference is subtracted before the statistics.
PhaseErrorStats phase_error(const PhaseMap& estimate, const PhaseMap& truth, bool remove_piston);

struct MonteCarloGain {
  double gain = 0.0;
  double signal_power = 0.0;  // |H(1) b / 2|^2
  double noise_power = 0.0;   // mean |z - conj(H(1)) (b/2) e^{i phi}|^2
  std::size_t trials = 0;
};

/// Monte-Carlo SNR gain on scalar fringes I_n = 2 cos(phi + theta_n) + noise,
/// with phi uniform per trial. The output keeps only the e^{+i phi} half of
/// the real fringe's power, so the ratio of output to input SNR is doubled;
/// with that factor the uniform least-squares PSA yields exactly N.
/// Throws BadTrialCount below 1000 trials.
MonteCarloGain mc_snr_analysis(const CoefficientSet& coeffs, double sigma, std::size_t trials,
                               std::uint64_t seed, Parallelism par = {});

double mc_snr_gain(const CoefficientSet& coeffs, double sigma, std::size_t trials,
                   std::uint64_t seed, Parallelism par = {});

}  // namespace nlpsa
