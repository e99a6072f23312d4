#pragma once

// Synthetic phase-stepped fringe stacks:
//   I_n(p) = a + sum_k b_k cos(k (phi(p) + theta_n)) + noise.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nlpsa/design.hpp"
#include "nlpsa/grid.hpp"
#include "nlpsa/parallel.hpp"

namespace nlpsa {

enum class SceneKind { Constant, Quadratic, Gaussians };

SceneKind parse_scene_kind(std::string_view name);
std::string_view to_string(SceneKind kind) noexcept;

/// constant:  params = {value}
/// quadratic: params = {peak}; peak * r^2 / max(r^2), r^2 = (2x/W-1)^2 + (2y/H-1)^2
/// gaussians: params = {amplitude, cx, cy, width}..., on the unit square with
///            pixel centres at ((x+0.5)/W, (y+0.5)/H)
PhaseMap synth_phase_map(SceneKind kind, std::span<const double> params, std::size_t width,
                         std::size_t height);

struct Harmonic {
  int order = 1;
  double amplitude = 0.0;

  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

struct FringeProfile {
  double background = 0.0;
  std::vector<Harmonic> harmonics;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws BadParams on duplicate or non-positive orders, or negative sigma.
  void validate() const;

  /// Fundamental of amplitude `contrast` only.
  static FringeProfile pure(double background, double contrast);

  friend bool operator==(const FringeProfile&, const FringeProfile&) = default;
};

struct FringeStack {
  PhaseSteps steps;
  std::vector<Grid> frames;
  FringeProfile profile;
  std::optional<PhaseMap> truth;

  std::size_t width() const { return frames.front().width(); }
  std::size_t height() const { return frames.front().height(); }

  /// Throws FrameCountMismatch / DimensionMismatch when the invariants break.
  void validate() const;
};

/// Noiseless stack; the profile's noise fields are copied as provenance only.
FringeStack simulate_stack(const PhaseMap& truth, const PhaseSteps& steps,
                           const FringeProfile& profile, Parallelism par = {});

/// Adds N(0, sigma^2) to every sample. The draw for (frame n, pixel p) is
/// standard_normal(seed, n, p), independent of scheduling.
FringeStack add_awgn(FringeStack stack, double sigma, std::uint64_t seed, Parallelism par = {});

}  // namespace nlpsa
