#pragma once

// PCA phase demodulation: the two leading principal components of the
// mean-removed frame stack serve as a quadrature pair. The recovered phase is
// only defined up to a global sign and a constant offset (piston).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "nlpsa/demod.hpp"
#include "nlpsa/fringe.hpp"
#include "nlpsa/grid.hpp"
#include "nlpsa/parallel.hpp"

namespace nlpsa {

/// Second eigenvalue below this fraction of the first means no quadrature pair.
inline constexpr double kPcaDegeneracyRatio = 1e-12;

struct SymmetricEigen {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // row-major n x n; column j pairs with values[j]
  std::size_t n = 0;

  double vector(std::size_t component, std::size_t j) const { return vectors[component * n + j]; }
};

/// Cyclic Jacobi rotations on a symmetric row-major n x n matrix. Each
/// eigenvector is normalized with its largest-magnitude component positive.
SymmetricEigen jacobi_eigen(std::span<const double> matrix, std::size_t n);

struct PcaResult {
  PhaseMap phase;  // arg(u + i v)
  std::array<double, 2> eigenvalues{};
  bool sign_aligned = false;

  /// The other sign candidate, arg(u - i v).
  PhaseMap conjugate_phase() const;
};

/// Frame-covariance matrix of the mean-removed stack (N x N, row-major).
/// Pixel blocks are reduced in a fixed order, so the result does not depend
/// on the thread count.
std::vector<double> frame_covariance(const FringeStack& stack, Parallelism par = {});

/// Throws DegenerateStack when fewer than 3 frames are given or the second
/// eigenvalue is below kPcaDegeneracyRatio times the first.
PcaResult pca_demodulate(const FringeStack& stack, Parallelism par = {});

/// Piston-removed error minimized over both sign candidates.
struct PcaAlignment {
  PhaseErrorStats stats;
  bool flipped = false;
};
PcaAlignment pca_aligned_error(const PhaseMap& pca_phase, const PhaseMap& truth);

/// Replaces the phase by its negation when that matches `truth` better, and
/// marks the result as sign aligned.
PcaAlignment align_to_truth(PcaResult& result, const PhaseMap& truth);

}  // namespace nlpsa
