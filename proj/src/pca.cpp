#include "nlpsa/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "nlpsa/error.hpp"

namespace nlpsa {
namespace {

constexpr std::size_t kPixelBlock = 4096;
constexpr int kMaxSweeps = 64;

}  // namespace

SymmetricEigen jacobi_eigen(std::span<const double> matrix, std::size_t n) {
  if (matrix.size() != n * n) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("{} entries for a {}x{} matrix", matrix.size(), n, n));
  }
  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double total = 0.0;
  for (double x : a) total += x * x;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    }
    if (off <= 1e-32 * total || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });

  SymmetricEigen out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = a[src * n + src];
    std::size_t lead = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::abs(v[k * n + src]) > std::abs(v[lead * n + src])) lead = k;
    }
    const double sign = v[lead * n + src] < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors[k * n + j] = sign * v[k * n + src];
  }
  return out;
}

PhaseMap PcaResult::conjugate_phase() const {
  PhaseMap out = phase;
  for (auto& p : out.values()) p = wrap_phase(-p);
  return out;
}

std::vector<double> frame_covariance(const FringeStack& stack, Parallelism par) {
  stack.validate();
  const std::size_t n = stack.frames.size();
  const std::size_t pixels = stack.frames.front().size();
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<std::vector<double>> partial(block_count(pixels, kPixelBlock));
  parallel_for(partial.size(), par, [&](std::size_t block) {
    std::vector<double> acc(n * n, 0.0);
    std::vector<double> centred(n);
    const std::size_t end = std::min(pixels, (block + 1) * kPixelBlock);
    for (std::size_t p = block * kPixelBlock; p < end; ++p) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += stack.frames[i][p];
      mean *= inv_n;
      for (std::size_t i = 0; i < n; ++i) centred[i] = stack.frames[i][p] - mean;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) acc[i * n + j] += centred[i] * centred[j];
      }
    }
    partial[block] = std::move(acc);
  });

  std::vector<double> cov(n * n, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t k = 0; k < cov.size(); ++k) cov[k] += acc[k];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) cov[i * n + j] = cov[j * n + i];
  }
  return cov;
}

PcaResult pca_demodulate(const FringeStack& stack, Parallelism par) {
  if (stack.frames.size() < 3) {
    throw Error(ErrorKind::DegenerateStack,
                fmt::format("PCA needs at least 3 frames, got {}", stack.frames.size()));
  }
  const std::size_t n = stack.frames.size();
  const auto eig = jacobi_eigen(frame_covariance(stack, par), n);
  if (!(eig.values[0] > 0.0) || !(eig.values[1] >= kPcaDegeneracyRatio * eig.values[0])) {
    throw Error(ErrorKind::DegenerateStack,
                fmt::format("no quadrature pair: eigenvalues {:.6g}, {:.6g}", eig.values[0],
                            eig.values[1]));
  }

  const std::size_t width = stack.width();
  const std::size_t height = stack.height();
  const double inv_n = 1.0 / static_cast<double>(n);
  PcaResult out{PhaseMap(width, height), {eig.values[0], std::max(eig.values[1], 0.0)}, false};
  parallel_for(height, par, [&](std::size_t y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t p = y * width + x;
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += stack.frames[i][p];
      mean *= inv_n;
      double u = 0.0;
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double c = stack.frames[i][p] - mean;
        u += eig.vector(i, 0) * c;
        v += eig.vector(i, 1) * c;
      }
      out.phase[p] = wrap_phase(std::atan2(v, u));
    }
  });
  return out;
}

PcaAlignment pca_aligned_error(const PhaseMap& pca_phase, const PhaseMap& truth) {
  PhaseMap negated = pca_phase;
  for (auto& p : negated.values()) p = wrap_phase(-p);
  const auto direct = phase_error(pca_phase, truth, true);
  const auto flipped = phase_error(negated, truth, true);
  if (flipped.rms < direct.rms) return {flipped, true};
  return {direct, false};
}

PcaAlignment align_to_truth(PcaResult& result, const PhaseMap& truth) {
  const auto alignment = pca_aligned_error(result.phase, truth);
  if (alignment.flipped) result.phase = result.conjugate_phase();
  result.sign_aligned = true;
  return alignment;
}

}  // namespace nlpsa
