#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "nlpsa/error.hpp"
#include "nlpsa/pca.hpp"
#include "test_support.hpp"

using namespace nlpsa;
using namespace nlpsa::testing;

namespace {

PhaseMap quadratic_map(double peak, std::size_t w, std::size_t h) {
  return synth_phase_map(SceneKind::Quadratic, std::vector<double>{peak}, w, h);
}

std::vector<double> random_symmetric(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) m[i * n + j] = m[j * n + i] = g(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("Jacobi eigen-decomposition agrees with Eigen") {
  std::mt19937_64 rng(2718);
  for (std::size_t n : {1u, 2u, 3u, 7u, 12u, 20u}) {
    const auto m = random_symmetric(rng, n);
    const auto eig = jacobi_eigen(m, n);
    REQUIRE(eig.values.size() == n);

    Eigen::MatrixXd em(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) em(i, j) = m[i * n + j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(em);
    const Eigen::VectorXd ref = solver.eigenvalues();  // ascending
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(eig.values[j]));

    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(eig.values[j] - ref(static_cast<Eigen::Index>(n - 1 - j))) < 1e-12 * scale);
      if (j) CHECK(eig.values[j] <= eig.values[j - 1]);

      // A v = lambda v, unit length, largest component positive.
      double norm = 0.0, residual = 0.0, lead = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t k = 0; k < n; ++k) av += m[i * n + k] * eig.vector(k, j);
        residual = std::max(residual, std::abs(av - eig.values[j] * eig.vector(i, j)));
        norm += eig.vector(i, j) * eig.vector(i, j);
        if (std::abs(eig.vector(i, j)) > std::abs(lead)) lead = eig.vector(i, j);
      }
      CHECK(residual <= 1e-9 * scale);
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(lead > 0.0);
    }
  }
  CHECK_THROWS_AS(jacobi_eigen(std::vector<double>(5), 2), Error);
}

TEST_CASE("frame covariance matches a direct computation") {
  const auto truth = quadratic_map(7.0, 70, 90);  // spans more than one pixel block
  const auto stack = add_awgn(
      simulate_stack(truth, PhaseSteps(kNonuniformSteps), FringeProfile::pure(0.3, 1.0)), 0.05, 6);
  const std::size_t n = stack.frames.size();
  const auto cov = frame_covariance(stack);
  REQUIRE(cov.size() == n * n);

  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(truth.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < truth.size(); ++p) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = stack.frames[i][p];
    }
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centred = data.rowwise() - mean;
  const Eigen::MatrixXd ref = centred * centred.transpose();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      CHECK(cov[i * n + j] == doctest::Approx(r).epsilon(1e-10).scale(ref.norm()));
      CHECK(cov[i * n + j] == cov[j * n + i]);
    }
  }
}

TEST_CASE("PCA recovers the phase from uniform steps") {
  const auto truth = quadratic_map(3.0 * kPi, 128, 128);
  for (std::size_t n : {4u, 7u}) {
    const auto stack = simulate_stack(truth, uniform_steps(n), FringeProfile::pure(0.5, 1.0));
    auto result = pca_demodulate(stack);
    CHECK_FALSE(result.sign_aligned);
    CHECK(result.eigenvalues[0] >= result.eigenvalues[1]);
    CHECK(result.eigenvalues[1] > 0.0);
    const auto alignment = align_to_truth(result, truth);
    CHECK(result.sign_aligned);
    CHECK(alignment.stats.rms < 0.05);
    CHECK(alignment.stats.piston_removed);
    // After alignment the stored phase is the better candidate without a flip.
    CHECK_FALSE(pca_aligned_error(result.phase, truth).flipped);
  }
}

TEST_CASE("nonuniform steps bias PCA but not the designed demodulator") {
  const auto truth = quadratic_map(3.0 * kPi, 128, 128);
  const auto stack =
      simulate_stack(truth, PhaseSteps(kNonuniformSteps), FringeProfile::pure(0.5, 1.0));
  auto pca = pca_demodulate(stack);
  const auto pca_err = align_to_truth(pca, truth).stats.rms;
  const auto nl = demodulate(stack, nonuniform_design());
  const auto nl_err = phase_error(nl.phase, truth, true).rms;
  CHECK(pca_err > 1e-4);
  CHECK(nl_err < 1e-10);
  CHECK(pca_err >= 1e4 * nl_err);
}

TEST_CASE("sign ambiguity") {
  const auto truth = quadratic_map(6.0, 48, 32);
  const auto stack = simulate_stack(truth, uniform_steps(5), FringeProfile::pure(0.0, 1.0));
  const auto result = pca_demodulate(stack);
  const auto conj = result.conjugate_phase();
  for (std::size_t p = 0; p < conj.size(); ++p) {
    CHECK(std::abs(std::remainder(conj[p] + result.phase[p], kTwoPi)) < 1e-12);
  }
  const auto direct = pca_aligned_error(result.phase, truth);
  const auto flipped = pca_aligned_error(conj, truth);
  CHECK(direct.flipped != flipped.flipped);
  CHECK(direct.stats.rms == doctest::Approx(flipped.stats.rms).epsilon(1e-9));
}

TEST_CASE("degenerate stacks") {
  const auto flat = synth_phase_map(SceneKind::Constant, std::vector<double>{0.4}, 32, 32);
  const auto stack = simulate_stack(flat, uniform_steps(5), FringeProfile::pure(1.0, 1.0));
  try {
    pca_demodulate(stack);
    FAIL("expected DegenerateStack");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateStack);
  }
  const auto dark = simulate_stack(flat, uniform_steps(4), FringeProfile::pure(1.0, 0.0));
  CHECK_THROWS_AS(pca_demodulate(dark), Error);
}

TEST_CASE("PCA is independent of the thread count") {
  const auto truth = quadratic_map(10.0, 150, 100);
  const auto stack = add_awgn(
      simulate_stack(truth, PhaseSteps(kNonuniformSteps), FringeProfile::pure(0.5, 1.0)), 0.2, 17);
  CHECK(frame_covariance(stack, {1}) == frame_covariance(stack, {6}));
  const auto one = pca_demodulate(stack, {1});
  const auto many = pca_demodulate(stack, {6});
  CHECK(one.phase == many.phase);
  CHECK(one.eigenvalues == many.eigenvalues);
}
