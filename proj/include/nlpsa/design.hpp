#pragma once

// Design of N-step phase-shifting algorithms for known, arbitrarily spaced
// phase steps. A design prescribes the value of the frequency transfer
// function H(w) = sum_n c_n exp(-i theta_n w) at N frequencies and solves the
// resulting N x N complex system for the coefficients c_n.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nlpsa {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Largest tolerated |H(w_k) - g_k| over the design constraints.
inline constexpr double kResidualTolerance = 1e-10;
/// Condition numbers above this reject the design outright.
inline constexpr double kConditionMax = 1e12;
/// Condition numbers above this are reported as a warning by front ends.
inline constexpr double kConditionWarn = 1e8;
/// Two steps closer than this (modulo 2 pi) count as duplicates.
inline constexpr double kDuplicateStepTolerance = 1e-9;

/// Known phase shifts theta_n in radians, with the fringe frequency
/// normalized to one. At least three, finite, pairwise distinct modulo 2 pi.
class PhaseSteps {
 public:
  explicit PhaseSteps(std::vector<double> values);
  PhaseSteps(std::initializer_list<double> values)
      : PhaseSteps(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// True if every step matches `other` within `tolerance` radians.
  bool matches(const PhaseSteps& other, double tolerance) const noexcept;

  friend bool operator==(const PhaseSteps&, const PhaseSteps&) = default;

 private:
  std::vector<double> values_;
};

struct Constraint {
  double omega = 0.0;
  Complex target{0.0, 0.0};

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Prescribed FTF values: one pass frequency with target 1, every other
/// constraint a spectral zero.
class DesignSpec {
 public:
  explicit DesignSpec(std::vector<Constraint> constraints);

  /// Unit response at `pass_omega`, zeros at `zeros`; rows sorted by frequency.
  static DesignSpec with_zeros(double pass_omega, std::span<const double> zeros);

  std::size_t size() const noexcept { return constraints_.size(); }
  std::span<const Constraint> constraints() const noexcept { return constraints_; }
  double pass_omega() const noexcept { return pass_omega_; }
  /// Frequencies of the zero-target constraints, in stored order.
  std::vector<double> zeros() const;

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;

 private:
  std::vector<Constraint> constraints_;
  double pass_omega_ = 1.0;
};

/// Demodulation coefficients c_n together with the steps and constraints they
/// were solved for.
struct CoefficientSet {
  std::vector<Complex> values;
  PhaseSteps steps;
  DesignSpec spec;
  double condition_estimate = 1.0;

  std::size_t size() const noexcept { return values.size(); }
};

/// Solve sum_n c_n exp(-i theta_n w_k) = g_k for every constraint k.
/// Throws DimensionMismatch when |spec| != |steps| and SingularDesign when the
/// system is rank deficient, worse conditioned than kConditionMax, or the
/// solution misses a constraint by more than kResidualTolerance.
CoefficientSet solve_coefficients(const PhaseSteps& steps, const DesignSpec& spec);

/// Unit response at w = 1 and n - 1 integer zeros: always -1 and 0, then the
/// integers closest to 1, ties going to the negative side.
DesignSpec default_zero_set(std::size_t n);

/// theta_k = 2 pi k / n.
PhaseSteps uniform_steps(std::size_t n);

/// The design matrix M_{k,n} = exp(-i theta_n w_k), row-major.
std::vector<Complex> design_matrix(const PhaseSteps& steps, const DesignSpec& spec);

/// max_k |sum_n c_n exp(-i theta_n w_k) - g_k|.
double constraint_residual(std::span<const Complex> coefficients, const PhaseSteps& steps,
                           const DesignSpec& spec);

}  // namespace nlpsa
