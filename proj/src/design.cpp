#include "nlpsa/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "nlpsa/error.hpp"
#include "nlpsa/linear_solve.hpp"

namespace nlpsa {

PhaseSteps::PhaseSteps(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("at least 3 phase steps are required, got {}", values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("phase step {} is not finite", i));
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (std::size_t j = i + 1; j < values_.size(); ++j) {
      if (std::abs(std::remainder(values_[i] - values_[j], kTwoPi)) <= kDuplicateStepTolerance) {
        throw Error(ErrorKind::SingularDesign,
                    fmt::format("phase steps {} and {} coincide modulo 2*pi ({} vs {})", i, j,
                                values_[i], values_[j]));
      }
    }
  }
}

bool PhaseSteps::matches(const PhaseSteps& other, double tolerance) const noexcept {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(std::abs(values_[i] - other.values_[i]) <= tolerance)) return false;
  }
  return true;
}

DesignSpec::DesignSpec(std::vector<Constraint> constraints) : constraints_(std::move(constraints)) {
  if (constraints_.empty()) throw Error(ErrorKind::InvalidArgument, "design has no constraints");
  std::size_t pass_count = 0;
  for (const auto& c : constraints_) {
    if (!std::isfinite(c.omega)) {
      throw Error(ErrorKind::InvalidArgument, "constraint frequency is not finite");
    }
    if (c.target == Complex{1.0, 0.0}) {
      ++pass_count;
      pass_omega_ = c.omega;
    } else if (c.target != Complex{0.0, 0.0}) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("constraint at w={} has target {}{:+}i; only 0 and 1 are allowed",
                              c.omega, c.target.real(), c.target.imag()));
    }
  }
  if (pass_count != 1) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("design needs exactly one unit-response frequency, got {}", pass_count));
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    for (std::size_t j = i + 1; j < constraints_.size(); ++j) {
      if (constraints_[i].omega == constraints_[j].omega) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("constraint frequency {} appears twice", constraints_[i].omega));
      }
    }
  }
}

DesignSpec DesignSpec::with_zeros(double pass_omega, std::span<const double> zeros) {
  std::vector<Constraint> constraints;
  constraints.reserve(zeros.size() + 1);
  for (double w : zeros) constraints.push_back({w, {0.0, 0.0}});
  constraints.push_back({pass_omega, {1.0, 0.0}});
  std::stable_sort(constraints.begin(), constraints.end(),
                   [](const Constraint& a, const Constraint& b) { return a.omega < b.omega; });
  return DesignSpec(std::move(constraints));
}

std::vector<double> DesignSpec::zeros() const {
  std::vector<double> out;
  for (const auto& c : constraints_) {
    if (c.target == Complex{0.0, 0.0}) out.push_back(c.omega);
  }
  return out;
}

DesignSpec default_zero_set(std::size_t n) {
  if (n < 3) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("a quadrature design needs at least 3 constraints, got {}", n));
  }
  // -1 and 0 are always present: they are the quadrature conditions. The rest
  // are the integers nearest to 1, ties toward negative frequencies.
  std::vector<double> zeros{-1.0, 0.0};
  zeros.reserve(n - 1);
  for (long distance = 1; zeros.size() < n - 1; ++distance) {
    for (long w : {1 - distance, 1 + distance}) {
      if (w < -1 && zeros.size() < n - 1) zeros.push_back(static_cast<double>(w));
      if (w > 1 && zeros.size() < n - 1) zeros.push_back(static_cast<double>(w));
    }
  }
  return DesignSpec::with_zeros(1.0, zeros);
}

PhaseSteps uniform_steps(std::size_t n) {
  if (n < 3) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("uniform stepping needs at least 3 steps, got {}", n));
  }
  std::vector<double> steps(n);
  for (std::size_t k = 0; k < n; ++k) {
    steps[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
  }
  return PhaseSteps(std::move(steps));
}

std::vector<Complex> design_matrix(const PhaseSteps& steps, const DesignSpec& spec) {
  const std::size_t cols = steps.size();
  std::vector<Complex> m(spec.size() * cols);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double w = spec.constraints()[k].omega;
    for (std::size_t n = 0; n < cols; ++n) m[k * cols + n] = std::polar(1.0, -steps[n] * w);
  }
  return m;
}

double constraint_residual(std::span<const Complex> coefficients, const PhaseSteps& steps,
                           const DesignSpec& spec) {
  double worst = 0.0;
  for (const auto& c : spec.constraints()) {
    Complex h{};
    for (std::size_t n = 0; n < steps.size(); ++n) {
      h += coefficients[n] * std::polar(1.0, -steps[n] * c.omega);
    }
    worst = std::max(worst, std::abs(h - c.target));
  }
  return worst;
}

CoefficientSet solve_coefficients(const PhaseSteps& steps, const DesignSpec& spec) {
  const std::size_t n = steps.size();
  if (spec.size() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("{} constraints for {} phase steps", spec.size(), n));
  }
  const auto m = design_matrix(steps, spec);
  const auto lu = ComplexLu::factor(m, n);
  if (!lu) throw Error(ErrorKind::SingularDesign, "design matrix is rank deficient");

  const double condition = matrix_norm1(m, n) * lu->inverse_norm1();
  if (!(condition <= kConditionMax)) {
    throw Error(ErrorKind::SingularDesign,
                fmt::format("design matrix condition number {:.3e} exceeds {:.0e}", condition,
                            kConditionMax));
  }

  std::vector<Complex> rhs(n);
  for (std::size_t k = 0; k < n; ++k) rhs[k] = spec.constraints()[k].target;
  auto x = lu->solve(rhs);

  // One step of iterative refinement.
  std::vector<Complex> r(rhs);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) r[k] -= m[k * n + j] * x[j];
  }
  const auto dx = lu->solve(r);
  for (std::size_t j = 0; j < n; ++j) x[j] += dx[j];

  const double residual = constraint_residual(x, steps, spec);
  if (!(residual <= kResidualTolerance)) {
    throw Error(ErrorKind::SingularDesign,
                fmt::format("solution misses the constraints by {:.3e}", residual));
  }
  return CoefficientSet{std::move(x), steps, spec, condition};
}

}  // namespace nlpsa
