#include "cvlink/criteria.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvlink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_phase(double phase) {
  double reduced = std::fmod(phase, kTwoPi);
  if (reduced < 0.0) {
    reduced += kTwoPi;
  }
  if (reduced == kTwoPi) {  // fmod rounding at the boundary
    reduced = 0.0;
  }
  return reduced;
}

}  // namespace

QuadratureObservable::QuadratureObservable(std::size_t mode_, double phase_)
    : mode(mode_), phase(reduce_phase(phase_)) {
  if (!std::isfinite(phase_)) {
    throw std::invalid_argument("quadrature phase must be finite");
  }
}

QuadratureObservable phase_quadrature(std::size_t mode) {
  return QuadratureObservable(mode, std::numbers::pi / 2.0);
}

JointCombination quadrature_sum(std::size_t a, std::size_t b) {
  return {{{amplitude_quadrature(a), 1.0}, {amplitude_quadrature(b), 1.0}}};
}

JointCombination quadrature_difference(std::size_t a, std::size_t b) {
  return {{{amplitude_quadrature(a), 1.0}, {amplitude_quadrature(b), -1.0}}};
}

JointCombination momentum_sum(std::size_t a, std::size_t b) {
  return {{{phase_quadrature(a), 1.0}, {phase_quadrature(b), 1.0}}};
}

JointCombination momentum_difference(std::size_t a, std::size_t b) {
  return {{{phase_quadrature(a), 1.0}, {phase_quadrature(b), -1.0}}};
}

NoiseLevel make_noise_level(double variance, double reference_variance) {
  if (!(reference_variance > 0.0)) {
    throw std::invalid_argument("reference variance must be positive");
  }
  if (!(variance >= 0.0)) {
    throw std::invalid_argument("variance must be non-negative, got " + std::to_string(variance));
  }
  const double rel_db = variance == 0.0 ? -std::numeric_limits<double>::infinity()
                                        : to_db(variance, reference_variance);
  return NoiseLevel{variance, reference_variance, rel_db};
}

double to_db(double variance, double reference) {
  if (!(variance > 0.0) || !(reference > 0.0)) {
    throw std::invalid_argument("to_db requires positive variance and reference");
  }
  return 10.0 * std::log10(variance / reference);
}

double from_db(double rel_db, double reference) {
  if (!(reference > 0.0)) {
    throw std::invalid_argument("from_db requires a positive reference");
  }
  return reference * std::pow(10.0, rel_db / 10.0);
}

Eigen::VectorXd combination_vector(const JointCombination& combo, std::size_t n_modes) {
  if (combo.terms.empty()) {
    throw std::invalid_argument("joint combination must have at least one term");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * n_modes);
  for (const auto& term : combo.terms) {
    if (term.observable.mode >= n_modes) {
      throw std::invalid_argument("combination references mode " +
                                  std::to_string(term.observable.mode) + " of a " +
                                  std::to_string(n_modes) + "-mode state");
    }
    if (!std::isfinite(term.coefficient)) {
      throw std::invalid_argument("combination coefficients must be finite");
    }
    c(2 * term.observable.mode) += term.coefficient * std::cos(term.observable.phase);
    c(2 * term.observable.mode + 1) += term.coefficient * std::sin(term.observable.phase);
  }
  return c;
}

double quadrature_variance(const GaussianState& state, const QuadratureObservable& obs) {
  const JointCombination single{{{obs, 1.0}}};
  const Eigen::VectorXd v = combination_vector(single, state.n_modes());
  return v.dot(state.cov() * v);
}

NoiseLevel joint_variance(const GaussianState& state, const JointCombination& combo) {
  const Eigen::VectorXd c = combination_vector(combo, state.n_modes());
  double variance = c.dot(state.cov() * c);
  if (variance < 0.0 && variance > -1e-12) {
    variance = 0.0;  // round-off from the quadratic form
  }
  double reference = 0.0;
  for (const auto& term : combo.terms) {
    reference += term.coefficient * term.coefficient;
  }
  return make_noise_level(variance, reference);
}

DuanResult duan_i(const GaussianState& state, std::size_t mode_a, std::size_t mode_b) {
  if (mode_a >= state.n_modes() || mode_b >= state.n_modes()) {
    throw std::invalid_argument("duan_i mode index out of range");
  }
  if (mode_a == mode_b) {
    throw std::invalid_argument("duan_i needs two distinct modes");
  }
  const double var_x_sum = joint_variance(state, quadrature_sum(mode_a, mode_b)).variance;
  const double var_p_diff = joint_variance(state, momentum_difference(mode_a, mode_b)).variance;
  const double i_value = var_x_sum + var_p_diff;
  return DuanResult{var_x_sum, var_p_diff, i_value, i_value < kDuanSeparableBound};
}

}  // namespace cvlink
