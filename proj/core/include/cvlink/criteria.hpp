#pragma once

#include "cvlink/gaussian.hpp"

#include <vector>

// Quadrature statistics and the Duan inseparability witness
//   I = Var[x_a + x_b] + Var[p_a - p_b]
// with vacuum-normalized quadratures; I < 4 certifies entanglement.

namespace cvlink {

/// Rotated quadrature x*cos(phase) + p*sin(phase) of one mode. The phase is
/// reduced to [0, 2*pi) on construction.
struct QuadratureObservable {
  std::size_t mode;
  double phase;

  QuadratureObservable(std::size_t mode, double phase);
};

inline QuadratureObservable amplitude_quadrature(std::size_t mode) {
  return QuadratureObservable(mode, 0.0);
}
QuadratureObservable phase_quadrature(std::size_t mode);  // x^{pi/2} = p

struct JointTerm {
  QuadratureObservable observable;
  double coefficient;
};

/// Linear combination of rotated quadratures, e.g. x_a + x_b or p_a - p_b.
struct JointCombination {
  std::vector<JointTerm> terms;
};

JointCombination quadrature_sum(std::size_t mode_a, std::size_t mode_b);        // x_a + x_b
JointCombination quadrature_difference(std::size_t mode_a, std::size_t mode_b); // x_a - x_b
JointCombination momentum_sum(std::size_t mode_a, std::size_t mode_b);          // p_a + p_b
JointCombination momentum_difference(std::size_t mode_a, std::size_t mode_b);   // p_a - p_b

/// A variance together with its vacuum benchmark. `rel_db` is
/// 10*log10(variance / reference_variance); an exactly zero variance is kept
/// as -infinity here and rendered as a distinguished below-floor token during
/// serialization.
struct NoiseLevel {
  double variance;
  double reference_variance;
  double rel_db;

  friend bool operator==(const NoiseLevel&, const NoiseLevel&) = default;
};

NoiseLevel make_noise_level(double variance, double reference_variance);

struct DuanResult {
  double var_x_sum;
  double var_p_diff;
  double i_value;   // var_x_sum + var_p_diff
  bool entangled;   // i_value < 4, strict

  friend bool operator==(const DuanResult&, const DuanResult&) = default;
};

inline constexpr double kDuanSeparableBound = 4.0;

/// 10*log10(variance / reference); both arguments must be positive.
double to_db(double variance, double reference);
/// reference * 10^(rel_db / 10); the reference must be positive.
double from_db(double rel_db, double reference);

/// Coefficient vector of the combination in the 2N quadrature basis.
Eigen::VectorXd combination_vector(const JointCombination& combo, std::size_t n_modes);

double quadrature_variance(const GaussianState& state, const QuadratureObservable& obs);

/// Variance c^T cov c of the combination. The reference is the sum of squared
/// coefficients, i.e. the value the same combination takes on independent
/// vacuum inputs.
NoiseLevel joint_variance(const GaussianState& state, const JointCombination& combo);

DuanResult duan_i(const GaussianState& state, std::size_t mode_a, std::size_t mode_b);

}  // namespace cvlink
