#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

// Gaussian states over N optical modes in the quadrature representation.
//
// Conventions used throughout the library:
//   * interleaved quadrature ordering (x1, p1, x2, p2, ...)
//   * vacuum variance 1 for every quadrature, so cov(vacuum) = identity
//   * symplectic form J built from 2x2 blocks [[0, 1], [-1, 0]]
// Physical covariance matrices satisfy cov + iJ >= 0.

namespace cvlink {

/// Symplectic form J for n_modes modes (2N x 2N, block diagonal).
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Linear map on quadratures with S * J * S^T = J (checked on construction
/// to 1e-12 in max norm).
struct SymplecticMap {
  Eigen::MatrixXd matrix;

  explicit SymplecticMap(Eigen::MatrixXd m);
  std::size_t n_modes() const { return static_cast<std::size_t>(matrix.rows()) / 2; }
};

/// Pure-loss channel on one mode. `transmittance_power` is the power
/// efficiency eta in [0, 1]; the amplitude transmittance is sqrt(eta).
struct LossChannel {
  std::size_t mode;
  double transmittance_power;

  LossChannel(std::size_t mode, double transmittance_power);
};

class GaussianState {
 public:
  /// Constructs from explicit moments. The covariance is symmetrized and the
  /// uncertainty relation cov + iJ >= -1e-9 is enforced.
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t n_modes() const { return n_modes_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  /// Smallest eigenvalue of cov + iJ; >= 0 (up to tolerance) for physical states.
  double min_uncertainty_eigenvalue() const;

  /// Throws std::invalid_argument if the state violates the uncertainty
  /// relation beyond `tol` or the covariance is not symmetric.
  void check_physical(double tol = 1e-9) const;

 private:
  std::size_t n_modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// N-mode vacuum: mean 0, cov = identity. Rejects n_modes = 0.
GaussianState make_vacuum(std::size_t n_modes);

// Symplectic matrices for the individual optical elements. `mode` indices are
// zero-based; all throw std::invalid_argument on invalid indices or parameters.

/// Single-mode squeezer. At angle 0 the x variance maps to e^{-2r} * Var[x]
/// and the p variance to e^{+2r} * Var[p]; `angle` rotates the squeezed
/// quadrature to x*cos(angle) + p*sin(angle).
SymplecticMap squeezer_map(std::size_t n_modes, std::size_t mode, double r, double angle = 0.0);

/// Phase-space rotation by phi: measuring x afterwards is equivalent to
/// measuring x*cos(phi) + p*sin(phi) before.
SymplecticMap phase_map(std::size_t n_modes, std::size_t mode, double phi);

/// Two-mode beam splitter with amplitude transmittance t in [0, 1] and
/// reflectance r = sqrt(1 - t^2). Sign convention:
///   a' =  t*a + r*b
///   b' = -r*a + t*b
SymplecticMap beamsplitter_map(std::size_t n_modes, std::size_t mode_a, std::size_t mode_b,
                               double t);

/// Congruence transform: mean -> S*mean, cov -> S*cov*S^T (re-symmetrized).
GaussianState apply_map(const GaussianState& state, const SymplecticMap& map);

GaussianState apply_squeezer(const GaussianState& state, std::size_t mode, double r,
                             double angle = 0.0);
GaussianState apply_phase(const GaussianState& state, std::size_t mode, double phi);
GaussianState apply_beamsplitter(const GaussianState& state, std::size_t mode_a,
                                 std::size_t mode_b, double t);

/// Mixes the mode with an ancilla vacuum at amplitude sqrt(eta) and discards
/// the ancilla: diagonal block -> eta*block + (1-eta)*I, cross covariances
/// scale by sqrt(eta), mean scales by sqrt(eta).
GaussianState apply_loss(const GaussianState& state, const LossChannel& channel);

/// Phase-space displacement of one mode; second moments are unchanged.
GaussianState apply_displacement(const GaussianState& state, std::size_t mode, double dx,
                                 double dp);

/// Restriction to `modes` (result mode k is input modes[k]). Indices must be
/// valid and distinct.
GaussianState partial_state(const GaussianState& state, const std::vector<std::size_t>& modes);

}  // namespace cvlink
