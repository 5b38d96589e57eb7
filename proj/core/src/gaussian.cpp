#include "cvlink/gaussian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace cvlink {

namespace {

void require_mode(std::size_t mode, std::size_t n_modes) {
  if (mode >= n_modes) {
    throw std::invalid_argument("mode index " + std::to_string(mode) +
                                " out of range for " + std::to_string(n_modes) + " modes");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

SymplecticMap::SymplecticMap(Eigen::MatrixXd m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0 || matrix.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic matrix must be square with even dimension");
  }
  const Eigen::MatrixXd j = symplectic_form(n_modes());
  const double defect = (matrix * j * matrix.transpose() - j).cwiseAbs().maxCoeff();
  if (!(defect < 1e-12)) {
    throw std::invalid_argument("matrix is not symplectic: ||SJS^T - J||_max = " +
                                std::to_string(defect));
  }
}

LossChannel::LossChannel(std::size_t mode_, double transmittance_power_)
    : mode(mode_), transmittance_power(transmittance_power_) {
  if (!(transmittance_power >= 0.0 && transmittance_power <= 1.0)) {
    throw std::invalid_argument("loss transmittance_power must lie in [0, 1], got " +
                                std::to_string(transmittance_power));
  }
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("mean vector must have positive even length");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw std::invalid_argument("covariance dimensions do not match the mean vector");
  }
  n_modes_ = static_cast<std::size_t>(mean_.size()) / 2;
  cov_ = symmetrized(cov_);
  check_physical();
}

double GaussianState::min_uncertainty_eigenvalue() const {
  const Eigen::MatrixXd j = symplectic_form(n_modes_);
  Eigen::MatrixXcd m = cov_.cast<std::complex<double>>();
  m += std::complex<double>(0.0, 1.0) * j.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void GaussianState::check_physical(double tol) const {
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (!(asym < 1e-12)) {
    throw std::invalid_argument("covariance is not symmetric");
  }
  const double lambda_min = min_uncertainty_eigenvalue();
  if (!(lambda_min >= -tol)) {
    throw std::invalid_argument("state violates the uncertainty relation: min eig(cov + iJ) = " +
                                std::to_string(lambda_min));
  }
}

GaussianState make_vacuum(std::size_t n_modes) {
  if (n_modes == 0) {
    throw std::invalid_argument("a state needs at least one mode");
  }
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                       Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

SymplecticMap squeezer_map(std::size_t n_modes, std::size_t mode, double r, double angle) {
  require_mode(mode, n_modes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  Eigen::Matrix2d rot;
  rot << cs, sn, -sn, cs;
  Eigen::Matrix2d diag;
  diag << std::exp(-r), 0.0, 0.0, std::exp(r);
  // squeezes the x*cos(angle) + p*sin(angle) quadrature
  s.block<2, 2>(2 * mode, 2 * mode) = rot.transpose() * diag * rot;
  return SymplecticMap(std::move(s));
}

SymplecticMap phase_map(std::size_t n_modes, std::size_t mode, double phi) {
  require_mode(mode, n_modes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double cs = std::cos(phi);
  const double sn = std::sin(phi);
  s(2 * mode, 2 * mode) = cs;
  s(2 * mode, 2 * mode + 1) = sn;
  s(2 * mode + 1, 2 * mode) = -sn;
  s(2 * mode + 1, 2 * mode + 1) = cs;
  return SymplecticMap(std::move(s));
}

SymplecticMap beamsplitter_map(std::size_t n_modes, std::size_t mode_a, std::size_t mode_b,
                               double t) {
  require_mode(mode_a, n_modes);
  require_mode(mode_b, n_modes);
  if (mode_a == mode_b) {
    throw std::invalid_argument("beam splitter needs two distinct modes");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("beam splitter transmittance must lie in [0, 1], got " +
                                std::to_string(t));
  }
  const double r = std::sqrt(1.0 - t * t);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (int q = 0; q < 2; ++q) {  // same mixing for x and p
    const auto a = static_cast<Eigen::Index>(2 * mode_a + q);
    const auto b = static_cast<Eigen::Index>(2 * mode_b + q);
    s(a, a) = t;
    s(a, b) = r;
    s(b, a) = -r;
    s(b, b) = t;
  }
  return SymplecticMap(std::move(s));
}

GaussianState apply_map(const GaussianState& state, const SymplecticMap& map) {
  if (map.n_modes() != state.n_modes()) {
    throw std::invalid_argument("symplectic map dimension does not match the state");
  }
  return GaussianState(map.matrix * state.mean(),
                       symmetrized(map.matrix * state.cov() * map.matrix.transpose()));
}

GaussianState apply_squeezer(const GaussianState& state, std::size_t mode, double r,
                             double angle) {
  return apply_map(state, squeezer_map(state.n_modes(), mode, r, angle));
}

GaussianState apply_phase(const GaussianState& state, std::size_t mode, double phi) {
  return apply_map(state, phase_map(state.n_modes(), mode, phi));
}

GaussianState apply_beamsplitter(const GaussianState& state, std::size_t mode_a,
                                 std::size_t mode_b, double t) {
  return apply_map(state, beamsplitter_map(state.n_modes(), mode_a, mode_b, t));
}

GaussianState apply_loss(const GaussianState& state, const LossChannel& channel) {
  require_mode(channel.mode, state.n_modes());
  const double eta = channel.transmittance_power;
  const double amp = std::sqrt(eta);
  const auto k = static_cast<Eigen::Index>(2 * channel.mode);
  const auto dim = static_cast<Eigen::Index>(2 * state.n_modes());

  Eigen::VectorXd mean = state.mean();
  mean.segment<2>(k) *= amp;

  // ancilla dilation reduced to the surviving modes
  Eigen::MatrixXd cov = state.cov();
  cov.block(k, 0, 2, dim) *= amp;
  cov.block(0, k, dim, 2) *= amp;
  cov.block<2, 2>(k, k) += (1.0 - eta) * Eigen::Matrix2d::Identity();
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState apply_displacement(const GaussianState& state, std::size_t mode, double dx,
                                 double dp) {
  require_mode(mode, state.n_modes());
  Eigen::VectorXd mean = state.mean();
  mean(2 * mode) += dx;
  mean(2 * mode + 1) += dp;
  return GaussianState(std::move(mean), state.cov());
}

GaussianState partial_state(const GaussianState& state, const std::vector<std::size_t>& modes) {
  if (modes.empty()) {
    throw std::invalid_argument("partial_state needs at least one mode");
  }
  std::unordered_set<std::size_t> seen;
  for (std::size_t m : modes) {
    require_mode(m, state.n_modes());
    if (!seen.insert(m).second) {
      throw std::invalid_argument("duplicate mode index " + std::to_string(m) +
                                  " in partial_state");
    }
  }
  const auto n = static_cast<Eigen::Index>(modes.size());
  Eigen::VectorXd mean(2 * n);
  Eigen::MatrixXd cov(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src_i = static_cast<Eigen::Index>(2 * modes[static_cast<std::size_t>(i)]);
    mean.segment<2>(2 * i) = state.mean().segment<2>(src_i);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto src_j = static_cast<Eigen::Index>(2 * modes[static_cast<std::size_t>(j)]);
      cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(src_i, src_j);
    }
  }
  return GaussianState(std::move(mean), std::move(cov));
}

}  // namespace cvlink
