#include "cvlink/sampling.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cvlink {

namespace {

constexpr double kJitter = 1e-12;

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Lower-triangular factor of the covariance, cov = L * L^T.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  const Eigen::MatrixXd jittered =
      cov + kJitter * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
  Eigen::LLT<Eigen::MatrixXd> retry(jittered);
  if (retry.info() == Eigen::Success) {
    return retry.matrixL();
  }
  throw std::runtime_error(
      "covariance factorization failed: matrix is not positive semidefinite within the 1e-12 "
      "jitter");
}

void require_sample_count(std::uint64_t n) {
  if (n < 2) {
    throw std::invalid_argument("variance estimation needs at least 2 samples");
  }
}

}  // namespace

NormalSampler::NormalSampler(std::uint64_t seed) : engine_(seed) {}

double NormalSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u;
  double v;
  double s;
  do {
    u = 2.0 * uniform01(engine_) - 1.0;
    v = 2.0 * uniform01(engine_) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

Eigen::MatrixXd sample_quadratures(const GaussianState& state, std::uint64_t n,
                                   std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("sample count must be positive");
  }
  const Eigen::MatrixXd factor = cholesky_factor(state.cov());
  const auto dim = static_cast<Eigen::Index>(2 * state.n_modes());
  NormalSampler sampler(seed);
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n), dim);
  Eigen::VectorXd z(dim);
  for (Eigen::Index row = 0; row < samples.rows(); ++row) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      z(j) = sampler.next();
    }
    samples.row(row) = (state.mean() + factor * z).transpose();
  }
  return samples;
}

SampleRun estimate_joint_variance(const GaussianState& state, const JointCombination& combo,
                                  std::uint64_t n, std::uint64_t seed) {
  require_sample_count(n);
  const Eigen::VectorXd c = combination_vector(combo, state.n_modes());
  const Eigen::MatrixXd factor = cholesky_factor(state.cov());
  const Eigen::VectorXd projected = factor.transpose() * c;  // y = offset + projected . z
  const double offset = c.dot(state.mean());
  const auto dim = static_cast<Eigen::Index>(2 * state.n_modes());

  // Welford accumulation; draw order matches sample_quadratures row order
  NormalSampler sampler(seed);
  Eigen::VectorXd z(dim);
  double running_mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      z(j) = sampler.next();
    }
    const double y = offset + projected.dot(z);
    const double count = static_cast<double>(i) + 1.0;
    const double delta = y - running_mean;
    running_mean += delta / count;
    m2 += delta * (y - running_mean);
  }
  const double estimate = m2 / static_cast<double>(n - 1);
  const double std_error = estimate * std::sqrt(2.0 / static_cast<double>(n));
  return SampleRun{seed, n, combo, estimate, std_error};
}

TraceSeries scan_with_noise(const ScenarioConfig& config, const PhaseGrid& grid,
                            std::uint64_t samples_per_point, std::uint64_t seed,
                            ScannedArm scanned) {
  require_sample_count(samples_per_point);
  config.validate();

  ScenarioConfig unrotated = config;
  unrotated.vbs_t = resolve_vbs_t(config);
  unrotated.vbs_setting = VbsSetting::explicit_t;
  unrotated.phase_1550_rad = 0.0;
  unrotated.phase_532_rad = 0.0;
  const GaussianState state = build_state(unrotated);

  const std::size_t scan_mode = scanned == ScannedArm::arm_532 ? 1 : 0;
  const std::size_t fixed_mode = 1 - scan_mode;
  const double fixed_phase =
      scanned == ScannedArm::arm_532 ? config.phase_1550_rad : config.phase_532_rad;
  const double floor = dark_floor_variance(config);

  TraceSeries trace;
  trace.axis_name = "phase_rad";
  trace.axis = grid.values();
  trace.seed = seed;
  trace.samples_per_point = samples_per_point;
  TraceColumn sum_db{"sum_db", {}};
  TraceColumn stderr_db{"stderr_db", {}};
  sum_db.values.reserve(trace.axis.size());
  stderr_db.values.reserve(trace.axis.size());
  for (std::size_t k = 0; k < trace.axis.size(); ++k) {
    const JointCombination combo{
        {{QuadratureObservable(fixed_mode, fixed_phase), 1.0},
         {QuadratureObservable(scan_mode, trace.axis[k]), 1.0}}};
    const SampleRun run = estimate_joint_variance(state, combo, samples_per_point,
                                                  seed + static_cast<std::uint64_t>(k));
    const double variance = run.estimate + floor;
    if (variance <= 0.0) {
      sum_db.values.push_back(-std::numeric_limits<double>::infinity());
      stderr_db.values.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    sum_db.values.push_back(to_db(variance, 2.0));
    stderr_db.values.push_back(10.0 / std::numbers::ln10 * run.std_error / variance);
  }
  trace.columns.push_back(std::move(sum_db));
  trace.columns.push_back(std::move(stderr_db));
  return trace;
}

}  // namespace cvlink
