#pragma once

#include "cvlink/criteria.hpp"
#include "cvlink/gaussian.hpp"
#include "cvlink/scenario.hpp"
#include "cvlink/trace.hpp"

#include <cstdint>
#include <random>

// Monte-Carlo estimation of joint quadrature variances, independent of the
// covariance algebra: quadrature vectors are drawn from the state's
// multivariate normal and the sample variance of the projected combination
// emulates the spectrum-analyzer readout of the summed BHD signals.
//
// Reproducibility: the generator is std::mt19937_64 (bit-exact across
// platforms per the C++ standard); uniforms take the top 53 bits, normals use
// the Marsaglia polar transform implemented here, and the covariance is
// factorized by Cholesky with at most one 1e-12 diagonal jitter retry. All
// sampling is sequential, so a (seed, n) pair fixes every draw.

namespace cvlink {

/// Stream of standard-normal deviates, pinned as documented above.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Result of one variance estimation run. For Gaussian data the sample
/// variance is chi-square distributed, giving std_error = estimate *
/// sqrt(2 / n_samples).
struct SampleRun {
  std::uint64_t seed;
  std::uint64_t n_samples;
  JointCombination combo;
  double estimate;
  double std_error;
};

/// n x 2N matrix of quadrature samples (row = one shot). Deterministic for a
/// fixed seed. Throws if the covariance cannot be factorized within the
/// documented jitter.
Eigen::MatrixXd sample_quadratures(const GaussianState& state, std::uint64_t n,
                                   std::uint64_t seed);

/// Sample variance (unbiased, mean-subtracted) of the combination, consuming
/// the same random stream as sample_quadratures. Requires n >= 2.
SampleRun estimate_joint_variance(const GaussianState& state, const JointCombination& combo,
                                  std::uint64_t n, std::uint64_t seed);

/// Phase scan with sampled variances instead of the covariance quadratic
/// form. Error bars are propagated to dB by the first-order delta method:
/// stderr_db = (10 / ln 10) * std_error / estimate. Point k uses seed + k so
/// the points are independent but reproducible. Columns: sum_db, stderr_db.
TraceSeries scan_with_noise(const ScenarioConfig& config, const PhaseGrid& grid,
                            std::uint64_t samples_per_point, std::uint64_t seed,
                            ScannedArm scanned = ScannedArm::arm_532);

}  // namespace cvlink
