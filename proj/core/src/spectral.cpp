#include "cvlink/spectral.hpp"

#include "cvlink/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvlink {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kParameterTol = 1e-6;

std::string db_string(double db) { return format_number(db) + " dB"; }

// X-sum noise in dB through the full covariance pipeline, phases at the
// squeezed quadrature and no dark floor.
double xsum_db_at(const ScenarioConfig& base, const SourceSpectrumModel& model, double freq_mhz) {
  ScenarioConfig config = base;
  config.source = model;
  const GaussianState state = build_state_at(config, freq_mhz);
  return to_db(joint_variance(state, quadrature_sum(0, 1)).variance, 2.0);
}

// Smallest linewidth whose trace reaches crossing_db at the crossing
// frequency, or nullopt when even an arbitrarily broad cavity stays above it
// (pump too weak). The response is monotone: broader cavity -> lower noise at
// a fixed sideband.
std::optional<double> solve_linewidth(const ScenarioConfig& base, double pump_x,
                                      const CalibrationTargets& targets) {
  const auto residual = [&](double gamma) {
    return xsum_db_at(base, SourceSpectrumModel(pump_x, gamma), targets.crossing_freq_mhz) -
           targets.crossing_db;
  };
  double lo = targets.crossing_freq_mhz * 1e-6;
  double hi = targets.crossing_freq_mhz;
  int expansions = 0;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (++expansions > 60) {
      return std::nullopt;
    }
  }
  for (int i = 0; i < kMaxIterations && (hi - lo) > kParameterTol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SourceSpectrumModel calibrate_to_landmarks(const CalibrationTargets& targets,
                                           const ScenarioConfig& losses) {
  losses.validate();
  if (!(targets.ref_freq_mhz > 0.0) || !(targets.crossing_freq_mhz > targets.ref_freq_mhz)) {
    throw std::invalid_argument("calibration needs 0 < ref_freq < crossing_freq");
  }
  if (targets.target_db_at_ref == 0.0) {
    // pump off reproduces a flat 0 dB trace; the linewidth is unconstrained
    return SourceSpectrumModel(0.0, targets.crossing_freq_mhz);
  }
  if (!(targets.target_db_at_ref < 0.0) || !(targets.crossing_db < 0.0) ||
      !(targets.target_db_at_ref < targets.crossing_db)) {
    throw std::invalid_argument(
        "calibration landmarks must satisfy target_db < crossing_db < 0 (noise rises "
        "monotonically with sideband frequency)");
  }

  ScenarioConfig base = losses;
  base.phase_1550_rad = 0.0;
  base.phase_532_rad = 0.0;
  base.dark_floor_db.reset();
  base = [&] {
    ScenarioConfig resolved = base;
    resolved.vbs_t = resolve_vbs_t(base);
    resolved.vbs_setting = VbsSetting::explicit_t;
    return resolved;
  }();

  // loss-limited bound: even V- -> 0 cannot push the X-sum below 2 - K^2
  const double t = base.vbs_t;
  const double r = std::sqrt(1.0 - t * t);
  const double k_sum = t * base.arm_532.tau() + r * base.arm_1550.tau();
  const double bound_variance = 2.0 - k_sum * k_sum;
  const double bound_db = to_db(bound_variance, 2.0);
  for (double landmark_db : {targets.target_db_at_ref, targets.crossing_db}) {
    if (from_db(landmark_db, 2.0) <= bound_variance) {
      throw InfeasibleError("requested suppression " + db_string(landmark_db) +
                            " is below the loss-limited bound 2 - (t*tau_532 + r*tau_1550)^2 = " +
                            format_number(bound_variance) + " (" + db_string(bound_db) + ")");
    }
  }

  // outer bisection on the pump amplitude against the reference landmark;
  // the linewidth is re-solved against the crossing for every candidate
  const auto ref_residual = [&](double pump_x) {
    const auto gamma = solve_linewidth(base, pump_x, targets);
    if (!gamma) {
      return std::numeric_limits<double>::infinity();  // too little pump
    }
    return xsum_db_at(base, SourceSpectrumModel(pump_x, *gamma), targets.ref_freq_mhz) -
           targets.target_db_at_ref;
  };

  double lo = 0.0;         // residual > 0 (flat trace above the target)
  double hi = 1.0 - 1e-9;  // deepest available squeezing
  if (!(ref_residual(hi) < 0.0)) {
    throw InfeasibleError(
        "landmarks " + db_string(targets.target_db_at_ref) + " at " +
        format_number(targets.ref_freq_mhz) + " MHz with a " + db_string(targets.crossing_db) +
        " crossing at " + format_number(targets.crossing_freq_mhz) +
        " MHz are unreachable for any pump amplitude; loss-limited bound is " +
        db_string(bound_db));
  }
  for (int i = 0; i < kMaxIterations && (hi - lo) > kParameterTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ref_residual(mid) > 0.0 ? lo : hi) = mid;
  }
  const double pump_x = 0.5 * (lo + hi);
  const auto gamma = solve_linewidth(base, pump_x, targets);
  if (!gamma) {
    throw InfeasibleError("calibration failed to pin the crossing landmark at pump_x = " +
                          format_number(pump_x));
  }
  return SourceSpectrumModel(pump_x, *gamma);
}

TraceSeries spectrum_sweep(const ScenarioConfig& config, const FrequencyGrid& grid) {
  config.validate();
  ScenarioConfig resolved = config;
  resolved.vbs_t = resolve_vbs_t(config);
  resolved.vbs_setting = VbsSetting::explicit_t;
  const double floor = dark_floor_variance(config);

  TraceSeries trace;
  trace.axis_name = "freq_mhz";
  trace.axis = grid.values();
  TraceColumn xsum{"xsum_db", {}};
  TraceColumn pdiff{"pdiff_db", {}};
  xsum.values.reserve(trace.axis.size());
  pdiff.values.reserve(trace.axis.size());
  for (double freq : trace.axis) {
    const GaussianState state = build_state_at(resolved, freq);
    const double var_x = joint_variance(state, quadrature_sum(0, 1)).variance + floor;
    const double var_p = joint_variance(state, momentum_difference(0, 1)).variance + floor;
    xsum.values.push_back(to_db(var_x, 2.0));
    pdiff.values.push_back(to_db(var_p, 2.0));
  }
  trace.columns.push_back(std::move(xsum));
  trace.columns.push_back(std::move(pdiff));
  return trace;
}

}  // namespace cvlink
