#include "cvlink/scenario.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace cvlink {

namespace {

struct SourcePreparation {
  double squeeze_r;
  double escape_eta;
};

// Realizes a diagonal source covariance diag(V-, V+) as a squeezer followed
// by a loss channel: V-+ = eta * e^{-+2r} + (1 - eta). Inverting gives
//   e^{2r} = (V+ - 1) / (1 - V-),   eta = (1 - V-)(V+ - 1) / (V+ + V- - 2).
// eta = 1 exactly when V- * V+ = 1 (pure squeezed vacuum).
SourcePreparation source_preparation(const SourceVariances& v) {
  const double vm = v.v_minus;
  const double vp = v.v_plus;
  if (!(vm > 0.0) || !(vp > 0.0) || !std::isfinite(vm) || !std::isfinite(vp)) {
    throw std::invalid_argument("source variances must be positive and finite");
  }
  if (vm == 1.0 && vp == 1.0) {
    return SourcePreparation{0.0, 1.0};
  }
  if (!(vm < 1.0 && vp > 1.0)) {
    throw std::invalid_argument(
        "source variances must satisfy V- < 1 < V+ (or V- = V+ = 1); got V- = " +
        std::to_string(vm) + ", V+ = " + std::to_string(vp));
  }
  if (vm * vp < 1.0 - 1e-9) {
    throw std::invalid_argument("source variances violate the uncertainty relation: V-*V+ = " +
                                std::to_string(vm * vp) + " < 1");
  }
  const double r = 0.5 * std::log((vp - 1.0) / (1.0 - vm));
  double eta = (1.0 - vm) * (vp - 1.0) / (vp + vm - 2.0);
  if (eta > 1.0) {
    eta = 1.0;  // round-off for pure pairs
  }
  return SourcePreparation{r, eta};
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(value));
  }
}

ScenarioConfig with_explicit_t(const ScenarioConfig& config, double t) {
  ScenarioConfig resolved = config;
  resolved.vbs_setting = VbsSetting::explicit_t;
  resolved.vbs_t = t;
  return resolved;
}

}  // namespace

double UpconversionArm::tau() const {
  return std::sqrt(sfg_efficiency_power * pd_efficiency_power * extra_power);
}

double DirectArm::tau() const { return std::sqrt(efficiency_power); }

void ScenarioConfig::validate() const {
  if (const auto* fixed = std::get_if<FixedSourceVariances>(&source)) {
    if (!(fixed->v_minus > 0.0) || !std::isfinite(fixed->v_minus) ||
        !std::isfinite(fixed->v_plus)) {
      throw std::invalid_argument("fixed source variances must be positive and finite");
    }
    if (!(fixed->v_minus <= 1.0) || !(fixed->v_plus >= 1.0)) {
      throw std::invalid_argument("fixed source needs V- <= 1 <= V+");
    }
  } else {
    const auto& model = std::get<SourceSpectrumModel>(source);
    // re-validate: aggregate initialization can bypass the checked constructor
    SourceSpectrumModel(model.pump_x, model.linewidth_hwhm_mhz, model.escape_efficiency);
  }
  if (vbs_setting == VbsSetting::explicit_t) {
    require_unit_interval(vbs_t, "[vbs] t");
  }
  require_unit_interval(arm_532.sfg_efficiency_power, "[arm_532] sfg_efficiency_power");
  require_unit_interval(arm_532.pd_efficiency_power, "[arm_532] pd_efficiency_power");
  require_unit_interval(arm_532.extra_power, "[arm_532] extra_power");
  require_unit_interval(arm_1550.efficiency_power, "[arm_1550] efficiency_power");
  if (!std::isfinite(phase_1550_rad) || !std::isfinite(phase_532_rad)) {
    throw std::invalid_argument("detector phases must be finite");
  }
  if (!(analysis_freq_mhz >= 0.0)) {
    throw std::invalid_argument("analysis frequency must be non-negative");
  }
  if (dark_floor_db && !std::isfinite(*dark_floor_db)) {
    throw std::invalid_argument("dark_floor_db must be finite");
  }
}

SourceVariances resolve_source_variances(const ScenarioConfig& config, double omega_mhz) {
  if (!(omega_mhz >= 0.0)) {
    throw std::invalid_argument("sideband frequency must be non-negative");
  }
  if (const auto* fixed = std::get_if<FixedSourceVariances>(&config.source)) {
    return SourceVariances{fixed->v_minus, fixed->v_plus};
  }
  return source_variances(std::get<SourceSpectrumModel>(config.source), omega_mhz);
}

double solve_balance(double tau_532, double tau_1550) {
  require_unit_interval(tau_532, "tau_532");
  require_unit_interval(tau_1550, "tau_1550");
  if (tau_532 == 0.0 && tau_1550 == 0.0) {
    throw std::invalid_argument("balance condition is undefined when both arms are fully lossy");
  }
  return tau_1550 / std::hypot(tau_532, tau_1550);
}

JointVariances analytic_variances(double v_minus, double v_plus, double t, double tau_532,
                                  double tau_1550) {
  if (!(v_minus > 0.0) || !std::isfinite(v_minus)) {
    throw std::invalid_argument("v_minus must be positive and finite");
  }
  if (!(v_plus >= 1.0 - 1e-12) || !std::isfinite(v_plus)) {
    throw std::invalid_argument("v_plus must be >= 1");
  }
  require_unit_interval(t, "t");
  require_unit_interval(tau_532, "tau_532");
  require_unit_interval(tau_1550, "tau_1550");
  const double r = std::sqrt(1.0 - t * t);
  const double sum_amp = t * tau_532 + r * tau_1550;
  const double diff_amp = t * tau_532 - r * tau_1550;
  return JointVariances{2.0 - (1.0 - v_minus) * sum_amp * sum_amp,
                        2.0 + (v_plus - 1.0) * diff_amp * diff_amp};
}

GaussianState build_state(const ScenarioConfig& config) {
  return build_state_at(config, config.analysis_freq_mhz);
}

GaussianState build_state_at(const ScenarioConfig& config, double omega_mhz) {
  config.validate();
  if (config.vbs_setting != VbsSetting::explicit_t) {
    throw std::invalid_argument(
        "VBS directive is not resolved; use resolve_vbs_t or evaluate first");
  }
  const SourceVariances v = resolve_source_variances(config, omega_mhz);
  const SourcePreparation prep = source_preparation(v);

  // squeezed source enters the VBS on mode 1, vacuum on mode 0; VBS output
  // mode 1 = t * source + ... (transmission towards the up-conversion arm)
  GaussianState state = make_vacuum(2);
  if (prep.squeeze_r != 0.0) {
    state = apply_squeezer(state, 1, prep.squeeze_r, 0.0);
  }
  if (prep.escape_eta < 1.0) {
    state = apply_loss(state, LossChannel(1, prep.escape_eta));
  }
  state = apply_beamsplitter(state, 0, 1, config.vbs_t);
  state = apply_loss(state, LossChannel(0, config.arm_1550.efficiency_power));
  state = apply_loss(state, LossChannel(1, config.arm_532.sfg_efficiency_power *
                                               config.arm_532.pd_efficiency_power *
                                               config.arm_532.extra_power));
  if (config.phase_1550_rad != 0.0) {
    state = apply_phase(state, 0, config.phase_1550_rad);
  }
  if (config.phase_532_rad != 0.0) {
    state = apply_phase(state, 1, config.phase_532_rad);
  }
  return state;
}

double resolve_vbs_t(const ScenarioConfig& config) {
  switch (config.vbs_setting) {
    case VbsSetting::explicit_t:
      return config.vbs_t;
    case VbsSetting::balance:
      return solve_balance(config.arm_532.tau(), config.arm_1550.tau());
    case VbsSetting::optimize:
      return optimize_vbs(config).t;
  }
  throw std::logic_error("unknown VBS setting");
}

OperatingPoint evaluate(const ScenarioConfig& config) {
  config.validate();
  if (config.vbs_setting == VbsSetting::optimize) {
    return optimize_vbs(config);
  }
  const double t = resolve_vbs_t(config);
  const ScenarioConfig resolved = with_explicit_t(config, t);
  const GaussianState state = build_state(resolved);
  const SourceVariances v = resolve_source_variances(config, config.analysis_freq_mhz);

  OperatingPoint op;
  op.t = t;
  op.r = std::sqrt(1.0 - t * t);
  op.phase_1550_rad = config.phase_1550_rad;
  op.phase_532_rad = config.phase_532_rad;
  op.analysis_freq_mhz = config.analysis_freq_mhz;
  op.v_minus = v.v_minus;
  op.v_plus = v.v_plus;
  op.duan = duan_i(state, 0, 1);
  op.point_a = joint_variance(state, quadrature_sum(0, 1));
  op.point_b = joint_variance(state, quadrature_difference(0, 1));
  op.point_c = joint_variance(state, momentum_sum(0, 1));
  op.point_d = joint_variance(state, momentum_difference(0, 1));
  return op;
}

OperatingPoint optimize_vbs(const ScenarioConfig& config) {
  config.validate();
  const SourceVariances v = resolve_source_variances(config, config.analysis_freq_mhz);
  const double tau_532 = config.arm_532.tau();
  const double tau_1550 = config.arm_1550.tau();
  const double t_balance = solve_balance(tau_532, tau_1550);
  const auto objective = [&](double t) {
    const JointVariances jv = analytic_variances(v.v_minus, v.v_plus, t, tau_532, tau_1550);
    return jv.var_x_sum + jv.var_p_diff;
  };

  double t_star = t_balance;
  std::string note;
  if (v.v_minus >= 1.0) {
    note = "flat objective: source is not squeezed, returning the balance point";
  } else {
    // I(t) reduces to c0 + c1*cos(2*asin(t) + c2), so it is unimodal on [0, 1]
    t_star = golden_section_min(objective, 0.0, 1.0, 1e-9);
    if (objective(t_balance) <= objective(t_star)) {
      t_star = t_balance;  // ties go to the balance point
    }
  }

  OperatingPoint op = evaluate(with_explicit_t(config, t_star));
  op.balance_t = t_balance;
  op.balance_i = objective(t_balance);
  op.note = note;
  return op;
}

PhaseGrid::PhaseGrid(double start_rad_, double stop_rad_, std::size_t points_)
    : start_rad(start_rad_), stop_rad(stop_rad_), points(points_) {
  if (!std::isfinite(start_rad) || !std::isfinite(stop_rad) || !(start_rad < stop_rad)) {
    throw std::invalid_argument("phase grid needs finite start < stop");
  }
  if (points < 2) {
    throw std::invalid_argument("phase grid needs at least 2 points");
  }
}

std::vector<double> PhaseGrid::values() const {
  std::vector<double> phases(points);
  const double step = (stop_rad - start_rad) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    phases[i] = start_rad + static_cast<double>(i) * step;
  }
  phases.back() = stop_rad;
  return phases;
}

double dark_floor_variance(const ScenarioConfig& config) {
  return config.dark_floor_db ? from_db(*config.dark_floor_db, 2.0) : 0.0;
}

TraceSeries phase_scan(const ScenarioConfig& config, const PhaseGrid& grid, ScannedArm scanned) {
  config.validate();
  const double t = resolve_vbs_t(config);

  // detector phases enter through the measured observables below
  ScenarioConfig unrotated = with_explicit_t(config, t);
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
  TraceColumn sum_db{"sum_db", {}};
  sum_db.values.reserve(trace.axis.size());
  for (double phi : trace.axis) {
    const JointCombination combo{{{QuadratureObservable(fixed_mode, fixed_phase), 1.0},
                                  {QuadratureObservable(scan_mode, phi), 1.0}}};
    const double variance = joint_variance(state, combo).variance + floor;
    sum_db.values.push_back(variance == 0.0 ? -std::numeric_limits<double>::infinity()
                                            : to_db(variance, 2.0));
  }
  trace.columns.push_back(std::move(sum_db));
  return trace;
}

}  // namespace cvlink
