#pragma once

#include "cvlink/criteria.hpp"
#include "cvlink/gaussian.hpp"
#include "cvlink/source.hpp"
#include "cvlink/trace.hpp"

#include <optional>
#include <string>
#include <variant>

// The dual-wavelength entanglement link: a squeezed-vacuum source split on a
// variable beam splitter, one output up-converted (modeled as a pure
// efficiency) and both arms read out by balanced homodyne detectors whose
// summed signal is analyzed.
//
// Mode convention of the assembled two-mode state:
//   mode 0 = direct 1550 nm arm (VBS reflection, amplitude r * tau_1550)
//   mode 1 = up-converted 532 nm arm (VBS transmission, amplitude t * tau_532)
//
// In closed form the joint variances are
//   Var[x_1550 + x_532] = 2 - (1 - V-) (t*tau_532 + r*tau_1550)^2
//   Var[p_1550 - p_532] = 2 + (V+ - 1) (t*tau_532 - r*tau_1550)^2
// with r = sqrt(1 - t^2).

namespace cvlink {

/// Frequency-independent source: variances of the squeezed / anti-squeezed
/// quadratures entering the VBS.
struct FixedSourceVariances {
  double v_minus;
  double v_plus;

  friend bool operator==(const FixedSourceVariances&, const FixedSourceVariances&) = default;
};

using SourceSpec = std::variant<FixedSourceVariances, SourceSpectrumModel>;

enum class VbsSetting { explicit_t, balance, optimize };

/// Up-conversion arm efficiencies (powers). The amplitude transmittance
/// tau_532 is the square root of their product.
struct UpconversionArm {
  double sfg_efficiency_power = 0.9;
  double pd_efficiency_power = 0.9;
  double extra_power = 1.0;

  double tau() const;

  friend bool operator==(const UpconversionArm&, const UpconversionArm&) = default;
};

/// Direct arm lumped power efficiency; tau_1550 = sqrt(efficiency_power).
struct DirectArm {
  double efficiency_power = 0.88;

  double tau() const;

  friend bool operator==(const DirectArm&, const DirectArm&) = default;
};

// Pure-source defaults calibrated against the default arm efficiencies so the
// joint squeezing reaches -5.5 dB at 5 MHz and crosses -3 dB at 20 MHz.
inline constexpr double kDefaultPumpX = 0.4808057246789366;
inline constexpr double kDefaultLinewidthMhz = 19.429313860656904;

struct ScenarioConfig {
  SourceSpec source = SourceSpectrumModel(kDefaultPumpX, kDefaultLinewidthMhz);
  VbsSetting vbs_setting = VbsSetting::balance;
  double vbs_t = 0.0;  // meaningful only with VbsSetting::explicit_t
  UpconversionArm arm_532;
  DirectArm arm_1550;
  double phase_1550_rad = 0.0;
  double phase_532_rad = 0.0;
  double analysis_freq_mhz = 5.0;
  std::optional<double> dark_floor_db;

  void validate() const;  // throws std::invalid_argument

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Source variances at the given sideband frequency (fixed sources ignore it).
SourceVariances resolve_source_variances(const ScenarioConfig& config, double omega_mhz);

/// VBS transmittance canceling the anti-squeezed noise in p_1550 - p_532:
/// t = tau_1550 / sqrt(tau_532^2 + tau_1550^2), so t*tau_532 = r*tau_1550.
double solve_balance(double tau_532, double tau_1550);

struct JointVariances {
  double var_x_sum;
  double var_p_diff;
};

/// Closed-form joint variances (see header comment). v_minus/v_plus are the
/// source variances, t the VBS amplitude transmittance, taus the effective
/// overall arm amplitude transmittances.
JointVariances analytic_variances(double v_minus, double v_plus, double t, double tau_532,
                                  double tau_1550);

/// Assembles the two-mode output state by composing the elementary maps:
/// squeezer (+ escape loss) -> beam splitter -> arm losses -> detector
/// phases. Requires an explicit VBS transmittance; directives must be
/// resolved first (resolve_vbs_t / evaluate).
GaussianState build_state(const ScenarioConfig& config);

/// Same pipeline evaluated at an explicit sideband frequency.
GaussianState build_state_at(const ScenarioConfig& config, double omega_mhz);

/// Resolved VBS transmittance: explicit value, balance solution, or
/// optimizer result.
double resolve_vbs_t(const ScenarioConfig& config);

struct OperatingPoint {
  double t = 0.0;
  double r = 0.0;  // sqrt(1 - t^2)
  double phase_1550_rad = 0.0;
  double phase_532_rad = 0.0;
  double analysis_freq_mhz = 0.0;
  double v_minus = 1.0;
  double v_plus = 1.0;
  DuanResult duan{};
  // extremal joint variances: A = x+x, B = x-x, C = p+p, D = p-p
  NoiseLevel point_a{};
  NoiseLevel point_b{};
  NoiseLevel point_c{};
  NoiseLevel point_d{};
  // present when the VBS was optimized
  std::optional<double> balance_t;
  std::optional<double> balance_i;
  std::string note;

  friend bool operator==(const OperatingPoint&, const OperatingPoint&) = default;
};

/// Builds the state at the resolved operating point and evaluates the Duan
/// quantity plus the four extremal joint variances.
OperatingPoint evaluate(const ScenarioConfig& config);

/// Minimizes I(t) over t in [0, 1] by golden-section search (|dt| < 1e-9).
/// Reports the balance point alongside; returns the balance point with a
/// "flat objective" note when the source is not squeezed.
OperatingPoint optimize_vbs(const ScenarioConfig& config);

/// Linearly spaced detector phase grid, endpoints included.
struct PhaseGrid {
  double start_rad;
  double stop_rad;
  std::size_t points;

  PhaseGrid(double start_rad, double stop_rad, std::size_t points);
  std::vector<double> values() const;

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

enum class ScannedArm { arm_532, arm_1550 };

/// Relative noise power (dB, vacuum reference 2) of the summed BHD signals
/// while one detector phase is scanned and the other is fixed at its
/// configured value. An optional dark floor is added in the power domain.
TraceSeries phase_scan(const ScenarioConfig& config, const PhaseGrid& grid,
                       ScannedArm scanned = ScannedArm::arm_532);

/// Dark floor contribution 2 * 10^(floor_db/10) added to measured variances
/// (vacuum-referenced power); zero when no floor is configured.
double dark_floor_variance(const ScenarioConfig& config);

}  // namespace cvlink
