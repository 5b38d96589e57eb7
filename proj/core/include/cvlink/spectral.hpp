#pragma once

#include "cvlink/scenario.hpp"
#include "cvlink/source.hpp"
#include "cvlink/trace.hpp"

// Spectral characterization on top of the scenario pipeline: frequency sweeps
// of the joint variances and calibration of the source model against measured
// landmarks (a suppression level at a reference sideband frequency plus the
// frequency where the trace crosses a given level).

namespace cvlink {

struct CalibrationTargets {
  double target_db_at_ref;   // e.g. -5.5 dB
  double ref_freq_mhz;       // e.g. 5 MHz
  double crossing_db;        // e.g. -3 dB
  double crossing_freq_mhz;  // e.g. 20 MHz
};

/// Finds a pure source model (escape efficiency 1) whose full-pipeline X-sum
/// noise hits `target_db_at_ref` at the reference frequency and crosses
/// `crossing_db` at the crossing frequency. The VBS transmittance and arm
/// efficiencies are taken from `losses`; detector phases and dark floor are
/// ignored (landmarks refer to the bare squeezed combination).
///
/// Nested bisection: the cavity linewidth is solved against the crossing for
/// each candidate pump amplitude, the pump amplitude against the reference
/// landmark (parameter tolerance 1e-6, at most 200 iterations each; both
/// responses are monotone on the bracketed ranges).
///
/// Throws InfeasibleError, naming the loss-limited bound
/// 2 - (t*tau_532 + r*tau_1550)^2, when a landmark is unreachable.
SourceSpectrumModel calibrate_to_landmarks(const CalibrationTargets& targets,
                                           const ScenarioConfig& losses);

/// Joint X-sum / P-diff noise (dB relative to the vacuum value 2) across the
/// frequency grid. The VBS is resolved once; a configured dark floor is added
/// per point in the power domain. Columns: xsum_db, pdiff_db.
TraceSeries spectrum_sweep(const ScenarioConfig& config, const FrequencyGrid& grid);

}  // namespace cvlink
