#pragma once

#include <cstddef>
#include <vector>

// Frequency-dependent squeezer model: a below-threshold OPA with normalized
// pump amplitude x, cavity half linewidth gamma (HWHM, MHz) and escape
// efficiency eta. Squeezed / anti-squeezed variances at sideband frequency
// Omega (MHz):
//
//   V-(Omega) = 1 - eta * 4x / ((1+x)^2 + (Omega/gamma)^2)
//   V+(Omega) = 1 + eta * 4x / ((1-x)^2 + (Omega/gamma)^2)
//
// At eta = 1 the output is pure, V- * V+ = 1 at every sideband.

namespace cvlink {

struct SourceSpectrumModel {
  double pump_x = 0.0;             // [0, 1)
  double linewidth_hwhm_mhz = 1.0; // > 0
  double escape_efficiency = 1.0;  // (0, 1]

  SourceSpectrumModel() = default;
  SourceSpectrumModel(double pump_x, double linewidth_hwhm_mhz, double escape_efficiency = 1.0);

  friend bool operator==(const SourceSpectrumModel&, const SourceSpectrumModel&) = default;
};

struct SourceVariances {
  double v_minus;
  double v_plus;
};

/// V-(omega), V+(omega) for a sideband frequency in MHz (>= 0).
SourceVariances source_variances(const SourceSpectrumModel& model, double omega_mhz);

/// Linearly spaced sideband frequency grid, endpoints included.
struct FrequencyGrid {
  double start_mhz;
  double stop_mhz;
  std::size_t points;

  FrequencyGrid(double start_mhz, double stop_mhz, std::size_t points);
  std::vector<double> values() const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

}  // namespace cvlink
