#pragma once

#include "cvlink/errors.hpp"
#include "cvlink/scenario.hpp"
#include "cvlink/source.hpp"

#include <numbers>
#include <string>

// Sectioned key = value configuration text with '#' comments. Unknown
// sections and keys are rejected; mutually exclusive alternatives ([source]
// decibel pair vs. pump model, [vbs] explicit t vs. directive) are enforced.
// Omitted keys fall back to the defaults below, which encode the reference
// experiment: ~90% up-conversion and 532 nm photodiode efficiencies, ~12%
// lumped losses on the direct arm, a balanced VBS, and a pure source
// calibrated so the joint squeezing reaches -5.5 dB at 5 MHz and crosses
// -3 dB at 20 MHz.

namespace cvlink {

/// Analysis ranges for the sweep/scan commands; the single-frequency setting
/// lives in ScenarioConfig::analysis_freq_mhz.
struct AnalysisSpec {
  FrequencyGrid sweep{0.5, 30.0, 60};
  PhaseGrid phase{0.0, 2.0 * std::numbers::pi, 181};

  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

/// Parsed configuration: the physical scenario plus analysis ranges.
/// A default-constructed document holds the full reference-experiment
/// defaults.
struct ConfigDocument {
  ScenarioConfig scenario;
  AnalysisSpec analysis;

  friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;
};

ConfigDocument default_config();

/// Parses configuration text. Throws ConfigError with the offending section
/// and key in the message.
ConfigDocument parse_config(const std::string& text);

/// Canonical serialization: every key explicit, shortest round-trip number
/// formatting, fixed section order. parse_config(serialize_config(d)) == d.
std::string serialize_config(const ConfigDocument& doc);

}  // namespace cvlink
