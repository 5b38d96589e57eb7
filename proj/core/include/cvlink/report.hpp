#pragma once

#include "cvlink/config.hpp"
#include "cvlink/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cvlink {

/// Evaluation record: the resolved configuration, the operating point with
/// the Duan result and the extremal joint variances, and provenance. The JSON
/// form round-trips losslessly through report_from_json.
struct ReportDocument {
  std::string tool_name;
  std::string tool_version;
  ConfigDocument config;  // with the VBS resolved to an explicit transmittance
  OperatingPoint operating_point;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

/// Assembles a report, echoing `doc` with the VBS pinned to the evaluated
/// transmittance.
ReportDocument make_report(const ConfigDocument& doc, const OperatingPoint& op);

std::string report_to_json(const ReportDocument& report);
ReportDocument report_from_json(const std::string& json_text);

/// Flat key,value CSV export (9 significant digits).
std::string report_to_csv(const ReportDocument& report);

}  // namespace cvlink
