#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cvlink {

// Sampled curve (phase scan or frequency sweep). Serializes to CSV with a
// mandatory header row, '.' decimal separator, ',' delimiter, LF line
// endings and 9 significant digits, so identical runs produce identical
// bytes. -infinity dB values (zero variance) are rendered as the
// `kBelowFloor` token instead of a non-finite number.

inline constexpr const char* kBelowFloor = "below_floor";

struct TraceColumn {
  std::string name;
  std::vector<double> values;
};

struct TraceSeries {
  std::string axis_name;
  std::vector<double> axis;
  std::vector<TraceColumn> columns;
  // set for sampled (Monte-Carlo) traces
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples_per_point;
};

/// `value` formatted with 9 significant digits ("%.9g"); negative zero is
/// normalized to "0".
std::string format_number(double value);

/// Like format_number but maps -infinity to the below-floor token.
std::string format_db(double value);

std::string trace_to_csv(const TraceSeries& trace);
std::string trace_to_json(const TraceSeries& trace);

}  // namespace cvlink
