#include "cvlink/trace.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace cvlink {

namespace {

void check_consistent(const TraceSeries& trace) {
  for (const auto& col : trace.columns) {
    if (col.values.size() != trace.axis.size()) {
      throw std::invalid_argument("trace column '" + col.name +
                                  "' length does not match the axis");
    }
  }
}

nlohmann::json value_to_json(double v) {
  if (std::isinf(v) && v < 0.0) {
    return kBelowFloor;
  }
  return v;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) {
    value = 0.0;  // drop the sign of -0
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string format_db(double value) {
  if (std::isinf(value) && value < 0.0) {
    return kBelowFloor;
  }
  return format_number(value);
}

std::string trace_to_csv(const TraceSeries& trace) {
  check_consistent(trace);
  std::string out = trace.axis_name;
  for (const auto& col : trace.columns) {
    out += ',';
    out += col.name;
  }
  if (trace.samples_per_point) {
    out += ",n";
  }
  if (trace.seed) {
    out += ",seed";
  }
  out += '\n';
  for (std::size_t i = 0; i < trace.axis.size(); ++i) {
    out += format_number(trace.axis[i]);
    for (const auto& col : trace.columns) {
      out += ',';
      out += format_db(col.values[i]);
    }
    if (trace.samples_per_point) {
      out += ',';
      out += std::to_string(*trace.samples_per_point);
    }
    if (trace.seed) {
      out += ',';
      out += std::to_string(*trace.seed);
    }
    out += '\n';
  }
  return out;
}

std::string trace_to_json(const TraceSeries& trace) {
  check_consistent(trace);
  nlohmann::json j;
  j["axis"]["name"] = trace.axis_name;
  j["axis"]["values"] = trace.axis;
  j["columns"] = nlohmann::json::array();
  for (const auto& col : trace.columns) {
    nlohmann::json jc;
    jc["name"] = col.name;
    nlohmann::json values = nlohmann::json::array();
    for (double v : col.values) {
      values.push_back(value_to_json(v));
    }
    jc["values"] = std::move(values);
    j["columns"].push_back(std::move(jc));
  }
  if (trace.samples_per_point) {
    j["n"] = *trace.samples_per_point;
  }
  if (trace.seed) {
    j["seed"] = *trace.seed;
  }
  return j.dump(2) + "\n";
}

}  // namespace cvlink
