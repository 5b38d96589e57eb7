#include "cvlink/report.hpp"

#include "cvlink/errors.hpp"
#include "cvlink/trace.hpp"
#include "cvlink/version.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace cvlink {

namespace {

using nlohmann::json;

json db_to_json(double rel_db) {
  if (std::isinf(rel_db) && rel_db < 0.0) {
    return kBelowFloor;
  }
  return rel_db;
}

double db_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != kBelowFloor) {
      throw ConfigError(ConfigError::Kind::parse,
                        "report: unexpected dB token '" + j.get<std::string>() + "'");
    }
    return -std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

json noise_to_json(const NoiseLevel& nl) {
  return json{{"variance", nl.variance},
              {"reference_variance", nl.reference_variance},
              {"rel_db", db_to_json(nl.rel_db)}};
}

NoiseLevel noise_from_json(const json& j) {
  return NoiseLevel{j.at("variance").get<double>(), j.at("reference_variance").get<double>(),
                    db_from_json(j.at("rel_db"))};
}

json config_to_json(const ConfigDocument& doc) {
  json j;
  if (const auto* fixed = std::get_if<FixedSourceVariances>(&doc.scenario.source)) {
    j["source"] = {{"v_minus", fixed->v_minus}, {"v_plus", fixed->v_plus}};
  } else {
    const auto& model = std::get<SourceSpectrumModel>(doc.scenario.source);
    j["source"] = {{"pump_x", model.pump_x},
                   {"linewidth_mhz", model.linewidth_hwhm_mhz},
                   {"escape_eff", model.escape_efficiency}};
  }
  switch (doc.scenario.vbs_setting) {
    case VbsSetting::explicit_t:
      j["vbs"] = {{"t", doc.scenario.vbs_t}};
      break;
    case VbsSetting::balance:
      j["vbs"] = {{"mode", "balance"}};
      break;
    case VbsSetting::optimize:
      j["vbs"] = {{"mode", "optimize"}};
      break;
  }
  j["arm_1550"] = {{"efficiency_power", doc.scenario.arm_1550.efficiency_power}};
  j["arm_532"] = {{"sfg_efficiency_power", doc.scenario.arm_532.sfg_efficiency_power},
                  {"pd_efficiency_power", doc.scenario.arm_532.pd_efficiency_power},
                  {"extra_power", doc.scenario.arm_532.extra_power}};
  j["detection"] = {{"phase_1550_rad", doc.scenario.phase_1550_rad},
                    {"phase_532_rad", doc.scenario.phase_532_rad}};
  if (doc.scenario.dark_floor_db) {
    j["detection"]["dark_floor_db"] = *doc.scenario.dark_floor_db;
  }
  j["analysis"] = {{"frequency_mhz", doc.scenario.analysis_freq_mhz},
                   {"sweep_start_mhz", doc.analysis.sweep.start_mhz},
                   {"sweep_stop_mhz", doc.analysis.sweep.stop_mhz},
                   {"sweep_points", doc.analysis.sweep.points},
                   {"phase_start_rad", doc.analysis.phase.start_rad},
                   {"phase_stop_rad", doc.analysis.phase.stop_rad},
                   {"phase_points", doc.analysis.phase.points}};
  return j;
}

ConfigDocument config_from_json(const json& j) {
  ConfigDocument doc;
  const json& source = j.at("source");
  if (source.contains("pump_x")) {
    doc.scenario.source =
        SourceSpectrumModel(source.at("pump_x").get<double>(),
                            source.at("linewidth_mhz").get<double>(),
                            source.at("escape_eff").get<double>());
  } else {
    doc.scenario.source = FixedSourceVariances{source.at("v_minus").get<double>(),
                                               source.at("v_plus").get<double>()};
  }
  const json& vbs = j.at("vbs");
  if (vbs.contains("t")) {
    doc.scenario.vbs_setting = VbsSetting::explicit_t;
    doc.scenario.vbs_t = vbs.at("t").get<double>();
  } else {
    const std::string mode = vbs.at("mode").get<std::string>();
    if (mode == "balance") {
      doc.scenario.vbs_setting = VbsSetting::balance;
    } else if (mode == "optimize") {
      doc.scenario.vbs_setting = VbsSetting::optimize;
    } else {
      throw ConfigError(ConfigError::Kind::parse, "report: unknown vbs mode '" + mode + "'");
    }
  }
  doc.scenario.arm_1550.efficiency_power = j.at("arm_1550").at("efficiency_power").get<double>();
  const json& arm_532 = j.at("arm_532");
  doc.scenario.arm_532.sfg_efficiency_power = arm_532.at("sfg_efficiency_power").get<double>();
  doc.scenario.arm_532.pd_efficiency_power = arm_532.at("pd_efficiency_power").get<double>();
  doc.scenario.arm_532.extra_power = arm_532.at("extra_power").get<double>();
  const json& detection = j.at("detection");
  doc.scenario.phase_1550_rad = detection.at("phase_1550_rad").get<double>();
  doc.scenario.phase_532_rad = detection.at("phase_532_rad").get<double>();
  if (detection.contains("dark_floor_db")) {
    doc.scenario.dark_floor_db = detection.at("dark_floor_db").get<double>();
  }
  const json& analysis = j.at("analysis");
  doc.scenario.analysis_freq_mhz = analysis.at("frequency_mhz").get<double>();
  doc.analysis.sweep = FrequencyGrid(analysis.at("sweep_start_mhz").get<double>(),
                                     analysis.at("sweep_stop_mhz").get<double>(),
                                     analysis.at("sweep_points").get<std::size_t>());
  doc.analysis.phase = PhaseGrid(analysis.at("phase_start_rad").get<double>(),
                                 analysis.at("phase_stop_rad").get<double>(),
                                 analysis.at("phase_points").get<std::size_t>());
  return doc;
}

json operating_point_to_json(const OperatingPoint& op) {
  json j;
  j["t"] = op.t;
  j["r"] = op.r;
  j["phase_1550_rad"] = op.phase_1550_rad;
  j["phase_532_rad"] = op.phase_532_rad;
  j["analysis_freq_mhz"] = op.analysis_freq_mhz;
  j["v_minus"] = op.v_minus;
  j["v_plus"] = op.v_plus;
  j["duan"] = {{"var_x_sum", op.duan.var_x_sum},
               {"var_p_diff", op.duan.var_p_diff},
               {"i_value", op.duan.i_value},
               {"entangled", op.duan.entangled}};
  j["points"] = {{"A", noise_to_json(op.point_a)},
                 {"B", noise_to_json(op.point_b)},
                 {"C", noise_to_json(op.point_c)},
                 {"D", noise_to_json(op.point_d)}};
  if (op.balance_t) {
    j["balance_t"] = *op.balance_t;
  }
  if (op.balance_i) {
    j["balance_i"] = *op.balance_i;
  }
  if (!op.note.empty()) {
    j["note"] = op.note;
  }
  return j;
}

OperatingPoint operating_point_from_json(const json& j) {
  OperatingPoint op;
  op.t = j.at("t").get<double>();
  op.r = j.at("r").get<double>();
  op.phase_1550_rad = j.at("phase_1550_rad").get<double>();
  op.phase_532_rad = j.at("phase_532_rad").get<double>();
  op.analysis_freq_mhz = j.at("analysis_freq_mhz").get<double>();
  op.v_minus = j.at("v_minus").get<double>();
  op.v_plus = j.at("v_plus").get<double>();
  const json& duan = j.at("duan");
  op.duan = DuanResult{duan.at("var_x_sum").get<double>(), duan.at("var_p_diff").get<double>(),
                       duan.at("i_value").get<double>(), duan.at("entangled").get<bool>()};
  const json& points = j.at("points");
  op.point_a = noise_from_json(points.at("A"));
  op.point_b = noise_from_json(points.at("B"));
  op.point_c = noise_from_json(points.at("C"));
  op.point_d = noise_from_json(points.at("D"));
  if (j.contains("balance_t")) {
    op.balance_t = j.at("balance_t").get<double>();
  }
  if (j.contains("balance_i")) {
    op.balance_i = j.at("balance_i").get<double>();
  }
  if (j.contains("note")) {
    op.note = j.at("note").get<std::string>();
  }
  return op;
}

}  // namespace

ReportDocument make_report(const ConfigDocument& doc, const OperatingPoint& op) {
  ReportDocument report;
  report.tool_name = kToolName;
  report.tool_version = kToolVersion;
  report.config = doc;
  report.config.scenario.vbs_setting = VbsSetting::explicit_t;
  report.config.scenario.vbs_t = op.t;
  report.operating_point = op;
  return report;
}

std::string report_to_json(const ReportDocument& report) {
  json j;
  j["tool"] = {{"name", report.tool_name}, {"version", report.tool_version}};
  j["config"] = config_to_json(report.config);
  j["operating_point"] = operating_point_to_json(report.operating_point);
  if (report.seed) {
    j["seed"] = *report.seed;
  }
  if (report.samples) {
    j["samples"] = *report.samples;
  }
  return j.dump(2) + "\n";
}

ReportDocument report_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
    ReportDocument report;
    report.tool_name = j.at("tool").at("name").get<std::string>();
    report.tool_version = j.at("tool").at("version").get<std::string>();
    report.config = config_from_json(j.at("config"));
    report.operating_point = operating_point_from_json(j.at("operating_point"));
    if (j.contains("seed")) {
      report.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("samples")) {
      report.samples = j.at("samples").get<std::uint64_t>();
    }
    return report;
  } catch (const json::exception& e) {
    throw ConfigError(ConfigError::Kind::parse, std::string("report JSON: ") + e.what());
  }
}

std::string report_to_csv(const ReportDocument& report) {
  std::string out = "key,value\n";
  const auto row = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += ',';
    out += value;
    out += '\n';
  };
  const auto num = [&row](const std::string& key, double value) {
    row(key, format_number(value));
  };
  const auto noise = [&](const std::string& prefix, const NoiseLevel& nl) {
    num(prefix + ".variance", nl.variance);
    num(prefix + ".reference_variance", nl.reference_variance);
    row(prefix + ".rel_db", format_db(nl.rel_db));
  };

  row("tool.name", report.tool_name);
  row("tool.version", report.tool_version);
  const OperatingPoint& op = report.operating_point;
  num("operating_point.t", op.t);
  num("operating_point.r", op.r);
  num("operating_point.phase_1550_rad", op.phase_1550_rad);
  num("operating_point.phase_532_rad", op.phase_532_rad);
  num("operating_point.analysis_freq_mhz", op.analysis_freq_mhz);
  num("operating_point.v_minus", op.v_minus);
  num("operating_point.v_plus", op.v_plus);
  num("duan.var_x_sum", op.duan.var_x_sum);
  num("duan.var_p_diff", op.duan.var_p_diff);
  num("duan.i_value", op.duan.i_value);
  row("duan.entangled", op.duan.entangled ? "true" : "false");
  noise("points.A", op.point_a);
  noise("points.B", op.point_b);
  noise("points.C", op.point_c);
  noise("points.D", op.point_d);
  if (op.balance_t) {
    num("balance.t", *op.balance_t);
  }
  if (op.balance_i) {
    num("balance.i_value", *op.balance_i);
  }
  if (!op.note.empty()) {
    row("note", op.note);
  }
  if (report.seed) {
    row("seed", std::to_string(*report.seed));
  }
  if (report.samples) {
    row("samples", std::to_string(*report.samples));
  }
  return out;
}

}  // namespace cvlink
