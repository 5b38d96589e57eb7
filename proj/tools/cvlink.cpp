// Command-line front end: evaluates the entanglement link model, generates
// phase-scan / spectrum / sampled traces, optimizes the beam splitter and
// calibrates the source against measured landmarks.

#include "cvlink/config.hpp"
#include "cvlink/criteria.hpp"
#include "cvlink/errors.hpp"
#include "cvlink/report.hpp"
#include "cvlink/sampling.hpp"
#include "cvlink/scenario.hpp"
#include "cvlink/spectral.hpp"
#include "cvlink/trace.hpp"
#include "cvlink/version.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

namespace {

using namespace cvlink;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path + "'");
  }
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("failed while reading '" + path + "'");
  }
  return content;
}

// Complete artifacts only: the content is rendered first, written to a
// sibling temp file and renamed into place.
void write_artifact(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path path(out_path);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    fs::remove(tmp, ec2);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() +
                  "': " + ec.message());
  }
}

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<double> frequency_mhz;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--config", opts->config_path,
                  "configuration file (defaults to the built-in reference setup)");
  cmd->add_option("--out", opts->out_path, "output file (stdout when omitted)");
  cmd->add_option("--format", opts->format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--frequency", opts->frequency_mhz, "analysis sideband frequency / MHz");
}

ConfigDocument load_config(const CommonOptions& opts) {
  ConfigDocument doc =
      opts.config_path.empty() ? default_config() : parse_config(read_file(opts.config_path));
  if (opts.frequency_mhz) {
    if (!(*opts.frequency_mhz >= 0.0)) {
      throw ConfigError(ConfigError::Kind::range, "--frequency must be >= 0");
    }
    doc.scenario.analysis_freq_mhz = *opts.frequency_mhz;
  }
  return doc;
}

std::string render_report(const ReportDocument& report, const std::string& format) {
  return format == "json" ? report_to_json(report) : report_to_csv(report);
}

std::string render_trace(const TraceSeries& trace, const std::string& format) {
  return format == "json" ? trace_to_json(trace) : trace_to_csv(trace);
}

struct GridOverrides {
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<std::uint64_t> points;

  bool any() const { return start || stop || points; }
};

FrequencyGrid apply_overrides(const FrequencyGrid& base, const GridOverrides& o) {
  try {
    return FrequencyGrid(o.start.value_or(base.start_mhz), o.stop.value_or(base.stop_mhz),
                         static_cast<std::size_t>(o.points.value_or(base.points)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigError::Kind::range, std::string("frequency grid: ") + e.what());
  }
}

PhaseGrid apply_overrides(const PhaseGrid& base, const GridOverrides& o) {
  try {
    return PhaseGrid(o.start.value_or(base.start_rad), o.stop.value_or(base.stop_rad),
                     static_cast<std::size_t>(o.points.value_or(base.points)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigError::Kind::range, std::string("phase grid: ") + e.what());
  }
}

double xsum_db(const ScenarioConfig& scenario, const SourceSpectrumModel& model,
               double freq_mhz) {
  ScenarioConfig probe = scenario;
  probe.source = model;
  probe.phase_1550_rad = 0.0;
  probe.phase_532_rad = 0.0;
  probe.dark_floor_db.reset();
  probe.vbs_t = resolve_vbs_t(probe);
  probe.vbs_setting = VbsSetting::explicit_t;
  const GaussianState state = build_state_at(probe, freq_mhz);
  return to_db(joint_variance(state, quadrature_sum(0, 1)).variance, 2.0);
}

std::string render_calibration(const SourceSpectrumModel& model, const CalibrationTargets& targets,
                               const ScenarioConfig& scenario, const std::string& format) {
  const double achieved_ref = xsum_db(scenario, model, targets.ref_freq_mhz);
  const double achieved_crossing = xsum_db(scenario, model, targets.crossing_freq_mhz);
  if (format == "json") {
    nlohmann::json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["calibrated_source"] = {{"pump_x", model.pump_x},
                              {"linewidth_mhz", model.linewidth_hwhm_mhz},
                              {"escape_eff", model.escape_efficiency}};
    j["targets"] = {{"target_db", targets.target_db_at_ref},
                    {"ref_freq_mhz", targets.ref_freq_mhz},
                    {"crossing_db", targets.crossing_db},
                    {"crossing_freq_mhz", targets.crossing_freq_mhz}};
    j["achieved"] = {{"db_at_ref", achieved_ref}, {"db_at_crossing", achieved_crossing}};
    return j.dump(2) + "\n";
  }
  std::string out = "key,value\n";
  const auto row = [&out](const std::string& key, double value) {
    out += key + ',' + format_number(value) + '\n';
  };
  out += std::string("tool.name,") + kToolName + "\n";
  out += std::string("tool.version,") + kToolVersion + "\n";
  row("calibrated_source.pump_x", model.pump_x);
  row("calibrated_source.linewidth_mhz", model.linewidth_hwhm_mhz);
  row("calibrated_source.escape_eff", model.escape_efficiency);
  row("targets.target_db", targets.target_db_at_ref);
  row("targets.ref_freq_mhz", targets.ref_freq_mhz);
  row("targets.crossing_db", targets.crossing_db);
  row("targets.crossing_freq_mhz", targets.crossing_freq_mhz);
  row("achieved.db_at_ref", achieved_ref);
  row("achieved.db_at_crossing", achieved_crossing);
  return out;
}

ScannedArm parse_scan_arm(const std::string& arm) {
  return arm == "1550" ? ScannedArm::arm_1550 : ScannedArm::arm_532;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-variable entanglement link simulator"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.footer("Exit codes: 0 ok, 2 configuration error, 3 infeasible target, 4 I/O failure.");
  app.require_subcommand(1);

  CommonOptions evaluate_opts;
  CLI::App* cmd_evaluate = app.add_subcommand(
      "evaluate", "Duan quantity and extremal joint variances at the operating point");
  add_common_options(cmd_evaluate, &evaluate_opts);

  CommonOptions optimize_opts;
  CLI::App* cmd_optimize =
      app.add_subcommand("optimize", "minimize the Duan quantity over the VBS transmittance");
  add_common_options(cmd_optimize, &optimize_opts);

  CommonOptions phase_opts;
  GridOverrides phase_grid;
  std::string phase_arm = "532";
  CLI::App* cmd_phase_scan =
      app.add_subcommand("phase-scan", "summed BHD noise versus a scanned detector phase");
  add_common_options(cmd_phase_scan, &phase_opts);
  cmd_phase_scan->add_option("--phase-start", phase_grid.start, "scan start / rad");
  cmd_phase_scan->add_option("--phase-stop", phase_grid.stop, "scan stop / rad");
  cmd_phase_scan->add_option("--phase-points", phase_grid.points, "scan points");
  cmd_phase_scan->add_option("--scan-arm", phase_arm, "detector whose phase is scanned")
      ->check(CLI::IsMember({"532", "1550"}))
      ->capture_default_str();

  CommonOptions spectrum_opts;
  GridOverrides freq_grid;
  CLI::App* cmd_spectrum =
      app.add_subcommand("spectrum", "joint X-sum / P-diff noise versus sideband frequency");
  add_common_options(cmd_spectrum, &spectrum_opts);
  cmd_spectrum->add_option("--freq-start", freq_grid.start, "sweep start / MHz");
  cmd_spectrum->add_option("--freq-stop", freq_grid.stop, "sweep stop / MHz");
  cmd_spectrum->add_option("--freq-points", freq_grid.points, "sweep points");

  CommonOptions calibrate_opts;
  CalibrationTargets targets{-5.5, 5.0, -3.0, 20.0};
  CLI::App* cmd_calibrate =
      app.add_subcommand("calibrate", "fit the source model to spectral landmarks");
  add_common_options(cmd_calibrate, &calibrate_opts);
  cmd_calibrate->add_option("--target-db", targets.target_db_at_ref, "suppression at the reference frequency / dB")
      ->capture_default_str();
  cmd_calibrate->add_option("--ref-freq-mhz", targets.ref_freq_mhz, "reference frequency / MHz")
      ->capture_default_str();
  cmd_calibrate->add_option("--crossing-db", targets.crossing_db, "crossing level / dB")
      ->capture_default_str();
  cmd_calibrate->add_option("--crossing-freq-mhz", targets.crossing_freq_mhz, "crossing frequency / MHz")
      ->capture_default_str();

  CommonOptions sample_opts;
  GridOverrides sample_grid;
  std::string sample_arm = "532";
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  CLI::App* cmd_sample = app.add_subcommand(
      "sample", "Monte-Carlo phase scan with statistical error bars");
  add_common_options(cmd_sample, &sample_opts);
  cmd_sample->add_option("--seed", seed, "random seed")->capture_default_str();
  cmd_sample->add_option("--samples", samples, "samples per scan point")->capture_default_str();
  cmd_sample->add_option("--phase-start", sample_grid.start, "scan start / rad");
  cmd_sample->add_option("--phase-stop", sample_grid.stop, "scan stop / rad");
  cmd_sample->add_option("--phase-points", sample_grid.points, "scan points");
  cmd_sample->add_option("--scan-arm", sample_arm, "detector whose phase is scanned")
      ->check(CLI::IsMember({"532", "1550"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_evaluate->parsed()) {
      const ConfigDocument doc = load_config(evaluate_opts);
      const ReportDocument report = make_report(doc, evaluate(doc.scenario));
      write_artifact(evaluate_opts.out_path, render_report(report, evaluate_opts.format));
    } else if (cmd_optimize->parsed()) {
      const ConfigDocument doc = load_config(optimize_opts);
      const ReportDocument report = make_report(doc, optimize_vbs(doc.scenario));
      write_artifact(optimize_opts.out_path, render_report(report, optimize_opts.format));
    } else if (cmd_phase_scan->parsed()) {
      const ConfigDocument doc = load_config(phase_opts);
      const PhaseGrid grid = apply_overrides(doc.analysis.phase, phase_grid);
      const TraceSeries trace = phase_scan(doc.scenario, grid, parse_scan_arm(phase_arm));
      write_artifact(phase_opts.out_path, render_trace(trace, phase_opts.format));
    } else if (cmd_spectrum->parsed()) {
      const ConfigDocument doc = load_config(spectrum_opts);
      const FrequencyGrid grid = apply_overrides(doc.analysis.sweep, freq_grid);
      const TraceSeries trace = spectrum_sweep(doc.scenario, grid);
      write_artifact(spectrum_opts.out_path, render_trace(trace, spectrum_opts.format));
    } else if (cmd_calibrate->parsed()) {
      const ConfigDocument doc = load_config(calibrate_opts);
      const SourceSpectrumModel model = calibrate_to_landmarks(targets, doc.scenario);
      write_artifact(calibrate_opts.out_path,
                     render_calibration(model, targets, doc.scenario, calibrate_opts.format));
    } else if (cmd_sample->parsed()) {
      const ConfigDocument doc = load_config(sample_opts);
      const PhaseGrid grid = apply_overrides(doc.analysis.phase, sample_grid);
      const TraceSeries trace =
          scan_with_noise(doc.scenario, grid, samples, seed, parse_scan_arm(sample_arm));
      write_artifact(sample_opts.out_path, render_trace(trace, sample_opts.format));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
