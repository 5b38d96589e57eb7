#include "cvlink/config.hpp"

#include "cvlink/criteria.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace cvlink {

namespace {

using Kind = ConfigError::Kind;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

// section -> key -> value, with strict duplicate / placement checks
using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections tokenize(const std::string& text) {
  Sections sections;
  std::istringstream stream(text);
  std::string line;
  std::string current;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(Kind::parse,
                          "line " + std::to_string(line_no) + ": malformed section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      sections.try_emplace(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(Kind::parse, "line " + std::to_string(line_no) +
                                         ": expected 'key = value', got '" + line + "'");
    }
    if (current.empty()) {
      throw ConfigError(Kind::parse,
                        "line " + std::to_string(line_no) + ": key outside of any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(Kind::parse,
                        "line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!sections[current].emplace(key, value).second) {
      throw ConfigError(Kind::conflict, "[" + current + "] duplicate key '" + key + "'");
    }
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const Sections& sections, std::string name) : name_(std::move(name)) {
    if (const auto it = sections.find(name_); it != sections.end()) {
      entries_ = &it->second;
    }
  }

  bool present() const { return entries_ != nullptr; }

  bool has(const std::string& key) const {
    const bool found = entries_ && entries_->count(key) > 0;
    if (found) {
      seen_.push_back(key);
    }
    return found;
  }

  double number(const std::string& key) const {
    const std::string& raw = entries_->at(key);
    double value = 0.0;
    const char* begin = raw.data();
    const char* end = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(Kind::parse, where(key) + ": '" + raw + "' is not a number");
    }
    return value;
  }

  std::size_t count(const std::string& key) const {
    const std::string& raw = entries_->at(key);
    std::size_t value = 0;
    const char* begin = raw.data();
    const char* end = raw.data() + raw.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(Kind::parse, where(key) + ": '" + raw + "' is not a positive integer");
    }
    return value;
  }

  std::string text(const std::string& key) const { return entries_->at(key); }

  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void reject_unknown() const {
    if (!entries_) {
      return;
    }
    for (const auto& [key, value] : *entries_) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ConfigError(Kind::unknown_key, "[" + name_ + "] unknown key '" + key + "'");
      }
    }
  }

 private:
  std::string name_;
  const std::map<std::string, std::string>* entries_ = nullptr;
  mutable std::vector<std::string> seen_;
};

double read_unit_interval(const SectionReader& section, const std::string& key,
                          double fallback) {
  if (!section.has(key)) {
    return fallback;
  }
  const double value = section.number(key);
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(Kind::range,
                      section.where(key) + ": value " + format_number(value) +
                          " outside [0, 1]");
  }
  return value;
}

SourceSpec parse_source(const SectionReader& section) {
  if (!section.present()) {
    return ScenarioConfig{}.source;
  }
  const bool has_sq = section.has("squeezing_db");
  const bool has_asq = section.has("antisqueezing_db");
  const bool has_pump = section.has("pump_x");
  const bool has_lw = section.has("linewidth_mhz");
  const bool has_esc = section.has("escape_eff");
  const bool db_form = has_sq || has_asq;
  const bool model_form = has_pump || has_lw || has_esc;
  if (db_form && model_form) {
    throw ConfigError(Kind::conflict,
                      "[source] squeezing_db/antisqueezing_db conflict with the "
                      "pump_x/linewidth_mhz/escape_eff model");
  }
  if (db_form) {
    if (!has_sq || !has_asq) {
      throw ConfigError(Kind::missing,
                        "[source] squeezing_db and antisqueezing_db must be given together");
    }
    const double sq_db = section.number("squeezing_db");
    const double asq_db = section.number("antisqueezing_db");
    if (!(sq_db <= 0.0)) {
      throw ConfigError(Kind::range, section.where("squeezing_db") +
                                         ": must be <= 0 dB (below vacuum)");
    }
    if (!(asq_db >= 0.0)) {
      throw ConfigError(Kind::range, section.where("antisqueezing_db") +
                                         ": must be >= 0 dB (above vacuum)");
    }
    if (sq_db + asq_db < -1e-9) {
      throw ConfigError(Kind::range,
                        "[source] squeezing_db + antisqueezing_db must be >= 0 dB "
                        "(uncertainty relation)");
    }
    if ((sq_db == 0.0) != (asq_db == 0.0)) {
      throw ConfigError(Kind::range,
                        "[source] squeezing_db and antisqueezing_db must both be zero or "
                        "both non-zero (a squeezed-then-lossy source cannot produce one "
                        "vacuum quadrature only)");
    }
    return FixedSourceVariances{from_db(sq_db, 1.0), from_db(asq_db, 1.0)};
  }
  if (!has_pump) {
    throw ConfigError(Kind::missing, "[source] needs either the squeezing_db pair or pump_x");
  }
  const double pump = section.number("pump_x");
  if (!(pump >= 0.0 && pump < 1.0)) {
    throw ConfigError(Kind::range, section.where("pump_x") + ": must lie in [0, 1)");
  }
  const double linewidth = has_lw ? section.number("linewidth_mhz") : kDefaultLinewidthMhz;
  if (!(linewidth > 0.0)) {
    throw ConfigError(Kind::range, section.where("linewidth_mhz") + ": must be positive");
  }
  double escape = 1.0;
  if (has_esc) {
    escape = section.number("escape_eff");
    if (!(escape > 0.0 && escape <= 1.0)) {
      throw ConfigError(Kind::range, section.where("escape_eff") + ": must lie in (0, 1]");
    }
  }
  return SourceSpectrumModel(pump, linewidth, escape);
}

std::string number_to_string(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// dB value whose from_db image is exactly `variance` when one exists within a
// few ulps of to_db(variance); keeps parse(serialize(doc)) == doc bit-exact
// for configs that originated from dB text.
double invertible_db(double variance) {
  const double db = to_db(variance, 1.0);
  if (from_db(db, 1.0) == variance) {
    return db;
  }
  double up = db;
  double down = db;
  for (int i = 0; i < 4; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (from_db(up, 1.0) == variance) {
      return up;
    }
    if (from_db(down, 1.0) == variance) {
      return down;
    }
  }
  return db;
}

}  // namespace

ConfigDocument default_config() { return ConfigDocument{}; }

ConfigDocument parse_config(const std::string& text) {
  const Sections sections = tokenize(text);
  for (const auto& [name, keys] : sections) {
    static const char* known[] = {"source", "vbs", "arm_1550", "arm_532", "detection",
                                  "analysis"};
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return name == k; }) == std::end(known)) {
      throw ConfigError(Kind::unknown_key, "unknown section [" + name + "]");
    }
  }

  ConfigDocument doc;

  const SectionReader source(sections, "source");
  doc.scenario.source = parse_source(source);
  source.reject_unknown();

  const SectionReader vbs(sections, "vbs");
  {
    const bool has_t = vbs.present() && vbs.has("t");
    const bool has_mode = vbs.present() && vbs.has("mode");
    if (has_t && has_mode) {
      throw ConfigError(Kind::conflict, "[vbs] t and mode are mutually exclusive");
    }
    if (has_t) {
      const double t = vbs.number("t");
      if (!(t >= 0.0 && t <= 1.0)) {
        throw ConfigError(Kind::range, vbs.where("t") + ": value " + format_number(t) +
                                           " outside [0, 1]");
      }
      doc.scenario.vbs_setting = VbsSetting::explicit_t;
      doc.scenario.vbs_t = t;
    } else if (has_mode) {
      const std::string mode = vbs.text("mode");
      if (mode == "balance") {
        doc.scenario.vbs_setting = VbsSetting::balance;
      } else if (mode == "optimize") {
        doc.scenario.vbs_setting = VbsSetting::optimize;
      } else {
        throw ConfigError(Kind::range,
                          vbs.where("mode") + ": expected 'balance' or 'optimize', got '" +
                              mode + "'");
      }
    }
    vbs.reject_unknown();
  }

  const SectionReader arm_1550(sections, "arm_1550");
  doc.scenario.arm_1550.efficiency_power =
      read_unit_interval(arm_1550, "efficiency_power", DirectArm{}.efficiency_power);
  arm_1550.reject_unknown();

  const SectionReader arm_532(sections, "arm_532");
  doc.scenario.arm_532.sfg_efficiency_power = read_unit_interval(
      arm_532, "sfg_efficiency_power", UpconversionArm{}.sfg_efficiency_power);
  doc.scenario.arm_532.pd_efficiency_power = read_unit_interval(
      arm_532, "pd_efficiency_power", UpconversionArm{}.pd_efficiency_power);
  doc.scenario.arm_532.extra_power =
      read_unit_interval(arm_532, "extra_power", UpconversionArm{}.extra_power);
  arm_532.reject_unknown();

  const SectionReader detection(sections, "detection");
  if (detection.present()) {
    if (detection.has("phase_1550_rad")) {
      doc.scenario.phase_1550_rad = detection.number("phase_1550_rad");
    }
    if (detection.has("phase_532_rad")) {
      doc.scenario.phase_532_rad = detection.number("phase_532_rad");
    }
    if (detection.has("dark_floor_db")) {
      doc.scenario.dark_floor_db = detection.number("dark_floor_db");
    }
  }
  detection.reject_unknown();

  const SectionReader analysis(sections, "analysis");
  if (analysis.present()) {
    if (analysis.has("frequency_mhz")) {
      const double freq = analysis.number("frequency_mhz");
      if (!(freq >= 0.0)) {
        throw ConfigError(Kind::range, analysis.where("frequency_mhz") + ": must be >= 0");
      }
      doc.scenario.analysis_freq_mhz = freq;
    }
    const bool sweep_given = analysis.has("sweep_start_mhz") || analysis.has("sweep_stop_mhz") ||
                             analysis.has("sweep_points");
    if (sweep_given) {
      const double start =
          analysis.has("sweep_start_mhz") ? analysis.number("sweep_start_mhz") : 0.5;
      const double stop =
          analysis.has("sweep_stop_mhz") ? analysis.number("sweep_stop_mhz") : 30.0;
      const std::size_t points =
          analysis.has("sweep_points") ? analysis.count("sweep_points") : 60;
      try {
        doc.analysis.sweep = FrequencyGrid(start, stop, points);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(Kind::range, "[analysis] sweep range: " + std::string(e.what()));
      }
    }
    const bool phase_given = analysis.has("phase_start_rad") || analysis.has("phase_stop_rad") ||
                             analysis.has("phase_points");
    if (phase_given) {
      const double start =
          analysis.has("phase_start_rad") ? analysis.number("phase_start_rad") : 0.0;
      const double stop = analysis.has("phase_stop_rad") ? analysis.number("phase_stop_rad")
                                                         : 2.0 * std::numbers::pi;
      const std::size_t points =
          analysis.has("phase_points") ? analysis.count("phase_points") : 181;
      try {
        doc.analysis.phase = PhaseGrid(start, stop, points);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(Kind::range, "[analysis] phase range: " + std::string(e.what()));
      }
    }
  }
  analysis.reject_unknown();

  try {
    doc.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(Kind::range, e.what());
  }
  return doc;
}

std::string serialize_config(const ConfigDocument& doc) {
  std::string out;
  const auto line = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };

  out += "[source]\n";
  if (const auto* fixed = std::get_if<FixedSourceVariances>(&doc.scenario.source)) {
    line("squeezing_db", number_to_string(invertible_db(fixed->v_minus)));
    line("antisqueezing_db", number_to_string(invertible_db(fixed->v_plus)));
  } else {
    const auto& model = std::get<SourceSpectrumModel>(doc.scenario.source);
    line("pump_x", number_to_string(model.pump_x));
    line("linewidth_mhz", number_to_string(model.linewidth_hwhm_mhz));
    line("escape_eff", number_to_string(model.escape_efficiency));
  }

  out += "\n[vbs]\n";
  switch (doc.scenario.vbs_setting) {
    case VbsSetting::explicit_t:
      line("t", number_to_string(doc.scenario.vbs_t));
      break;
    case VbsSetting::balance:
      line("mode", "balance");
      break;
    case VbsSetting::optimize:
      line("mode", "optimize");
      break;
  }

  out += "\n[arm_1550]\n";
  line("efficiency_power", number_to_string(doc.scenario.arm_1550.efficiency_power));

  out += "\n[arm_532]\n";
  line("sfg_efficiency_power", number_to_string(doc.scenario.arm_532.sfg_efficiency_power));
  line("pd_efficiency_power", number_to_string(doc.scenario.arm_532.pd_efficiency_power));
  line("extra_power", number_to_string(doc.scenario.arm_532.extra_power));

  out += "\n[detection]\n";
  line("phase_1550_rad", number_to_string(doc.scenario.phase_1550_rad));
  line("phase_532_rad", number_to_string(doc.scenario.phase_532_rad));
  if (doc.scenario.dark_floor_db) {
    line("dark_floor_db", number_to_string(*doc.scenario.dark_floor_db));
  }

  out += "\n[analysis]\n";
  line("frequency_mhz", number_to_string(doc.analysis.frequency_mhz));
  line("sweep_start_mhz", number_to_string(doc.analysis.sweep.start_mhz));
  line("sweep_stop_mhz", number_to_string(doc.analysis.sweep.stop_mhz));
  line("sweep_points", std::to_string(doc.analysis.sweep.points));
  line("phase_start_rad", number_to_string(doc.analysis.phase.start_rad));
  line("phase_stop_rad", number_to_string(doc.analysis.phase.stop_rad));
  line("phase_points", std::to_string(doc.analysis.phase.points));
  return out;
}

}  // namespace cvlink
