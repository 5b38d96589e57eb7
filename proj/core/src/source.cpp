#include "cvlink/source.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvlink {

SourceSpectrumModel::SourceSpectrumModel(double pump_x_, double linewidth_hwhm_mhz_,
                                         double escape_efficiency_)
    : pump_x(pump_x_),
      linewidth_hwhm_mhz(linewidth_hwhm_mhz_),
      escape_efficiency(escape_efficiency_) {
  if (!(pump_x >= 0.0 && pump_x < 1.0)) {
    throw std::invalid_argument("pump_x must lie in [0, 1), got " + std::to_string(pump_x));
  }
  if (!(linewidth_hwhm_mhz > 0.0)) {
    throw std::invalid_argument("linewidth_hwhm_mhz must be positive");
  }
  if (!(escape_efficiency > 0.0 && escape_efficiency <= 1.0)) {
    throw std::invalid_argument("escape_efficiency must lie in (0, 1]");
  }
}

SourceVariances source_variances(const SourceSpectrumModel& model, double omega_mhz) {
  if (!(omega_mhz >= 0.0)) {
    throw std::invalid_argument("sideband frequency must be non-negative, got " +
                                std::to_string(omega_mhz));
  }
  const double x = model.pump_x;
  const double w2 = (omega_mhz / model.linewidth_hwhm_mhz) * (omega_mhz / model.linewidth_hwhm_mhz);
  const double gain = model.escape_efficiency * 4.0 * x;
  const double v_minus = 1.0 - gain / ((1.0 + x) * (1.0 + x) + w2);
  const double v_plus = 1.0 + gain / ((1.0 - x) * (1.0 - x) + w2);
  return SourceVariances{v_minus, v_plus};
}

FrequencyGrid::FrequencyGrid(double start_mhz_, double stop_mhz_, std::size_t points_)
    : start_mhz(start_mhz_), stop_mhz(stop_mhz_), points(points_) {
  if (!(start_mhz >= 0.0)) {
    throw std::invalid_argument("frequency grid must start at a non-negative frequency");
  }
  if (!(start_mhz < stop_mhz)) {
    throw std::invalid_argument("frequency grid needs start < stop");
  }
  if (points < 2) {
    throw std::invalid_argument("frequency grid needs at least 2 points");
  }
}

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> freqs(points);
  const double step = (stop_mhz - start_mhz) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    freqs[i] = start_mhz + static_cast<double>(i) * step;
  }
  freqs.back() = stop_mhz;
  return freqs;
}

}  // namespace cvlink
