#include "radio.hpp"

#include <cmath>
#include <stdexcept>

namespace casim {

double Position::distance_m() const { return std::hypot(x_m, y_m); }

double path_loss_db(double distance_m, const CellConfig& cell) {
  if (!std::isfinite(distance_m) || distance_m <= 0.0)
    throw std::invalid_argument("path_loss_db: distance must be finite and positive");
  const double d = std::max(distance_m, cell.ref_distance_m);
  return cell.path_loss_ref_db +
         10.0 * cell.path_loss_exponent * std::log10(d / cell.ref_distance_m);
}

double snr_linear(double tx_power_dbm, double path_loss_db, double noise_power_dbm) {
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(path_loss_db) ||
      !std::isfinite(noise_power_dbm))
    throw std::invalid_argument("snr_linear: inputs must be finite");
  return std::pow(10.0, (tx_power_dbm - path_loss_db - noise_power_dbm) / 10.0);
}

double cc_capacity_bps(const ComponentCarrier& cc, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("cc_capacity_bps: snr must be > 0");
  return cc.bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace casim
