// Link budget: log-distance path loss, SNR and Shannon capacity per carrier.
#pragma once

namespace casim {

enum class CcRole { kPcc, kScc };

struct ComponentCarrier {
  int id = 0;
  double bandwidth_hz = 5e6;
  CcRole role = CcRole::kScc;
};

struct CellConfig {
  double radius_m = 250.0;
  double tx_power_dbm = 30.0;
  double noise_power_dbm = -104.0;
  double path_loss_exponent = 3.5;
  double path_loss_ref_db = 40.0;
  double ref_distance_m = 1.0;
};

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;
  double distance_m() const;
};

// pl_ref_db + 10 n log10(d / d0).  Distances inside d0 are clamped to d0.
double path_loss_db(double distance_m, const CellConfig& cell);

// 10^((tx - pl - noise) / 10).
double snr_linear(double tx_power_dbm, double path_loss_db, double noise_power_dbm);

// Shannon bound over the carrier bandwidth, bit/s.
double cc_capacity_bps(const ComponentCarrier& cc, double snr);

}  // namespace casim
