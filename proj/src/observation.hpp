// Per-UE traffic estimators, observation vectors and state discretization.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "traffic.hpp"

namespace casim {

// (1 - beta) * prev + beta * sample.
double ema_update(double prev, double sample, double beta);

struct EstimatorConfig {
  double beta_arrival = 0.1;      // inter-arrival and size EMAs, on each arrival
  double beta_throughput = 0.05;  // throughput EMA, every slot
};

struct EstimatorState {
  double ema_interarrival_slots = 0.0;
  double ema_size_bits = 0.0;
  double ema_throughput_bps = 0.0;
  std::optional<std::int64_t> last_arrival_slot;
};

// Initial estimates: inter-arrival primed with the decision period, size and
// throughput at zero.
EstimatorState make_estimator(std::int64_t decision_period_slots);

// Feeds one arrival; the first arrival contributes only a size sample.
void estimator_on_arrival(EstimatorState& st, std::int64_t slot, std::int64_t size_bits,
                          const EstimatorConfig& cfg);

// Feeds one slot's served throughput sample (bit/s).
void estimator_on_throughput(EstimatorState& st, double sample_bps,
                             const EstimatorConfig& cfg);

struct Observation {
  double interarrival_slots = 0.0;
  double size_bits = 0.0;
  double throughput_bps = 0.0;
};

// Manager-side view: the EMA estimates only.
Observation observe_partial(const EstimatorState& st);

// Oracle view: true generator means for inter-arrival and size; throughput
// stays the measured estimate.  CBR truth is the in-phase per-slot pattern.
Observation observe_full(TrafficClass cls, const FtpParams& ftp, const CbrParams& cbr,
                         const EstimatorState& st);

struct DiscretizationConfig {
  std::vector<double> interarrival_edges;
  std::vector<double> size_edges;
  std::vector<double> throughput_edges;

  int n_states() const;
};

// Per-dimension bin = number of edges <= value; bins composed row-major with
// inter-arrival outermost and throughput innermost.
int discretize(const Observation& obs, const DiscretizationConfig& d);

}  // namespace casim
