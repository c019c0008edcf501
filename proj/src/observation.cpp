#include "observation.hpp"

#include <stdexcept>

namespace casim {

double ema_update(double prev, double sample, double beta) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::invalid_argument("ema_update: beta must be in (0, 1]");
  return (1.0 - beta) * prev + beta * sample;
}

EstimatorState make_estimator(std::int64_t decision_period_slots) {
  EstimatorState st;
  st.ema_interarrival_slots = static_cast<double>(decision_period_slots);
  return st;
}

void estimator_on_arrival(EstimatorState& st, std::int64_t slot, std::int64_t size_bits,
                          const EstimatorConfig& cfg) {
  if (st.last_arrival_slot) {
    const double gap = static_cast<double>(slot - *st.last_arrival_slot);
    st.ema_interarrival_slots = ema_update(st.ema_interarrival_slots, gap, cfg.beta_arrival);
  }
  st.ema_size_bits =
      ema_update(st.ema_size_bits, static_cast<double>(size_bits), cfg.beta_arrival);
  st.last_arrival_slot = slot;
}

void estimator_on_throughput(EstimatorState& st, double sample_bps,
                             const EstimatorConfig& cfg) {
  st.ema_throughput_bps = ema_update(st.ema_throughput_bps, sample_bps, cfg.beta_throughput);
}

Observation observe_partial(const EstimatorState& st) {
  return Observation{st.ema_interarrival_slots, st.ema_size_bits, st.ema_throughput_bps};
}

Observation observe_full(TrafficClass cls, const FtpParams& ftp, const CbrParams& cbr,
                         const EstimatorState& st) {
  if (cls == TrafficClass::kFtp)
    return Observation{ftp.mean_interarrival_slots, static_cast<double>(ftp.file_size_bits),
                       st.ema_throughput_bps};
  return Observation{1.0, static_cast<double>(cbr.bits_per_slot), st.ema_throughput_bps};
}

namespace {

int bin_of(double value, const std::vector<double>& edges) {
  int bin = 0;
  for (double e : edges)
    if (value >= e) ++bin;
  return bin;
}

}  // namespace

int DiscretizationConfig::n_states() const {
  return static_cast<int>((interarrival_edges.size() + 1) * (size_edges.size() + 1) *
                          (throughput_edges.size() + 1));
}

int discretize(const Observation& obs, const DiscretizationConfig& d) {
  const int b0 = bin_of(obs.interarrival_slots, d.interarrival_edges);
  const int b1 = bin_of(obs.size_bits, d.size_edges);
  const int b2 = bin_of(obs.throughput_bps, d.throughput_edges);
  const int n1 = static_cast<int>(d.size_edges.size()) + 1;
  const int n2 = static_cast<int>(d.throughput_edges.size()) + 1;
  return (b0 * n1 + b1) * n2 + b2;
}

}  // namespace casim
