#include "traffic.hpp"

#include <algorithm>
#include <stdexcept>

namespace casim {

std::optional<FlowArrival> generate_ftp(const FtpParams& p, Rng& rng) {
  if (rng.bernoulli(1.0 / p.mean_interarrival_slots))
    return FlowArrival{p.file_size_bits};
  return std::nullopt;
}

std::optional<FlowArrival> generate_cbr(const CbrParams& p, std::int64_t slot) {
  if (p.bits_per_slot == 0) return std::nullopt;
  const std::int64_t cycle = p.on_period_slots + p.off_period_slots;
  if (slot % cycle < p.on_period_slots) return FlowArrival{p.bits_per_slot};
  return std::nullopt;
}

void enqueue(Buffer& b, const FlowArrival& a) {
  b.pending_bits += a.size_bits;
  b.cumulative_arrived_bits += a.size_bits;
}

std::int64_t serve(Buffer& b, std::int64_t capacity_bits) {
  if (capacity_bits < 0) throw std::invalid_argument("serve: capacity must be >= 0");
  const std::int64_t served = std::min(b.pending_bits, capacity_bits);
  b.pending_bits -= served;
  b.cumulative_served_bits += served;
  return served;
}

}  // namespace casim
