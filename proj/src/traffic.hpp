// Traffic sources for the two user classes plus per-UE transmit buffers.
#pragma once

#include <cstdint>
#include <optional>

#include "rng.hpp"

namespace casim {

enum class TrafficClass { kFtp = 0, kCbr = 1 };

struct FtpParams {
  double mean_interarrival_slots = 33.0;
  std::int64_t file_size_bits = 640000;
};

struct CbrParams {
  std::int64_t bits_per_slot = 5000;
  std::int64_t on_period_slots = 200;
  std::int64_t off_period_slots = 200;
};

struct FlowArrival {
  std::int64_t size_bits = 0;
};

struct Buffer {
  std::int64_t pending_bits = 0;
  std::int64_t cumulative_arrived_bits = 0;
  std::int64_t cumulative_served_bits = 0;
};

// Bernoulli arrival with per-slot probability 1/mean, so inter-arrival gaps
// are geometric with the configured mean.  One fixed-size file per arrival.
std::optional<FlowArrival> generate_ftp(const FtpParams& p, Rng& rng);

// Deterministic (on + off)-periodic cycle starting at slot 0; bits_per_slot
// arrives on each ON slot, nothing during OFF.
std::optional<FlowArrival> generate_cbr(const CbrParams& p, std::int64_t slot);

void enqueue(Buffer& b, const FlowArrival& a);

// Serves min(pending, capacity_bits); returns the bits served.
std::int64_t serve(Buffer& b, std::int64_t capacity_bits);

}  // namespace casim
