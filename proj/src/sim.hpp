// Slotted-time cell engine binding radio, traffic, observation and agents.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "agents.hpp"
#include "config.hpp"
#include "observation.hpp"
#include "radio.hpp"
#include "traffic.hpp"

namespace casim {

inline constexpr int kNumClasses = 2;  // index 0 = FTP, 1 = CBR

const char* traffic_class_name(TrafficClass cls);

struct EpochRecord {
  std::int64_t epoch = 0;
  int ue_id = 0;
  int state_index = 0;
  ActionMask action = 0;
  double reward = 0.0;  // accrued over the period ending at this epoch
  double epsilon = 0.0;
};

struct MetricsLog {
  double slot_duration_s = 0.0;
  int decision_period_slots = 1;
  // Slot-indexed, per class.
  std::vector<std::array<std::int64_t, kNumClasses>> served_bits;
  std::vector<std::array<double, kNumClasses>> mean_active_ccs;
  std::vector<std::array<double, kNumClasses>> energy_cum;
  std::vector<EpochRecord> epochs;
  // Mean over UEs of the reward for period k, indexed by k.
  std::vector<double> period_mean_reward;
};

struct RunSummary {
  Method method = Method::kAllCc;
  std::uint64_t seed = 0;
  std::array<double, kNumClasses> throughput_bps{};   // mean of per-slot class sums
  std::array<double, kNumClasses> active_ccs{};       // mean over slots and class UEs
  double active_ccs_all = 0.0;                        // all UEs, all slots
  double active_ccs_after_delay = 0.0;                // all UEs, slots >= activation delay
  double energy_total = 0.0;
  std::int64_t convergence_slot = -1;                 // -1 = never converged
  double final_window_mean_reward = 0.0;
};

struct RunResult {
  SimConfig config;
  MetricsLog log;
  RunSummary summary;
  std::vector<QTable> qtables;  // learning methods: one per UE, or one shared
};

// Earliest epoch t (as a slot index, t * decision_period) such that the
// window-sized moving average of the per-period rewards stays within
// band * max(|final-10% mean|, scale_floor) of that final mean for every
// epoch >= t; -1 if the last window still violates the band.
std::int64_t convergence_slot(const std::vector<double>& period_rewards, int window_epochs,
                              double band, double scale_floor, int decision_period_slots);

double energy_total(const MetricsLog& log);

class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);

  // Replaces the fresh tables before any step; shapes must match the config.
  void load_qtables(std::vector<QTable> tables);

  // Frozen mode: epsilon forced to 0 and no table updates (online execution).
  void set_frozen(bool frozen) { frozen_ = frozen; }

  // Invoked after every completed slot; used by tests to audit internals.
  using SlotObserver = std::function<void(const Simulation&, std::int64_t slot)>;
  void set_slot_observer(SlotObserver observer) { observer_ = std::move(observer); }

  void step();
  RunResult finish();  // runs any remaining slots and builds the summary

  // Introspection for observers and tests.
  const SimConfig& config() const { return cfg_; }
  std::int64_t slot() const { return slot_; }
  int n_ues() const { return cfg_.n_ues; }
  TrafficClass ue_class(int ue) const;
  const Buffer& ue_buffer(int ue) const;
  ActionMask ue_active_mask(int ue) const;
  std::int64_t ue_capacity_bits_per_slot(int ue, int cc) const;
  const std::vector<QTable>& qtables() const { return qtables_; }

 private:
  struct Ue {
    TrafficClass cls = TrafficClass::kFtp;
    Position pos;
    std::vector<std::int64_t> cap_bits_per_slot;  // per CC
    Buffer buffer;
    EstimatorState estimator;
    Rng traffic_rng{0};
    Rng agent_rng{0};
    ActionMask active_mask = 0;
    std::optional<std::pair<std::int64_t, ActionMask>> pending_change;
    ActionMask period_union_mask = 0;
    std::vector<std::int64_t> period_served_scc;
    std::vector<std::int64_t> period_potential_scc;
    double last_period_reward = 0.0;
    std::vector<int> epoch_state;
    std::vector<ActionMask> epoch_action;
  };

  QTable& table_for(int ue);
  void apply_pending(std::int64_t slot);
  void generate_traffic(std::int64_t slot);
  void decide(std::int64_t slot);
  void schedule_and_serve(std::int64_t slot);
  void finalize_period(std::int64_t slot);

  SimConfig cfg_;
  DiscretizationConfig disc_;
  std::vector<ComponentCarrier> carriers_;
  std::vector<Ue> ues_;
  std::vector<QTable> qtables_;
  bool frozen_ = false;
  std::int64_t slot_ = 0;
  MetricsLog log_;
  std::array<std::int64_t, kNumClasses> class_ues_{};
  std::array<std::int64_t, kNumClasses> total_served_bits_{};
  std::array<std::int64_t, kNumClasses> active_cc_slot_sum_{};
  std::int64_t active_cc_slot_sum_all_ = 0;
  std::int64_t active_cc_slot_sum_after_delay_ = 0;
  std::vector<std::int64_t> slot_served_scratch_;
  SlotObserver observer_;
};

// Convenience: full run of one configuration.
RunResult run_simulation(const SimConfig& cfg);

// Frozen-table evaluation run (tables from a prior training run).
RunResult run_eval(const SimConfig& cfg, std::vector<QTable> tables);

}  // namespace casim
