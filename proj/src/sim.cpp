#include "sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace casim {

const char* traffic_class_name(TrafficClass cls) {
  return cls == TrafficClass::kFtp ? "FTP" : "CBR";
}

std::int64_t convergence_slot(const std::vector<double>& period_rewards, int window_epochs,
                              double band, double scale_floor, int decision_period_slots) {
  const auto n = static_cast<std::int64_t>(period_rewards.size());
  if (n == 0) return 0;
  const std::int64_t w = std::min<std::int64_t>(window_epochs, n);
  if (w < 1) throw std::invalid_argument("convergence_slot: window must be >= 1");

  const std::int64_t tail = std::max<std::int64_t>(1, n / 10);
  double tail_sum = 0.0;
  for (std::int64_t k = n - tail; k < n; ++k) tail_sum += period_rewards[k];
  const double final_mean = tail_sum / static_cast<double>(tail);
  const double tol = band * std::max(std::abs(final_mean), scale_floor);

  std::int64_t last_violation = -1;
  double window_sum = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    window_sum += period_rewards[k];
    if (k >= w) window_sum -= period_rewards[k - w];
    if (k < w - 1) continue;
    const double moving_avg = window_sum / static_cast<double>(w);
    if (std::abs(moving_avg - final_mean) > tol) last_violation = k;
  }
  if (last_violation == n - 1) return -1;
  return (last_violation + 1) * decision_period_slots;
}

double energy_total(const MetricsLog& log) {
  if (log.energy_cum.empty()) return 0.0;
  const auto& last = log.energy_cum.back();
  double total = 0.0;
  for (double e : last) total += e;
  return total;
}

Simulation::Simulation(const SimConfig& cfg)
    : cfg_(cfg), disc_(cfg.effective_discretization()) {
  carriers_.reserve(cfg_.n_ccs);
  for (int c = 0; c < cfg_.n_ccs; ++c)
    carriers_.push_back({c, cfg_.cc_bandwidth_hz, c == 0 ? CcRole::kPcc : CcRole::kScc});

  Rng placement_rng(derive_seed(cfg_.seed, 0));
  const int n_ftp = cfg_.n_ftp_ues();
  ues_.resize(cfg_.n_ues);
  for (int u = 0; u < cfg_.n_ues; ++u) {
    Ue& ue = ues_[u];
    ue.cls = u < n_ftp ? TrafficClass::kFtp : TrafficClass::kCbr;
    const double radius = cfg_.cell.radius_m * std::sqrt(placement_rng.uniform());
    const double angle = 2.0 * std::numbers::pi * placement_rng.uniform();
    ue.pos = {radius * std::cos(angle), radius * std::sin(angle)};
    const double distance = std::max(ue.pos.distance_m(), cfg_.cell.ref_distance_m);
    const double pl = path_loss_db(distance, cfg_.cell);
    const double snr = snr_linear(cfg_.cell.tx_power_dbm, pl, cfg_.cell.noise_power_dbm);
    ue.cap_bits_per_slot.reserve(carriers_.size());
    for (const ComponentCarrier& cc : carriers_)
      ue.cap_bits_per_slot.push_back(static_cast<std::int64_t>(
          std::floor(cc_capacity_bps(cc, snr) * cfg_.slot_duration_s)));
    ue.estimator = make_estimator(cfg_.decision_period_slots);
    ue.traffic_rng = Rng(derive_seed(cfg_.seed, 1, static_cast<std::uint64_t>(u)));
    ue.agent_rng = Rng(derive_seed(cfg_.seed, 2, static_cast<std::uint64_t>(u)));
    ue.period_served_scc.assign(cfg_.n_scc(), 0);
    ue.period_potential_scc.assign(cfg_.n_scc(), 0);
    ue.epoch_state.reserve(cfg_.n_epochs() + 1);
    ue.epoch_action.reserve(cfg_.n_epochs() + 1);
    class_ues_[static_cast<int>(ue.cls)] += 1;
  }

  if (method_is_learning(cfg_.method)) {
    const int tables = cfg_.learning.shared_table ? 1 : cfg_.n_ues;
    qtables_.assign(tables, QTable(disc_.n_states(), cfg_.n_actions()));
  }

  log_.slot_duration_s = cfg_.slot_duration_s;
  log_.decision_period_slots = cfg_.decision_period_slots;
  log_.served_bits.reserve(cfg_.total_slots);
  log_.mean_active_ccs.reserve(cfg_.total_slots);
  log_.energy_cum.reserve(cfg_.total_slots);
  log_.period_mean_reward.reserve(cfg_.total_slots / cfg_.decision_period_slots);
  slot_served_scratch_.assign(cfg_.n_ues, 0);
}

void Simulation::load_qtables(std::vector<QTable> tables) {
  if (!method_is_learning(cfg_.method))
    throw ConfigError("config error: method: Q-tables only apply to QL_FULL/QL_PARTIAL");
  const std::size_t expected = cfg_.learning.shared_table ? 1 : static_cast<std::size_t>(cfg_.n_ues);
  if (tables.size() != expected)
    throw ConfigError("config error: qtables: expected " + std::to_string(expected) +
                      " table(s), got " + std::to_string(tables.size()));
  for (const QTable& t : tables)
    if (t.n_states() != disc_.n_states() || t.n_actions() != cfg_.n_actions())
      throw ConfigError("config error: qtables: table shape does not match the config");
  qtables_ = std::move(tables);
}

TrafficClass Simulation::ue_class(int ue) const { return ues_.at(ue).cls; }
const Buffer& Simulation::ue_buffer(int ue) const { return ues_.at(ue).buffer; }
ActionMask Simulation::ue_active_mask(int ue) const { return ues_.at(ue).active_mask; }
std::int64_t Simulation::ue_capacity_bits_per_slot(int ue, int cc) const {
  return ues_.at(ue).cap_bits_per_slot.at(cc);
}

QTable& Simulation::table_for(int ue) {
  return qtables_[cfg_.learning.shared_table ? 0 : ue];
}

void Simulation::apply_pending(std::int64_t slot) {
  for (Ue& ue : ues_) {
    if (ue.pending_change && ue.pending_change->first <= slot) {
      ue.active_mask = ue.pending_change->second;
      ue.pending_change.reset();
    }
  }
}

void Simulation::generate_traffic(std::int64_t slot) {
  for (Ue& ue : ues_) {
    const std::optional<FlowArrival> arrival =
        ue.cls == TrafficClass::kFtp ? generate_ftp(cfg_.ftp, ue.traffic_rng)
                                     : generate_cbr(cfg_.cbr, slot);
    if (arrival) {
      enqueue(ue.buffer, *arrival);
      estimator_on_arrival(ue.estimator, slot, arrival->size_bits, cfg_.estimator);
    }
  }
}

void Simulation::decide(std::int64_t slot) {
  const std::int64_t epoch = slot / cfg_.decision_period_slots;
  const bool learning = method_is_learning(cfg_.method);
  const double epsilon =
      learning && !frozen_ ? epsilon_at_epoch(cfg_.learning, epoch) : 0.0;
  // With activation delay d, the mask governing period k was chosen
  // ceil(d / P) epochs before k.
  const std::int64_t delay_periods =
      (cfg_.activation_delay_slots + cfg_.decision_period_slots - 1) /
      cfg_.decision_period_slots;

  for (int u = 0; u < cfg_.n_ues; ++u) {
    Ue& ue = ues_[u];
    const Observation obs =
        cfg_.method == Method::kQlFull
            ? observe_full(ue.cls, cfg_.ftp, cfg_.cbr, ue.estimator)
            : observe_partial(ue.estimator);
    const int state = discretize(obs, disc_);
    ue.epoch_state.push_back(state);

    // The reward finalized at the end of period epoch-1 credits the decision
    // that was in force then; its bootstrap state is the next decision's.
    if (learning && !frozen_ && epoch >= 1) {
      const std::int64_t credited = epoch - 1 - delay_periods;
      if (credited >= 0)
        q_update(table_for(u), ue.epoch_state[credited], ue.epoch_action[credited],
                 ue.last_period_reward, ue.epoch_state[credited + 1], cfg_.learning);
    }

    ActionMask action = 0;
    switch (cfg_.method) {
      case Method::kAllCc:
        action = policy_all_cc(cfg_.n_scc());
        break;
      case Method::kSingleCc:
        action = policy_single_cc();
        break;
      case Method::kReactive:
        action = policy_reactive(ue.buffer, ue.cap_bits_per_slot[0],
                                 cfg_.decision_period_slots, cfg_.n_scc());
        break;
      case Method::kQlFull:
      case Method::kQlPartial:
        action = select_action(table_for(u), state, epsilon, ue.agent_rng);
        break;
    }
    ue.epoch_action.push_back(action);
    if (cfg_.activation_delay_slots == 0) {
      ue.active_mask = action;
      ue.pending_change.reset();
    } else {
      // Re-requesting the in-flight (or current) mask must not restart the
      // reconfiguration timer, or a delay longer than the decision period
      // would postpone activation forever.
      const ActionMask target = ue.pending_change ? ue.pending_change->second : ue.active_mask;
      if (action != target)
        ue.pending_change = {{slot + cfg_.activation_delay_slots, action}};
    }

    log_.epochs.push_back({epoch, u, state, action, ue.last_period_reward, epsilon});
  }
}

void Simulation::schedule_and_serve(std::int64_t slot) {
  std::fill(slot_served_scratch_.begin(), slot_served_scratch_.end(), 0);

  for (int c = 0; c < cfg_.n_ccs; ++c) {
    std::int64_t eligible = 0;
    for (const Ue& ue : ues_) {
      const bool active = c == 0 || (ue.active_mask >> (c - 1) & 1u);
      if (active && ue.buffer.pending_bits > 0) ++eligible;
    }
    for (int u = 0; u < cfg_.n_ues; ++u) {
      Ue& ue = ues_[u];
      const bool active = c == 0 || (ue.active_mask >> (c - 1) & 1u);
      if (!active) continue;
      if (ue.buffer.pending_bits > 0) {
        const std::int64_t share = ue.cap_bits_per_slot[c] / eligible;
        const std::int64_t served = serve(ue.buffer, share);
        slot_served_scratch_[u] += served;
        if (c > 0) {
          ue.period_served_scc[c - 1] += served;
          ue.period_potential_scc[c - 1] += share;
        }
      } else if (c > 0) {
        // Idle but active: record the share it would have drawn, so the
        // reward sees an unused activation rather than a zero-capacity one.
        ue.period_potential_scc[c - 1] += ue.cap_bits_per_slot[c] / (eligible + 1);
      }
    }
  }

  std::array<std::int64_t, kNumClasses> slot_served_class{};
  std::array<std::int64_t, kNumClasses> slot_active_class{};
  for (int u = 0; u < cfg_.n_ues; ++u) {
    Ue& ue = ues_[u];
    estimator_on_throughput(ue.estimator,
                            static_cast<double>(slot_served_scratch_[u]) / cfg_.slot_duration_s,
                            cfg_.estimator);
    ue.period_union_mask |= ue.active_mask;
    const int cls = static_cast<int>(ue.cls);
    const std::int64_t active_ccs = 1 + std::popcount(ue.active_mask);
    slot_served_class[cls] += slot_served_scratch_[u];
    slot_active_class[cls] += active_ccs;
    active_cc_slot_sum_all_ += active_ccs;
    if (slot >= cfg_.activation_delay_slots) active_cc_slot_sum_after_delay_ += active_ccs;
  }

  std::array<double, kNumClasses> mean_active{};
  std::array<double, kNumClasses> energy{};
  for (int cls = 0; cls < kNumClasses; ++cls) {
    total_served_bits_[cls] += slot_served_class[cls];
    active_cc_slot_sum_[cls] += slot_active_class[cls];
    mean_active[cls] = class_ues_[cls] > 0 ? static_cast<double>(slot_active_class[cls]) /
                                                 static_cast<double>(class_ues_[cls])
                                           : 0.0;
    energy[cls] = cfg_.energy_per_cc_slot * static_cast<double>(active_cc_slot_sum_[cls]);
  }
  log_.served_bits.push_back(slot_served_class);
  log_.mean_active_ccs.push_back(mean_active);
  log_.energy_cum.push_back(energy);
}

void Simulation::finalize_period(std::int64_t /*slot*/) {
  double reward_sum = 0.0;
  for (Ue& ue : ues_) {
    ue.last_period_reward = compute_reward(ue.period_union_mask, ue.period_served_scc,
                                           ue.period_potential_scc, cfg_.reward_params);
    reward_sum += ue.last_period_reward;
    std::fill(ue.period_served_scc.begin(), ue.period_served_scc.end(), 0);
    std::fill(ue.period_potential_scc.begin(), ue.period_potential_scc.end(), 0);
    ue.period_union_mask = 0;
  }
  log_.period_mean_reward.push_back(reward_sum / static_cast<double>(cfg_.n_ues));
}

void Simulation::step() {
  const std::int64_t t = slot_;
  apply_pending(t);
  generate_traffic(t);
  if (t % cfg_.decision_period_slots == 0) decide(t);
  schedule_and_serve(t);
  if ((t + 1) % cfg_.decision_period_slots == 0) finalize_period(t);
  ++slot_;
  if (observer_) observer_(*this, t);
}

RunResult Simulation::finish() {
  while (slot_ < cfg_.total_slots) step();

  RunResult result;
  result.config = cfg_;
  result.summary.method = cfg_.method;
  result.summary.seed = cfg_.seed;
  const double duration = static_cast<double>(cfg_.total_slots) * cfg_.slot_duration_s;
  for (int cls = 0; cls < kNumClasses; ++cls) {
    result.summary.throughput_bps[cls] = static_cast<double>(total_served_bits_[cls]) / duration;
    result.summary.active_ccs[cls] =
        class_ues_[cls] > 0
            ? static_cast<double>(active_cc_slot_sum_[cls]) /
                  static_cast<double>(class_ues_[cls] * cfg_.total_slots)
            : 0.0;
  }
  result.summary.active_ccs_all =
      static_cast<double>(active_cc_slot_sum_all_) /
      static_cast<double>(static_cast<std::int64_t>(cfg_.n_ues) * cfg_.total_slots);
  const std::int64_t slots_after_delay =
      cfg_.total_slots - std::min<std::int64_t>(cfg_.activation_delay_slots, cfg_.total_slots);
  result.summary.active_ccs_after_delay =
      slots_after_delay > 0
          ? static_cast<double>(active_cc_slot_sum_after_delay_) /
                static_cast<double>(static_cast<std::int64_t>(cfg_.n_ues) * slots_after_delay)
          : 0.0;
  result.summary.energy_total =
      cfg_.energy_per_cc_slot * static_cast<double>(active_cc_slot_sum_all_);

  const double scale_floor =
      cfg_.n_scc() * std::max(cfg_.reward_params.credit_per_useful_scc,
                              cfg_.reward_params.penalty_per_wasted_scc);
  result.summary.convergence_slot =
      convergence_slot(log_.period_mean_reward, cfg_.convergence.window_epochs,
                       cfg_.convergence.band, scale_floor, cfg_.decision_period_slots);

  const auto n_periods = static_cast<std::int64_t>(log_.period_mean_reward.size());
  const std::int64_t w = std::min<std::int64_t>(cfg_.convergence.window_epochs, n_periods);
  double tail_sum = 0.0;
  for (std::int64_t k = n_periods - w; k < n_periods; ++k) tail_sum += log_.period_mean_reward[k];
  result.summary.final_window_mean_reward = w > 0 ? tail_sum / static_cast<double>(w) : 0.0;

  result.log = std::move(log_);
  result.qtables = std::move(qtables_);
  return result;
}

RunResult run_simulation(const SimConfig& cfg) {
  Simulation sim(cfg);
  return sim.finish();
}

RunResult run_eval(const SimConfig& cfg, std::vector<QTable> tables) {
  Simulation sim(cfg);
  sim.load_qtables(std::move(tables));
  sim.set_frozen(true);
  return sim.finish();
}

}  // namespace casim
