// SCC activation policies: tabular Q-learning plus the fixed baselines.
#pragma once

#include <cstdint>
#include <vector>

#include "rng.hpp"
#include "traffic.hpp"

namespace casim {

// Bit i set = SCC i requested active next period.  The PCC is always on and
// never encoded.
using ActionMask = std::uint32_t;

struct LearningParams {
  double alpha = 0.1;
  double gamma = 0.3;
  double epsilon0 = 0.3;
  double epsilon_decay = 0.999;  // multiplicative, per decision epoch
  double epsilon_min = 0.01;
  bool shared_table = false;     // one table for all UEs instead of one each
};

struct RewardParams {
  double credit_per_useful_scc = 1.0;
  double penalty_per_wasted_scc = 0.25;
  double utilization_threshold = 0.25;
};

class QTable {
 public:
  QTable(int n_states, int n_actions);

  double value(int state, ActionMask a) const;
  std::int64_t visits(int state, ActionMask a) const;
  double max_value(int state) const;
  void set_entry(int state, ActionMask a, double value, std::int64_t visits);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }

  bool operator==(const QTable&) const = default;

 private:
  friend void q_update(QTable& q, int state, ActionMask a, double reward, int next_state,
                       const LearningParams& p);

  int index(int state, ActionMask a) const;

  int n_states_ = 0;
  int n_actions_ = 0;
  std::vector<double> values_;
  std::vector<std::int64_t> visits_;
};

double epsilon_at_epoch(const LearningParams& p, std::int64_t epoch);

// Epsilon-greedy over the table row; greedy ties prefer fewer active SCCs,
// then the lower mask.
ActionMask select_action(const QTable& q, int state, double epsilon, Rng& rng);

// One-step update: q(s,a) += alpha (r + gamma max_a' q(s',a') - q(s,a)).
void q_update(QTable& q, int state, ActionMask a, double reward, int next_state,
              const LearningParams& p);

// Per active SCC: served >= threshold * capacity earns the credit, otherwise
// the penalty.  Capacities are the service the SCC could have provided over
// the period, so an active idle SCC is counted as wasted.
double compute_reward(ActionMask mask, const std::vector<std::int64_t>& served_bits,
                      const std::vector<std::int64_t>& capacity_bits,
                      const RewardParams& rp);

ActionMask policy_all_cc(int n_scc);

ActionMask policy_single_cc();

// Requests ceil(backlog beyond one PCC-period / PCC-period) SCCs, capped at
// n_scc, lowest indices first.
ActionMask policy_reactive(const Buffer& buffer, std::int64_t pcc_capacity_bits_per_slot,
                           std::int64_t decision_period_slots, int n_scc);

}  // namespace casim
