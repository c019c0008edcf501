#include "agents.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace casim {

QTable::QTable(int n_states, int n_actions)
    : n_states_(n_states),
      n_actions_(n_actions),
      values_(static_cast<std::size_t>(n_states) * n_actions, 0.0),
      visits_(static_cast<std::size_t>(n_states) * n_actions, 0) {
  if (n_states <= 0 || n_actions <= 0)
    throw std::invalid_argument("QTable: dimensions must be positive");
}

int QTable::index(int state, ActionMask a) const {
  if (state < 0 || state >= n_states_ || a >= static_cast<ActionMask>(n_actions_))
    throw std::invalid_argument("QTable: state or action out of range");
  return state * n_actions_ + static_cast<int>(a);
}

double QTable::value(int state, ActionMask a) const { return values_[index(state, a)]; }

std::int64_t QTable::visits(int state, ActionMask a) const { return visits_[index(state, a)]; }

double QTable::max_value(int state) const {
  double best = value(state, 0);
  for (int a = 1; a < n_actions_; ++a) best = std::max(best, values_[state * n_actions_ + a]);
  return best;
}

void QTable::set_entry(int state, ActionMask a, double value, std::int64_t visits) {
  const int i = index(state, a);
  values_[i] = value;
  visits_[i] = visits;
}

double epsilon_at_epoch(const LearningParams& p, std::int64_t epoch) {
  return std::max(p.epsilon_min, p.epsilon0 * std::pow(p.epsilon_decay, static_cast<double>(epoch)));
}

ActionMask select_action(const QTable& q, int state, double epsilon, Rng& rng) {
  const int n_actions = q.n_actions();
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<ActionMask>(rng.uniform_index(static_cast<std::uint64_t>(n_actions)));
  ActionMask best = 0;
  double best_value = q.value(state, 0);
  for (int a = 1; a < n_actions; ++a) {
    const auto mask = static_cast<ActionMask>(a);
    const double v = q.value(state, mask);
    const bool better =
        v > best_value ||
        (v == best_value && std::popcount(mask) < std::popcount(best));
    if (better) {
      best = mask;
      best_value = v;
    }
  }
  return best;
}

void q_update(QTable& q, int state, ActionMask a, double reward, int next_state,
              const LearningParams& p) {
  if (!std::isfinite(reward)) throw std::invalid_argument("q_update: reward must be finite");
  const int i = q.index(state, a);
  const double target = reward + p.gamma * q.max_value(next_state);
  q.values_[i] += p.alpha * (target - q.values_[i]);
  q.visits_[i] += 1;
}

double compute_reward(ActionMask mask, const std::vector<std::int64_t>& served_bits,
                      const std::vector<std::int64_t>& capacity_bits,
                      const RewardParams& rp) {
  if (served_bits.size() != capacity_bits.size())
    throw std::invalid_argument("compute_reward: list lengths differ");
  double reward = 0.0;
  for (std::size_t i = 0; i < served_bits.size(); ++i) {
    if ((mask >> i & 1u) == 0) continue;
    const double required = rp.utilization_threshold * static_cast<double>(capacity_bits[i]);
    if (static_cast<double>(served_bits[i]) >= required)
      reward += rp.credit_per_useful_scc;
    else
      reward -= rp.penalty_per_wasted_scc;
  }
  return reward;
}

ActionMask policy_all_cc(int n_scc) {
  return n_scc >= 32 ? ~ActionMask{0} : (ActionMask{1} << n_scc) - 1;
}

ActionMask policy_single_cc() { return 0; }

ActionMask policy_reactive(const Buffer& buffer, std::int64_t pcc_capacity_bits_per_slot,
                           std::int64_t decision_period_slots, int n_scc) {
  const std::int64_t period_capacity = pcc_capacity_bits_per_slot * decision_period_slots;
  std::int64_t wanted;
  if (period_capacity <= 0) {
    wanted = buffer.pending_bits > 0 ? n_scc : 0;
  } else {
    const std::int64_t excess = std::max<std::int64_t>(0, buffer.pending_bits - period_capacity);
    wanted = (excess + period_capacity - 1) / period_capacity;  // ceil
  }
  wanted = std::min<std::int64_t>(wanted, n_scc);
  return wanted >= 32 ? ~ActionMask{0} : (ActionMask{1} << wanted) - 1;
}

}  // namespace casim
