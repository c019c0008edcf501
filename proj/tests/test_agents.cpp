#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "agents.hpp"
#include "rng.hpp"
#include "traffic.hpp"

using namespace casim;

TEST_CASE("qtable stores and retrieves entries") {
  QTable q(3, 4);
  CHECK(q.n_states() == 3);
  CHECK(q.n_actions() == 4);
  CHECK(q.value(2, 3) == 0.0);
  CHECK(q.visits(2, 3) == 0);
  q.set_entry(1, 2, -0.75, 9);
  CHECK(q.value(1, 2) == -0.75);
  CHECK(q.visits(1, 2) == 9);
  CHECK(q.max_value(1) == 0.0);
  q.set_entry(1, 0, 1.5, 1);
  CHECK(q.max_value(1) == 1.5);
}

TEST_CASE("greedy selection picks the highest-valued action") {
  QTable q(1, 4);
  q.set_entry(0, 0b00, 0.0, 0);
  q.set_entry(0, 0b01, 1.0, 0);
  q.set_entry(0, 0b10, 0.5, 0);
  q.set_entry(0, 0b11, 0.2, 0);
  Rng rng(1);
  CHECK(select_action(q, 0, 0.0, rng) == 0b01);
}

TEST_CASE("an all-zero row resolves to no SCCs") {
  QTable q(2, 8);
  Rng rng(1);
  CHECK(select_action(q, 0, 0.0, rng) == 0b000);
  CHECK(select_action(q, 1, 0.0, rng) == 0b000);
}

TEST_CASE("value ties prefer fewer active SCCs, then the lower mask") {
  QTable q(1, 4);
  q.set_entry(0, 0b01, 2.0, 0);
  q.set_entry(0, 0b11, 2.0, 0);
  Rng rng(1);
  CHECK(select_action(q, 0, 0.0, rng) == 0b01);

  QTable r(1, 4);
  r.set_entry(0, 0b01, 2.0, 0);
  r.set_entry(0, 0b10, 2.0, 0);
  CHECK(select_action(r, 0, 0.0, rng) == 0b01);
}

TEST_CASE("greedy selection consumes no randomness") {
  QTable q(1, 4);
  q.set_entry(0, 0b10, 1.0, 0);
  Rng used(5), untouched(5);
  for (int i = 0; i < 100; ++i) select_action(q, 0, 0.0, used);
  CHECK(used.uniform() == untouched.uniform());
}

TEST_CASE("full exploration is uniform over the actions") {
  QTable q(1, 4);
  q.set_entry(0, 0b01, 100.0, 0);  // must not bias exploration
  Rng rng(12);
  std::array<int, 4> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[select_action(q, 0, 1.0, rng)] += 1;
  for (int a = 0; a < 4; ++a) {
    const double freq = static_cast<double>(counts[a]) / n;
    CHECK(freq > 0.23);
    CHECK(freq < 0.27);
  }
}

TEST_CASE("q update moves the entry toward the bootstrapped target") {
  LearningParams p;
  p.alpha = 0.5;
  p.gamma = 0.9;
  QTable q(2, 2);
  q_update(q, 0, 1, 1.0, 1, p);
  CHECK(q.value(0, 1) == doctest::Approx(0.5));
  CHECK(q.visits(0, 1) == 1);

  p.alpha = 1.0;
  p.gamma = 0.0;
  q_update(q, 0, 1, -3.0, 1, p);
  CHECK(q.value(0, 1) == doctest::Approx(-3.0));
  CHECK(q.visits(0, 1) == 2);
}

TEST_CASE("a consistent entry is a fixed point of the update") {
  LearningParams p;
  p.alpha = 0.1;
  p.gamma = 0.9;
  QTable q(2, 2);
  q.set_entry(0, 0, 2.0, 0);
  q.set_entry(1, 0, 2.0, 0);
  q.set_entry(1, 1, 1.0, 0);
  q_update(q, 0, 0, 0.2, 1, p);
  CHECK(q.value(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("q update rejects non-finite rewards") {
  LearningParams p;
  QTable q(1, 2);
  CHECK_THROWS_AS(q_update(q, 0, 0, std::numeric_limits<double>::quiet_NaN(), 0, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(q_update(q, 0, 0, std::numeric_limits<double>::infinity(), 0, p),
                  std::invalid_argument);
}

TEST_CASE("q update touches exactly one entry") {
  LearningParams p;
  QTable q(4, 4);
  Rng rng(31);
  for (int s = 0; s < 4; ++s)
    for (ActionMask a = 0; a < 4; ++a) q.set_entry(s, a, rng.uniform() * 2.0 - 1.0, 3);
  QTable before = q;
  q_update(q, 2, 1, 0.7, 3, p);
  for (int s = 0; s < 4; ++s)
    for (ActionMask a = 0; a < 4; ++a) {
      if (s == 2 && a == 1) {
        CHECK(q.visits(s, a) == before.visits(s, a) + 1);
      } else {
        CHECK(q.value(s, a) == before.value(s, a));
        CHECK(q.visits(s, a) == before.visits(s, a));
      }
    }
}

TEST_CASE("greedy choice is invariant under positive scaling of the row") {
  QTable q(1, 8);
  Rng rng(77);
  for (ActionMask a = 0; a < 8; ++a) q.set_entry(0, a, rng.uniform(), 0);
  QTable scaled(1, 8);
  for (ActionMask a = 0; a < 8; ++a) scaled.set_entry(0, a, 2.5 * q.value(0, a), 0);
  Rng r1(1), r2(1);
  CHECK(select_action(q, 0, 0.0, r1) == select_action(scaled, 0, 0.0, r2));
}

TEST_CASE("epsilon schedule decays multiplicatively to the floor") {
  LearningParams p;
  p.epsilon0 = 0.3;
  p.epsilon_decay = 0.999;
  p.epsilon_min = 0.01;
  CHECK(epsilon_at_epoch(p, 0) == doctest::Approx(0.3));
  CHECK(epsilon_at_epoch(p, 1) == doctest::Approx(0.2997));
  CHECK(epsilon_at_epoch(p, 10) == doctest::Approx(0.3 * std::pow(0.999, 10)));
  CHECK(epsilon_at_epoch(p, 100000) == 0.01);
  double prev = 1.0;
  for (std::int64_t e = 0; e < 5000; e += 50) {
    const double eps = epsilon_at_epoch(p, e);
    REQUIRE(eps <= prev);
    REQUIRE(eps >= p.epsilon_min);
    prev = eps;
  }
}

TEST_CASE("reward credits useful SCCs and penalizes wasted ones") {
  RewardParams rp;
  rp.credit_per_useful_scc = 1.0;
  rp.penalty_per_wasted_scc = 1.0;
  rp.utilization_threshold = 0.5;
  CHECK(compute_reward(0b00, {600, 500}, {1000, 1000}, rp) == 0.0);
  CHECK(compute_reward(0b11, {600, 500}, {1000, 1000}, rp) == doctest::Approx(2.0));
  CHECK(compute_reward(0b11, {600, 100}, {1000, 1000}, rp) == doctest::Approx(0.0));
  CHECK(compute_reward(0b01, {400, 999}, {1000, 1000}, rp) == doctest::Approx(-1.0));
  CHECK(compute_reward(0b01, {0}, {800}, rp) == doctest::Approx(-1.0));
}

TEST_CASE("reward scales with the configured credit and penalty") {
  RewardParams rp;
  rp.credit_per_useful_scc = 2.0;
  rp.penalty_per_wasted_scc = 0.5;
  CHECK(compute_reward(0b11, {600, 100}, {1000, 1000}, rp) == doctest::Approx(1.5));
}

TEST_CASE("reward rejects mismatched vector lengths") {
  RewardParams rp;
  CHECK_THROWS_AS(compute_reward(0b01, {1, 2}, {3}, rp), std::invalid_argument);
}

TEST_CASE("reward magnitude is bounded by the SCC count") {
  RewardParams rp;
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_scc = 1 + static_cast<int>(rng.uniform_index(4));
    std::vector<std::int64_t> served(n_scc), cap(n_scc);
    for (int i = 0; i < n_scc; ++i) {
      cap[i] = static_cast<std::int64_t>(rng.uniform_index(2000));
      served[i] = static_cast<std::int64_t>(rng.uniform_index(2000));
    }
    const auto mask = static_cast<ActionMask>(rng.uniform_index(1u << n_scc));
    const double r = compute_reward(mask, served, cap, rp);
    REQUIRE(std::abs(r) <= n_scc * 1.0 + 1e-12);
  }
}

TEST_CASE("fixed policies") {
  CHECK(policy_all_cc(2) == 0b11);
  CHECK(policy_all_cc(4) == 0b1111);
  CHECK(policy_single_cc() == 0b0);
}

TEST_CASE("reactive policy sizes the request to the backlog") {
  const std::int64_t cap = 1000;
  const std::int64_t period = 10;  // one PCC period moves 10000 bits
  Buffer b;
  CHECK(policy_reactive(b, cap, period, 2) == 0b00);
  b.pending_bits = 10000;
  CHECK(policy_reactive(b, cap, period, 2) == 0b00);
  b.pending_bits = 10001;
  CHECK(policy_reactive(b, cap, period, 2) == 0b01);
  b.pending_bits = 30000;
  CHECK(policy_reactive(b, cap, period, 2) == 0b11);
  b.pending_bits = 1000000;
  CHECK(policy_reactive(b, cap, period, 2) == 0b11);
  CHECK(policy_reactive(b, cap, period, 3) == 0b111);
}

TEST_CASE("reactive policy with a dead PCC requests everything it can") {
  Buffer b;
  CHECK(policy_reactive(b, 0, 10, 2) == 0b00);
  b.pending_bits = 1;
  CHECK(policy_reactive(b, 0, 10, 2) == 0b11);
}
