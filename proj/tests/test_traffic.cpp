#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "rng.hpp"
#include "traffic.hpp"

using namespace casim;

TEST_CASE("ftp with unit mean arrives every slot with constant size") {
  FtpParams p{1.0, 2000000};
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const auto a = generate_ftp(p, rng);
    REQUIRE(a.has_value());
    CHECK(a->size_bits == 2000000);
  }
}

TEST_CASE("ftp empirical mean inter-arrival tracks the configured mean") {
  FtpParams p{50.0, 1000};
  Rng rng(42);
  std::vector<std::int64_t> arrival_slots;
  for (std::int64_t t = 0; t < 100000; ++t)
    if (generate_ftp(p, rng)) arrival_slots.push_back(t);
  REQUIRE(arrival_slots.size() > 100);
  double gap_sum = 0.0;
  for (std::size_t i = 1; i < arrival_slots.size(); ++i)
    gap_sum += static_cast<double>(arrival_slots[i] - arrival_slots[i - 1]);
  const double mean_gap = gap_sum / static_cast<double>(arrival_slots.size() - 1);
  CHECK(mean_gap > 45.0);
  CHECK(mean_gap < 55.0);
}

TEST_CASE("ftp trace is reproducible for equal seeds") {
  FtpParams p{10.0, 5000};
  Rng a(7), b(7), c(8);
  bool any_difference_against_other_seed = false;
  for (int t = 0; t < 5000; ++t) {
    const auto x = generate_ftp(p, a);
    const auto y = generate_ftp(p, b);
    const auto z = generate_ftp(p, c);
    CHECK(x.has_value() == y.has_value());
    if (x.has_value() != z.has_value()) any_difference_against_other_seed = true;
  }
  CHECK(any_difference_against_other_seed);
}

TEST_CASE("cbr with no off phase arrives every slot") {
  CbrParams p{50000, 10, 0};
  for (std::int64_t t = 0; t < 100; ++t) {
    const auto a = generate_cbr(p, t);
    REQUIRE(a.has_value());
    CHECK(a->size_bits == 50000);
  }
}

TEST_CASE("cbr phase arithmetic") {
  CbrParams p{1000, 10, 10};
  CHECK(generate_cbr(p, 5).has_value());
  CHECK_FALSE(generate_cbr(p, 15).has_value());
  for (std::int64_t t = 0; t < 40; ++t)
    CHECK(generate_cbr(p, t).has_value() == (t % 20 < 10));
}

TEST_CASE("cbr with zero rate never produces arrivals") {
  CbrParams p{0, 10, 10};
  for (std::int64_t t = 0; t < 100; ++t) CHECK_FALSE(generate_cbr(p, t).has_value());
}

TEST_CASE("enqueue grows pending and the arrived counter") {
  Buffer b;
  enqueue(b, {100});
  CHECK(b.pending_bits == 100);
  CHECK(b.cumulative_arrived_bits == 100);
  Buffer c{50, 50, 0};
  enqueue(c, {100});
  CHECK(c.pending_bits == 150);
  CHECK(c.cumulative_arrived_bits == 150);
}

TEST_CASE("serve caps at pending and tracks the served counter") {
  Buffer b{100, 100, 0};
  CHECK(serve(b, 1000) == 100);
  CHECK(b.pending_bits == 0);

  Buffer c{1000, 1000, 0};
  CHECK(serve(c, 100) == 100);
  CHECK(c.pending_bits == 900);

  Buffer d;
  CHECK(serve(d, 12345) == 0);
  CHECK(d.pending_bits == 0);
}

TEST_CASE("two enqueues then a partial serve leave the difference pending") {
  Buffer b;
  enqueue(b, {100});
  enqueue(b, {100});
  CHECK(serve(b, 150) == 150);
  CHECK(b.pending_bits == 50);
  CHECK(b.cumulative_arrived_bits == 200);
  CHECK(b.cumulative_served_bits == 150);
}

TEST_CASE("serve rejects negative capacity") {
  Buffer b;
  CHECK_THROWS_AS(serve(b, -1), std::invalid_argument);
}

TEST_CASE("buffer conservation holds under random operation sequences") {
  Rng rng(99);
  Buffer b;
  for (int step = 0; step < 20000; ++step) {
    if (rng.bernoulli(0.4)) enqueue(b, {static_cast<std::int64_t>(rng.uniform_index(10000)) + 1});
    if (rng.bernoulli(0.7)) serve(b, static_cast<std::int64_t>(rng.uniform_index(8000)));
    REQUIRE(b.pending_bits >= 0);
    REQUIRE(b.pending_bits == b.cumulative_arrived_bits - b.cumulative_served_bits);
  }
}
