#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "kcp/rng.hpp"

using namespace kcp;

TEST_CASE("identical (master seed, stream id) reproduce identical sequences") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 8);
  bool all_equal = true;
  RngStream a2(42, 7);
  for (int i = 0; i < 64; ++i) all_equal = all_equal && (a2.next_u64() == c.next_u64());
  CHECK_FALSE(all_equal);
}

TEST_CASE("derive depends only on the key words, not on draw position") {
  RngStream a(99, 0), b(99, 0);
  for (int i = 0; i < 17; ++i) a.next_u64();  // advance one copy only
  RngStream da = a.derive({1, 2, 3});
  RngStream db = b.derive({1, 2, 3});
  for (int i = 0; i < 100; ++i) CHECK(da.next_u64() == db.next_u64());
  CHECK(a.derive({1, 2, 3}).next_u64() != a.derive({1, 2, 4}).next_u64());
}

TEST_CASE("uniform01 stays strictly inside (0, 1)") {
  RngStream rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("exponential samples are positive and reject bad rates") {
  RngStream rng(5);
  for (int i = 0; i < 1000; ++i) CHECK(rng.exponential(3.0) > 0.0);
  CHECK_THROWS_AS(rng.exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.exponential(-1.0), std::invalid_argument);
}

TEST_CASE("exponential mean matches 1/rate within 3 standard errors") {
  // Oracle: an exponential with rate r has mean 1/r and sd 1/r.
  const double rate = 2.0;
  const int n = 100000;
  RngStream rng(2024, 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
  const double mean = sum / n;
  const double se = (1.0 / rate) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 1.0 / rate) < 3.0 * se);
}
