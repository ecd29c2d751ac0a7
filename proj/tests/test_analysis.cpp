#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kcp/analysis.hpp"
#include "kcp/rng.hpp"

using namespace kcp;

namespace {

// Exact Poisson tails by direct summation, kept independent of the bound.
double poisson_cdf(double m, int n) {
  double term = std::exp(-m), sum = term;
  for (int k = 1; k <= n; ++k) {
    term *= m / k;
    sum += term;
  }
  return sum;
}

double poisson_upper(double m, int n) {
  double term = std::exp(-m + n * std::log(m) - std::lgamma(n + 1.0));
  double sum = 0.0;
  for (int k = n; term > 1e-320; ++k) {
    sum += term;
    term *= m / (k + 1);
  }
  return sum;
}

}  // namespace

TEST_CASE("pair recursion") {
  SUBCASE("worked examples") {
    auto [x1, y1] = pair_recursion(0.5, 0.0, 1.0, 1);
    CHECK(x1 == 0.5);
    CHECK(y1 == 0.5);
    auto [x2, y2] = pair_recursion(0.5, 0.0, 1.0, 2);
    CHECK(x2 == 0.75);
    CHECK(y2 == 0.75);
    auto [x0, y0] = pair_recursion(0.3, 0.7, 0.0, 57);
    CHECK(x0 == 0.3);
    CHECK(y0 == 0.7);
  }
  SUBCASE("monotone in mu, x0, y0; nondecreasing in k from (x0, 0)") {
    RngStream rng(40);
    for (int i = 0; i < 300; ++i) {
      const double x0 = rng.uniform01(), y0 = rng.uniform01(), mu = rng.uniform01();
      const int k = 1 + static_cast<int>(rng.below(20));
      auto [xa, ya] = pair_recursion(x0, y0, mu, k);
      auto [xb, yb] = pair_recursion(std::min(1.0, x0 + 0.1), y0, mu, k);
      CHECK(xa <= xb);
      CHECK(ya <= yb);
      auto [xc, yc] = pair_recursion(x0, y0, std::min(1.0, mu + 0.1), k);
      CHECK(xa <= xc);
      CHECK(ya <= yc);
    }
    double prev_x = 0.5, prev_y = 0.0;
    for (int k = 1; k <= 100; ++k) {
      auto [x, y] = pair_recursion(0.5, 0.0, 0.3, k);
      CHECK(x >= prev_x);
      CHECK(y >= prev_y);
      CHECK(x >= 0.5);  // teacher never drops below its start
      prev_x = x;
      prev_y = y;
    }
  }
}

TEST_CASE("closed-form learner bound") {
  CHECK(pair_learning_bound(1.0, 1) == 0.5);
  CHECK(pair_learning_bound(0.7, 0) == 0.0);
  CHECK(pair_learning_bound(0.0, 10) == 0.0);

  // The two-site recursion from (1/2, 0) dominates the bound for every n.
  for (int i = 1; i <= 10; ++i) {
    const double mu = std::min(1.0, 0.1 * i);
    double x = 0.5, y = 0.0;
    for (int n = 1; n <= 1000; ++n) {
      const double nx = x + mu * y * (1.0 - x);
      const double ny = y + mu * x * (1.0 - y);
      x = nx;
      y = ny;
      CHECK(y >= pair_learning_bound(mu, n) - 1e-12);
    }
  }
}

TEST_CASE("minimum interactions to reach one half") {
  CHECK(min_interactions(1.0) == 1);
  CHECK(min_interactions(0.5) == 3);  // log(1/2)/log(3/4) ~ 2.41
  CHECK_THROWS_AS(min_interactions(0.0), std::invalid_argument);
  CHECK_THROWS_AS(min_interactions(1.5), std::invalid_argument);

  for (int i = 1; i <= 20; ++i) {
    const double mu = std::min(1.0, 0.05 * i);
    const int n = min_interactions(mu);
    // Defining property, validated against the recursion oracle.
    CHECK(std::pow(1.0 - mu / 2.0, n) <= 0.5);
    if (n > 1) CHECK(std::pow(1.0 - mu / 2.0, n - 1) > 0.5);
    auto [x, y] = pair_recursion(0.5, 0.0, mu, n);
    CHECK(x >= 0.5);
    CHECK(y >= 0.5 - 1e-12);
  }

  SUBCASE("nonincreasing in mu") {
    int prev = min_interactions(0.01);
    for (int i = 2; i <= 100; ++i) {
      const double mu = std::min(1.0, 0.01 * i);
      const int n = min_interactions(mu);
      CHECK(n <= prev);
      prev = n;
    }
  }
}

TEST_CASE("star invasion time scale") {
  CHECK(invade_time(1.0, 2) == doctest::Approx(-std::log(0.5) / 5.0));   // ~0.13863
  CHECK(invade_time(0.5, 1) == doctest::Approx(-std::log(0.75) / 3.0));  // ~0.09589
  CHECK(invade_time(1e-9, 1) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK_THROWS_AS(invade_time(2.0, 1), std::domain_error);
  CHECK_THROWS_AS(invade_time(0.0, 1), std::domain_error);
}

TEST_CASE("Poisson tail bound") {
  SUBCASE("worked example m = 10, n = 2") {
    const double bound = poisson_tail_bound(10.0, 2, TailSide::Lower);
    CHECK(bound == doctest::Approx(8.3866e-3).epsilon(1e-4));
    const double exact = poisson_cdf(10.0, 2);
    CHECK(exact == doctest::Approx(2.7694e-3).epsilon(1e-4));
    CHECK(exact <= bound);
  }
  SUBCASE("boundary n = m gives exactly 1") {
    CHECK(poisson_tail_bound(7.0, 7, TailSide::Lower) == 1.0);
    CHECK(poisson_tail_bound(7.0, 7, TailSide::Upper) == 1.0);
  }
  SUBCASE("side/mean mismatch") {
    CHECK_THROWS_AS(poisson_tail_bound(3.0, 5, TailSide::Lower), std::domain_error);
    CHECK_THROWS_AS(poisson_tail_bound(3.0, 1, TailSide::Upper), std::domain_error);
    CHECK_THROWS_AS(poisson_tail_bound(0.0, 1, TailSide::Upper), std::domain_error);
  }
  SUBCASE("dominates the exact tails for m = 1..50") {
    for (int m = 1; m <= 50; ++m) {
      for (int n = 0; n < m; ++n)
        CHECK(poisson_cdf(m, n) <= poisson_tail_bound(m, n, TailSide::Lower) * (1 + 1e-12));
      const int n_max = m + 10 * static_cast<int>(std::sqrt(m)) + 50;
      for (int n = m + 1; n <= n_max; ++n)
        CHECK(poisson_upper(m, n) <= poisson_tail_bound(m, n, TailSide::Upper) * (1 + 1e-12));
    }
  }
}

TEST_CASE("drift coefficient") {
  CHECK(drift_coefficient(1, 1.0, 0.5) == 0.0);
  CHECK(drift_coefficient(1, 1.0, 0.25) == -0.5);
  CHECK(drift_coefficient(2, 2.0, 0.1) == doctest::Approx(-0.2));
}

TEST_CASE("block-scale teaching threshold") {
  // Quadratic constraint alone: (2mu/5)(2 - 2mu/5) >= 3/5.
  const double root = 2.5 * (1.0 - std::sqrt(0.4));
  CHECK(root == doctest::Approx(0.91886).epsilon(1e-4));
  const double a = 2.0 * root / 5.0;
  CHECK(a * (2.0 - a) == doctest::Approx(0.6).epsilon(1e-12));

  CHECK(mu_threshold(1) == doctest::Approx(root));  // (5/6)^1 < root
  CHECK(mu_threshold(2) == doctest::Approx(std::pow(5.0 / 6.0, 1.0 / 8.0)));
  CHECK(mu_threshold(2) == doctest::Approx(0.97747).epsilon(1e-4));
  CHECK(mu_threshold(50) > 0.999);
  CHECK(mu_threshold(50) < 1.0);
  CHECK_THROWS_AS(mu_threshold(0), std::invalid_argument);

  for (std::int64_t l : {1, 2, 3, 5, 10}) {
    const double mu = mu_threshold(l);
    const double cube = static_cast<double>(l * l * l);
    CHECK(std::pow(mu, cube) >= 5.0 / 6.0 - 1e-12);
    const double b = 2.0 * mu / 5.0;
    CHECK(b * (2.0 - b) >= 0.6 - 1e-12);
  }
}

TEST_CASE("numeric solve for the invasion rate") {
  const double eps = 0.2, mu = 0.5;
  const int dim = 1;
  const double lp = solve_lambda_plus(eps, mu, dim);
  const double T = invade_time(eps, dim);
  const int n = min_interactions(mu);
  auto criterion = [&](double lambda) {
    return std::pow(1.0 - poisson_tail_bound(lambda * T, n, TailSide::Lower), 2.0 * dim) >=
           1.0 - eps / 2.0;
  };
  CHECK(criterion(lp));
  CHECK_FALSE(criterion(lp * 0.99));
  CHECK(lp > n / T);  // bound regime
}
