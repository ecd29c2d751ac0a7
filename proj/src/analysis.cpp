#include "kcp/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace kcp {

std::pair<double, double> pair_recursion(double x0, double y0, double mu, int steps) {
  if (!(x0 >= 0.0 && x0 <= 1.0 && y0 >= 0.0 && y0 <= 1.0))
    throw std::invalid_argument("pair_recursion: values must lie in [0, 1]");
  if (steps < 0) throw std::invalid_argument("pair_recursion: steps must be >= 0");
  double x = x0, y = y0;
  for (int k = 0; k < steps; ++k) {
    const double nx = x + mu * y * (1.0 - x);
    const double ny = y + mu * x * (1.0 - y);
    x = nx;
    y = ny;
  }
  return {x, y};
}

double pair_learning_bound(double mu, int n) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("pair_learning_bound: mu in [0, 1]");
  if (n < 0) throw std::invalid_argument("pair_learning_bound: n must be >= 0");
  if (mu == 0.0) return 0.0;
  return 1.0 - std::pow(1.0 - mu / 2.0, n);
}

int min_interactions(double mu) {
  if (!(mu > 0.0 && mu <= 1.0))
    throw std::invalid_argument("min_interactions: no finite n unless mu lies in (0, 1]");
  const double q = 1.0 - mu / 2.0;
  int n = static_cast<int>(std::ceil(std::log(0.5) / std::log(q) - 1e-12));
  if (n < 0) n = 0;
  // Settle the boundary by the defining property itself.
  while (std::pow(q, n) > 0.5) ++n;
  while (n > 0 && std::pow(q, n - 1) <= 0.5) --n;
  return n;
}

double invade_time(double eps, int dim) {
  if (!(eps > 0.0 && eps < 2.0)) throw std::domain_error("invade_time: eps must lie in (0, 2)");
  if (dim < 1) throw std::invalid_argument("invade_time: dimension must be >= 1");
  return -std::log1p(-eps / 2.0) / (2.0 * dim + 1.0);
}

double poisson_tail_bound(double mean, std::int64_t n, TailSide side) {
  if (!(mean > 0.0)) throw std::domain_error("poisson_tail_bound: mean must be > 0");
  if (n < 0) throw std::domain_error("poisson_tail_bound: n must be >= 0");
  const double m = mean, dn = static_cast<double>(n);
  if (side == TailSide::Lower && dn > m)
    throw std::domain_error("poisson_tail_bound: lower side requires n <= mean");
  if (side == TailSide::Upper && dn < m)
    throw std::domain_error("poisson_tail_bound: upper side requires n >= mean");
  if (n == 0) return std::exp(-m);
  if (dn == m) return 1.0;
  return std::exp(dn * (1.0 + std::log(m) - std::log(dn)) - m);
}

double drift_coefficient(int dim, double lambda, double mu) {
  if (dim < 1) throw std::invalid_argument("drift_coefficient: dimension must be >= 1");
  return 2.0 * dim * lambda * mu - 1.0;
}

double mu_threshold(std::int64_t block_scale) {
  if (block_scale < 1) throw std::invalid_argument("mu_threshold: block scale must be >= 1");
  const double cube = static_cast<double>(block_scale) * static_cast<double>(block_scale) *
                      static_cast<double>(block_scale);
  const double from_chain = std::pow(5.0 / 6.0, 1.0 / cube);
  // (2mu/5)(2 - 2mu/5) >= 3/5 with a = 2mu/5 <= 2/5 gives a >= 1 - sqrt(2/5).
  const double from_jump = 2.5 * (1.0 - std::sqrt(0.4));
  return std::max(from_chain, from_jump);
}

double solve_lambda_plus(double eps, double mu, int dim) {
  const double T = invade_time(eps, dim);
  const int n = min_interactions(mu);
  const double target = 1.0 - eps / 2.0;
  auto criterion = [&](double lambda) {
    const double m = lambda * T;
    if (!(static_cast<double>(n) < m)) return false;
    const double bound = poisson_tail_bound(m, n, TailSide::Lower);
    return std::pow(1.0 - bound, 2.0 * dim) >= target;
  };

  double lo = static_cast<double>(n) / T;
  double hi = std::max(2.0 * lo, 1.0);
  constexpr double kCap = 1e12;
  while (!criterion(hi)) {
    hi *= 2.0;
    if (hi > kCap)
      throw std::runtime_error("solve_lambda_plus: no rate below the search cap satisfies the bound");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (criterion(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace kcp
