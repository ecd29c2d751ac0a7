#pragma once

#include <cstdint>
#include <utility>

namespace kcp {

/// k deterministic teaching steps of a two-site system starting from
/// knowledge (x0, y0), no deaths:
///   x_k = x_{k-1} + mu y_{k-1} (1 - x_{k-1}),  and symmetrically for y.
std::pair<double, double> pair_recursion(double x0, double y0, double mu, int steps);

/// Lower bound 1 - (1 - mu/2)^n on the learner's knowledge after n
/// interactions when the teacher starts at 1/2 and the learner at 0.
double pair_learning_bound(double mu, int n);

/// Smallest n with (1 - mu/2)^n <= 1/2: enough two-site interactions to lift
/// an ignorant neighbor of a half-knowledgeable site to at least 1/2.
int min_interactions(double mu);

/// Largest star time scale T with e^{-(2d+1)T} >= 1 - eps/2, i.e. the window
/// in which the star around a site sees no death with probability >= 1-eps/2.
double invade_time(double eps, int dim);

enum class TailSide { Lower, Upper };

/// Chernoff bound (e m / n)^n e^{-m} on the Poisson(m) tail:
/// P(X <= n) for the lower side (requires n < m), P(X >= n) for the upper
/// side (requires n > m).
double poisson_tail_bound(double mean, std::int64_t n, TailSide side);

/// Exponential growth/decay rate of the dominating process's expected total
/// knowledge: 2 d lambda mu - 1.
double drift_coefficient(int dim, double lambda, double mu);

/// Smallest fraction mu satisfying both block-scale constraints
/// mu^(L^3) >= 5/6 and (2mu/5)(2 - 2mu/5) >= 3/5.
double mu_threshold(std::int64_t block_scale);

/// Smallest interaction rate for which the star invasion succeeds with
/// probability >= 1 - eps/2 by the Chernoff-bound criterion
/// (1 - (e lambda T / n)^n e^{-lambda T})^(2d) >= 1 - eps/2,
/// with T = invade_time(eps, dim) and n = min_interactions(mu).
double solve_lambda_plus(double eps, double mu, int dim);

}  // namespace kcp
