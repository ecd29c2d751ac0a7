#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "kcp/analysis.hpp"
#include "kcp/dynamics.hpp"
#include "kcp/observables.hpp"

namespace kcp {

/// Knobs shared by every replicated experiment.
struct RunOptions {
  int jobs = 1;
  /// Per-replica event budget; exceeding replicas are censored and counted.
  std::uint64_t max_events = 10'000'000;
  /// Keep per-replica values (needed for paired statistics).
  bool keep_replica_values = false;
};

/// Wilson 95% score interval for `successes` out of `n`.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n);

// ---------------------------------------------------------------------------
// Exponential decay of the dominating process's mean total knowledge
// ---------------------------------------------------------------------------

struct DecayRow {
  double t = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double closed_form = 0.0;  // exp((2 d lambda mu - 1) t)
};

struct DecayResult {
  std::vector<DecayRow> rows;
  std::size_t replicas = 0;
  std::size_t censored = 0;
  /// [time index][replica]; NaN for censored replicas. Filled only when
  /// RunOptions::keep_replica_values is set.
  std::vector<std::vector<double>> replica_values;
};

/// Monte Carlo check of E(total knowledge) = exp((2 d lambda mu - 1) t) for
/// the dominating process started from a single unit of knowledge at the
/// origin of the unbounded lattice (exact infinite-volume semantics via the
/// lazy engine).
DecayResult verify_decay(int dim, double lambda, double mu, std::span<const double> t_grid,
                         std::size_t replicas, const RngStream& base, const RunOptions& run = {});

// ---------------------------------------------------------------------------
// Finite-horizon survival
// ---------------------------------------------------------------------------

struct SurvivalEstimate {
  double frequency = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // Wilson 95%
  double mean_xi = 0.0, se_xi = 0.0;
  std::size_t replicas = 0;
  std::vector<std::uint8_t> indicators;  // per replica, in replica order
};

/// Fraction of replicas whose total knowledge at the horizon exceeds `delta`,
/// starting from a single omniscient origin. `rate_ceiling` (>= lambda) fixes
/// the shared randomness so that estimates at different rates below one
/// ceiling are coupled pathwise; 0 means params.lambda.
SurvivalEstimate estimate_survival(const Params& params, ProcessKind kind, double delta,
                                   std::size_t replicas, const RngStream& base,
                                   const RunOptions& run = {}, double rate_ceiling = 0.0);

// ---------------------------------------------------------------------------
// Phase-structure sweep
// ---------------------------------------------------------------------------

struct SweepConfig {
  DomainSpec domain = DomainSpec::torus(1, 201);
  double horizon = 50.0;
  double delta = 0.0;
  std::size_t replicas = 200;
  ProcessKind kind = ProcessKind::Bounded;
  double clamp_eps = 1e-12;
  RunOptions run;
};

struct SweepCell {
  double lambda = 0.0;
  double mu = 0.0;
  SurvivalEstimate estimate;
};

struct SweepTable {
  std::vector<double> lambda_grid, mu_grid;
  SweepConfig config;
  std::vector<SweepCell> cells;  // lambda-major order

  const SweepCell& cell(std::size_t lambda_idx, std::size_t mu_idx) const {
    return cells[lambda_idx * mu_grid.size() + mu_idx];
  }
};

/// One survival estimate per (lambda, mu) grid cell. All cells of one replica
/// share a single realization at the top rate of the grid, so per-replica
/// survival indicators are nondecreasing along both grid directions.
SweepTable sweep_phase_grid(std::span<const double> lambda_grid, std::span<const double> mu_grid,
                            const SweepConfig& config, const RngStream& base);

// ---------------------------------------------------------------------------
// Critical-value bisection (finite-size, finite-horizon proxy)
// ---------------------------------------------------------------------------

enum class BisectDirection { Lambda, Mu };

struct BisectProbe {
  double value = 0.0;
  double frequency = 0.0;
};

struct BisectResult {
  enum class Status { Converged, NoTransition } status = Status::Converged;
  double estimate = 0.0;  // midpoint of the final bracket (Converged only)
  double lo = 0.0, hi = 0.0;
  double level = 0.5;
  std::vector<BisectProbe> probes;
};

/// Bisect the survival frequency against `level` along one parameter
/// direction, the other parameter fixed. Probes share replica randomness
/// under one rate ceiling, so the decision rule is monotone in the probe.
/// The result is a proxy labeled by (domain, horizon, delta); if even the
/// upper bracket end stays below the level, returns NoTransition. A lower
/// bracket end already above the level throws a bracketing error.
BisectResult bisect_critical(BisectDirection direction, double fixed_value,
                             double bracket_lo, double bracket_hi, double tolerance,
                             std::size_t replicas, const SweepConfig& config,
                             const RngStream& base, double level = 0.5);

// ---------------------------------------------------------------------------
// Star-graph invasion
// ---------------------------------------------------------------------------

struct InvasionPoint {
  double lambda = 0.0;
  double frequency = 0.0;
};

struct InvasionResult {
  double eps = 0.0;
  double mu = 0.0;
  double time_scale = 0.0;     // invade_time(eps, dim)
  int interactions_needed = 0; // min_interactions(mu)
  double lambda_plus = 0.0;    // solve_lambda_plus(eps, mu, dim)
  double target = 0.0;         // 1 - eps
  std::size_t replicas = 0;
  std::vector<InvasionPoint> points;
};

/// Frequency of {every neighbor of the center holds >= 1/2 at time T} for the
/// star-restricted process started from center knowledge 1/2, at each rate in
/// `lambdas` (empty: just lambda_plus). Rates share one realization per
/// replica, so frequencies are nondecreasing in lambda.
InvasionResult check_invasion(double eps, double mu, int dim, std::span<const double> lambdas,
                              std::size_t replicas, const RngStream& base,
                              const RunOptions& run = {});

// ---------------------------------------------------------------------------
// Oriented site percolation companion
// ---------------------------------------------------------------------------

/// Wet sites of oriented site percolation on the even sublattice
/// {(z, n) : z_1 + ... + z_d + n even}, with arrows (z, n) -> (z', n+1) for
/// z' ~ z. Sites are open independently with probability p; openness at a
/// given site is a function of (seed, site) only, so fields at different p
/// from one seed are coupled (wet sets nested in p).
struct PercolationField {
  int dim = 1;
  double p = 0.0;
  std::vector<std::unordered_set<Site, SiteHash>> levels;  // levels[n] = wet at depth n

  std::size_t wet_count(std::size_t level) const { return levels[level].size(); }
};

PercolationField oriented_percolation(double p, int depth, std::span<const Site> initial_wet,
                                      int dim, const RngStream& base);

}  // namespace kcp
