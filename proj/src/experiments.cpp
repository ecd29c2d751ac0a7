#include "kcp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace kcp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Replica bodies write only into their own index slot, so aggregation in
// index order is independent of the thread count.
void run_replicas(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t r = 0; r < n; ++r) body(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n) return;
      body(r);
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(jobs, static_cast<int>(n));
  pool.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  double sum = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) {
      sum += x;
      ++out.n;
    }
  if (out.n == 0) return out;
  out.mean = sum / static_cast<double>(out.n);
  double ss = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) ss += (x - out.mean) * (x - out.mean);
  if (out.n > 1)
    out.se = std::sqrt(ss / static_cast<double>(out.n - 1) / static_cast<double>(out.n));
  return out;
}

RngStream replica_stream(const RngStream& base, const char* tag, std::size_t replica) {
  return base.derive({fnv1a64(tag), static_cast<std::uint64_t>(replica)});
}

}  // namespace

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n) {
  if (n == 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(n);
  const double f = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (f + z * z / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(f * (1.0 - f) / nn + z * z / (4.0 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

DecayResult verify_decay(int dim, double lambda, double mu, std::span<const double> t_grid,
                         std::size_t replicas, const RngStream& base, const RunOptions& run) {
  if (t_grid.empty()) throw std::invalid_argument("verify_decay: empty time grid");
  Params params;
  params.dim = dim;
  params.lambda = lambda;
  params.mu = mu;
  params.domain = DomainSpec::lazy(dim);
  params.horizon = t_grid.back();
  for (double t : t_grid)
    if (t == 0.0) throw std::invalid_argument("verify_decay: use strictly positive grid times");
  params.validate(ProcessKind::Unbounded);

  std::vector<std::vector<double>> values(t_grid.size(), std::vector<double>(replicas, kNaN));
  std::vector<std::uint8_t> censored(replicas, 0);

  const LatticeState initial =
      LatticeState::single(ProcessKind::Unbounded, Site::origin(dim), 1.0);
  EvolveOptions evolve_opts;
  evolve_opts.max_events = run.max_events;

  run_replicas(replicas, run.jobs, [&](std::size_t r) {
    const RngStream rng = replica_stream(base, "decay", r);
    const Trajectory traj = evolve(initial, params, rng, t_grid, evolve_opts);
    if (traj.censored) {
      censored[r] = 1;
      return;
    }
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      values[k][r] = total_knowledge(traj.samples[k].state);
  });

  DecayResult out;
  out.replicas = replicas;
  const double drift = drift_coefficient(dim, lambda, mu);
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const MeanSe ms = mean_se(values[k]);
    out.rows.push_back({t_grid[k], ms.mean, ms.se, std::exp(drift * t_grid[k])});
  }
  for (std::uint8_t c : censored) out.censored += c;
  if (run.keep_replica_values) out.replica_values = std::move(values);
  return out;
}

namespace {

SurvivalEstimate summarize_survival(const std::vector<double>& xi, double delta) {
  SurvivalEstimate est;
  est.replicas = xi.size();
  est.indicators.reserve(xi.size());
  std::size_t hits = 0;
  for (double v : xi) {
    const bool alive = v > delta;
    est.indicators.push_back(alive ? 1 : 0);
    hits += alive ? 1 : 0;
  }
  est.frequency = est.replicas ? static_cast<double>(hits) / static_cast<double>(est.replicas) : 0.0;
  std::tie(est.ci_lo, est.ci_hi) = wilson_interval(hits, est.replicas);
  const MeanSe ms = mean_se(xi);
  est.mean_xi = ms.mean;
  est.se_xi = ms.se;
  return est;
}

}  // namespace

SurvivalEstimate estimate_survival(const Params& params, ProcessKind kind, double delta,
                                   std::size_t replicas, const RngStream& base,
                                   const RunOptions& run, double rate_ceiling) {
  params.validate(kind);
  if (!params.domain.finite())
    throw std::invalid_argument("estimate_survival: requires a finite domain");
  const double ceiling = std::max(params.lambda, rate_ceiling);

  const LatticeState initial =
      LatticeState::single(kind, Site::origin(params.dim), 1.0, params.clamp_eps);
  const double sample_times[1] = {params.horizon};
  std::vector<double> xi(replicas, 0.0);
  EvolveOptions evolve_opts;
  evolve_opts.max_events = run.max_events;

  run_replicas(replicas, run.jobs, [&](std::size_t r) {
    const RngStream rng = replica_stream(base, "survival", r);
    const Timeline tl = build_timeline(params.domain, ceiling, params.horizon, rng);
    LaneSpec lane{kind, params.lambda, params.mu, initial};
    const std::vector<Trajectory> trajs =
        evolve_lanes_on(tl, std::span(&lane, 1), sample_times, evolve_opts);
    xi[r] = total_knowledge(trajs[0].samples[0].state);
  });
  return summarize_survival(xi, delta);
}

SweepTable sweep_phase_grid(std::span<const double> lambda_grid, std::span<const double> mu_grid,
                            const SweepConfig& config, const RngStream& base) {
  if (lambda_grid.empty() || mu_grid.empty())
    throw std::invalid_argument("sweep_phase_grid: grids must be nonempty");
  if (!config.domain.finite()) throw std::invalid_argument("sweep_phase_grid: finite domain only");

  double ceiling = 0.0;
  for (double l : lambda_grid) {
    if (l < 0.0) throw std::invalid_argument("sweep_phase_grid: negative rate");
    ceiling = std::max(ceiling, l);
  }

  const std::size_t n_cells = lambda_grid.size() * mu_grid.size();
  std::vector<LaneSpec> lanes;
  lanes.reserve(n_cells);
  const int dim = config.domain.dim();
  for (double l : lambda_grid)
    for (double m : mu_grid)
      lanes.push_back({config.kind, l, m,
                       LatticeState::single(config.kind, Site::origin(dim), 1.0, config.clamp_eps)});

  const double sample_times[1] = {config.horizon};
  std::vector<std::vector<double>> xi(n_cells, std::vector<double>(config.replicas, 0.0));
  EvolveOptions evolve_opts;
  evolve_opts.max_events = config.run.max_events;

  run_replicas(config.replicas, config.run.jobs, [&](std::size_t r) {
    const RngStream rng = replica_stream(base, "survival", r);
    const Timeline tl = build_timeline(config.domain, ceiling, config.horizon, rng);
    const std::vector<Trajectory> trajs = evolve_lanes_on(tl, lanes, sample_times, evolve_opts);
    for (std::size_t c = 0; c < n_cells; ++c)
      xi[c][r] = total_knowledge(trajs[c].samples[0].state);
  });

  SweepTable table;
  table.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  table.mu_grid.assign(mu_grid.begin(), mu_grid.end());
  table.config = config;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i)
    for (std::size_t j = 0; j < mu_grid.size(); ++j) {
      SweepCell cell;
      cell.lambda = lambda_grid[i];
      cell.mu = mu_grid[j];
      cell.estimate = summarize_survival(xi[i * mu_grid.size() + j], config.delta);
      table.cells.push_back(std::move(cell));
    }
  return table;
}

BisectResult bisect_critical(BisectDirection direction, double fixed_value, double bracket_lo,
                             double bracket_hi, double tolerance, std::size_t replicas,
                             const SweepConfig& config, const RngStream& base, double level) {
  if (!(bracket_lo < bracket_hi)) throw std::invalid_argument("bisect_critical: empty bracket");
  if (!(tolerance > 0.0)) throw std::invalid_argument("bisect_critical: tolerance must be > 0");

  // All probes share the realization drawn at one rate ceiling, so the
  // per-replica indicators (hence frequencies) are monotone in the probe.
  const double ceiling =
      direction == BisectDirection::Lambda ? bracket_hi : fixed_value;

  Params params;
  params.dim = config.domain.dim();
  params.domain = config.domain;
  params.horizon = config.horizon;
  params.clamp_eps = config.clamp_eps;

  BisectResult result;
  result.level = level;
  auto frequency = [&](double probe) {
    params.lambda = direction == BisectDirection::Lambda ? probe : fixed_value;
    params.mu = direction == BisectDirection::Lambda ? fixed_value : probe;
    const SurvivalEstimate est =
        estimate_survival(params, config.kind, config.delta, replicas, base, config.run, ceiling);
    result.probes.push_back({probe, est.frequency});
    return est.frequency;
  };

  double lo = bracket_lo, hi = bracket_hi;
  const double f_hi = frequency(hi);
  if (f_hi < level) {
    result.status = BisectResult::Status::NoTransition;
    result.lo = lo;
    result.hi = hi;
    result.estimate = kNaN;
    return result;
  }
  const double f_lo = frequency(lo);
  if (f_lo >= level)
    throw std::runtime_error(
        "bisect_critical: bracket does not straddle the decision level (lower end already survives)");

  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (frequency(mid) >= level ? hi : lo) = mid;
  }
  result.status = BisectResult::Status::Converged;
  result.lo = lo;
  result.hi = hi;
  result.estimate = 0.5 * (lo + hi);
  return result;
}

InvasionResult check_invasion(double eps, double mu, int dim, std::span<const double> lambdas,
                              std::size_t replicas, const RngStream& base, const RunOptions& run) {
  InvasionResult out;
  out.eps = eps;
  out.mu = mu;
  out.time_scale = invade_time(eps, dim);
  out.interactions_needed = min_interactions(mu);
  out.lambda_plus = solve_lambda_plus(eps, mu, dim);
  out.target = 1.0 - eps;
  out.replicas = replicas;

  std::vector<double> rates(lambdas.begin(), lambdas.end());
  if (rates.empty()) rates.push_back(out.lambda_plus);
  double ceiling = 0.0;
  for (double l : rates) {
    if (!(l > 0.0)) throw std::invalid_argument("check_invasion: rates must be > 0");
    ceiling = std::max(ceiling, l);
  }

  const DomainSpec domain = DomainSpec::free_box(dim, 1);
  const Site center = Site::origin(dim);
  const std::vector<Site> star = domain.neighbors(center);

  std::vector<LaneSpec> lanes;
  for (double l : rates)
    lanes.push_back(
        {ProcessKind::StarRestricted, l, mu,
         LatticeState::single(ProcessKind::StarRestricted, center, 0.5)});

  const double sample_times[1] = {out.time_scale};
  std::vector<std::vector<std::uint8_t>> success(rates.size(),
                                                 std::vector<std::uint8_t>(replicas, 0));
  EvolveOptions evolve_opts;
  evolve_opts.max_events = run.max_events;

  run_replicas(replicas, run.jobs, [&](std::size_t r) {
    const RngStream rng = replica_stream(base, "invade", r);
    const Timeline tl = build_timeline(domain, ceiling, out.time_scale, rng);
    const std::vector<Trajectory> trajs = evolve_lanes_on(tl, lanes, sample_times, evolve_opts);
    for (std::size_t k = 0; k < rates.size(); ++k) {
      bool ok = true;
      for (const Site& nb : star)
        ok = ok && trajs[k].samples[0].state.at(nb) >= 0.5;
      success[k][r] = ok ? 1 : 0;
    }
  });

  for (std::size_t k = 0; k < rates.size(); ++k) {
    std::size_t hits = 0;
    for (std::uint8_t s : success[k]) hits += s;
    out.points.push_back({rates[k], static_cast<double>(hits) / static_cast<double>(replicas)});
  }
  return out;
}

PercolationField oriented_percolation(double p, int depth, std::span<const Site> initial_wet,
                                      int dim, const RngStream& base) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("oriented_percolation: p in [0, 1]");
  if (depth < 0) throw std::invalid_argument("oriented_percolation: depth must be >= 0");
  if (dim < 1) throw std::invalid_argument("oriented_percolation: dimension must be >= 1");

  auto parity = [](const Site& s, int level) {
    std::int64_t sum = level;
    for (Coord c : s.c) sum += c;
    return sum % 2 == 0;
  };
  auto open = [&](const Site& s, int level) {
    SiteHash h;
    RngStream rng = base.derive({fnv1a64("perc"), static_cast<std::uint64_t>(level), h(s)});
    return rng.uniform01() < p;
  };

  PercolationField field;
  field.dim = dim;
  field.p = p;
  field.levels.resize(static_cast<std::size_t>(depth) + 1);
  for (const Site& s : initial_wet) {
    if (s.dim() != dim || !parity(s, 0))
      throw std::invalid_argument("oriented_percolation: initial site outside the even sublattice");
    field.levels[0].insert(s);
  }

  const DomainSpec free_lattice = DomainSpec::lazy(dim);
  std::vector<Site> nbs;
  for (int n = 0; n < depth; ++n) {
    const auto& wet = field.levels[static_cast<std::size_t>(n)];
    auto& next = field.levels[static_cast<std::size_t>(n) + 1];
    for (const Site& z : wet) {
      free_lattice.neighbors(z, nbs);
      for (const Site& z2 : nbs) {
        if (next.contains(z2)) continue;
        if (open(z2, n + 1)) next.insert(z2);
      }
    }
  }
  return field;
}

}  // namespace kcp
