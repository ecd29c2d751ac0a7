#include "kcp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace kcp {

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::Bounded: return "bounded";
    case ProcessKind::Unbounded: return "unbounded";
    case ProcessKind::Contact: return "contact";
    case ProcessKind::StarRestricted: return "star";
  }
  return "?";
}

namespace {

bool bounded_kind(ProcessKind k) {
  return k == ProcessKind::Bounded || k == ProcessKind::StarRestricted;
}

// Boundary snap for bounded kinds; monotone, so it preserves couplings.
double snap(double v, double eps) {
  if (v > 1.0 - eps) return 1.0;
  if (v < eps) return 0.0;
  return v;
}

void check_value(ProcessKind kind, double v) {
  switch (kind) {
    case ProcessKind::Bounded:
    case ProcessKind::StarRestricted:
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("state: bounded knowledge must lie in [0, 1]");
      break;
    case ProcessKind::Contact:
      if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("state: contact values must be exactly 0 or 1");
      break;
    case ProcessKind::Unbounded:
      if (!(v >= 0.0)) throw std::invalid_argument("state: knowledge must be >= 0");
      break;
  }
}

// Core two-site update from pre-update values; returns the new pair.
// The algebraic identity 1 - x' = (1 - x)(1 - mu y) is asserted per
// interaction to 1e-12 for bounded kinds.
struct PairUpdate {
  double x, y;
};

PairUpdate bounded_update(double vx, double vy, double mu) {
  const double nx = vx + mu * vy * (1.0 - vx);
  const double ny = vy + mu * vx * (1.0 - vy);
  const double rx = (1.0 - vx) * (1.0 - mu * vy);
  const double ry = (1.0 - vy) * (1.0 - mu * vx);
  if (std::abs((1.0 - nx) - rx) > 1e-12 || std::abs((1.0 - ny) - ry) > 1e-12 || rx < -1e-12 ||
      ry < -1e-12)
    throw std::logic_error("interaction update broke the complement identity");
  return {nx, ny};
}

PairUpdate contact_update(double vx, double vy) {
  if (vx > 0.0 || vy > 0.0) return {1.0, 1.0};
  return {vx, vy};
}

PairUpdate unbounded_update(double vx, double vy, double mu) {
  return {vx + mu * vy, vy + mu * vx};
}

PairUpdate kind_update(ProcessKind kind, double vx, double vy, double mu) {
  switch (kind) {
    case ProcessKind::Contact: return contact_update(vx, vy);
    case ProcessKind::Unbounded: return unbounded_update(vx, vy, mu);
    default: return bounded_update(vx, vy, mu);
  }
}

void require_edge(const DomainSpec& domain, const Site& x, const Site& y) {
  if (x == y) throw std::invalid_argument("interaction: x and y must be distinct sites");
  if (!domain.contains(domain.canonical(x)) || !domain.contains(domain.canonical(y)))
    throw std::invalid_argument("interaction: site outside domain");
  if (!domain.adjacent(x, y))
    throw std::invalid_argument("interaction: sites are not nearest neighbors");
}

}  // namespace

LatticeState LatticeState::single(ProcessKind kind, Site site, double value, double clamp_eps) {
  LatticeState s(kind, clamp_eps);
  if (kind == ProcessKind::StarRestricted) s.set_star_center(site);
  s.set(site, value);
  return s;
}

void LatticeState::set(const Site& s, double v) {
  check_value(kind_, v);
  if (bounded_kind(kind_)) v = snap(v, clamp_eps_);
  if (v == 0.0) {
    values_.erase(s);
  } else {
    values_[s] = v;
  }
}

std::vector<std::pair<Site, double>> LatticeState::sorted_entries() const {
  std::vector<std::pair<Site, double>> out(values_.begin(), values_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void LatticeState::validate(const DomainSpec& domain) const {
  for (const auto& [site, value] : values_) {
    if (value == 0.0) throw std::invalid_argument("state: explicit zero entry stored");
    check_value(kind_, value);
    if (site.dim() != domain.dim() || !domain.contains(site) || !(domain.canonical(site) == site))
      throw std::invalid_argument("state: site outside domain or not canonical");
  }
  if (kind_ == ProcessKind::StarRestricted && !star_center_)
    throw std::invalid_argument("state: star-restricted state needs a center site");
}

void Params::validate(ProcessKind kind) const {
  if (dim < 1 || dim != domain.dim()) throw std::invalid_argument("params: bad dimension");
  if (!(lambda >= 0.0)) throw std::invalid_argument("params: lambda must be >= 0");
  if (!(mu >= 0.0)) throw std::invalid_argument("params: mu must be >= 0");
  // mu > 1 is meaningful only for the dominating process; it is outside the
  // model's stated parameter range and permitted there alone.
  if (mu > 1.0 && kind != ProcessKind::Unbounded)
    throw std::invalid_argument("params: mu must lie in [0, 1] for this process kind");
  if (!(horizon > 0.0)) throw std::invalid_argument("params: horizon must be > 0");
  if (!(clamp_eps >= 0.0 && clamp_eps < 0.5)) throw std::invalid_argument("params: bad clamp_eps");
}

const LatticeState& Trajectory::state_at(double time) const {
  for (const TrajectorySample& s : samples)
    if (s.time == time) return s.state;
  throw std::invalid_argument("trajectory: no sample recorded at requested time");
}

void apply_interaction(LatticeState& state, const DomainSpec& domain, const Site& x, const Site& y,
                       double mu) {
  if (state.kind() == ProcessKind::Unbounded)
    throw std::invalid_argument("apply_interaction: use apply_interaction_unbounded");
  require_edge(domain, x, y);
  const double vx = state.at(x), vy = state.at(y);
  const PairUpdate u = kind_update(state.kind(), vx, vy, mu);
  state.set(x, u.x);
  state.set(y, u.y);
}

void apply_interaction_unbounded(LatticeState& state, const DomainSpec& domain, const Site& x,
                                 const Site& y, double mu) {
  if (state.kind() != ProcessKind::Unbounded)
    throw std::invalid_argument("apply_interaction_unbounded: state is not an unbounded process");
  require_edge(domain, x, y);
  const double vx = state.at(x), vy = state.at(y);
  const PairUpdate u = unbounded_update(vx, vy, mu);
  state.set(x, u.x);
  state.set(y, u.y);
}

void apply_death(LatticeState& state, const Site& x) { state.erase(x); }

// ---------------------------------------------------------------------------
// Shared lane machinery
// ---------------------------------------------------------------------------

namespace {

struct LaneRuntime {
  ProcessKind kind;
  double lambda;
  double mu;
  double clamp_eps;
  std::optional<Site> star_center;
  // Star lanes confine all dynamics to the center and its neighbors.
  std::vector<Site> star_sites;  // sorted; empty unless star kind

  bool allows(const Site& s) const {
    if (kind != ProcessKind::StarRestricted) return true;
    return std::binary_search(star_sites.begin(), star_sites.end(), s);
  }
  bool allows_edge(const Site& a, const Site& b) const { return allows(a) && allows(b); }
  bool consumes_level(double level) const { return level < lambda; }
};

LaneRuntime make_runtime(const DomainSpec& domain, const LaneSpec& lane) {
  if (!(lane.lambda >= 0.0)) throw std::invalid_argument("lane: lambda must be >= 0");
  if (!(lane.mu >= 0.0)) throw std::invalid_argument("lane: mu must be >= 0");
  if (lane.mu > 1.0 && lane.kind != ProcessKind::Unbounded)
    throw std::invalid_argument("lane: mu must lie in [0, 1] for this process kind");
  lane.initial.validate(domain);
  if (lane.initial.kind() != lane.kind)
    throw std::invalid_argument("lane: initial state kind mismatch");
  LaneRuntime rt{lane.kind, lane.lambda, lane.mu, lane.initial.clamp_eps(),
                 lane.initial.star_center(), {}};
  if (lane.kind == ProcessKind::StarRestricted) {
    if (!rt.star_center) throw std::invalid_argument("lane: star lane needs a center site");
    rt.star_sites = domain.neighbors(*rt.star_center);
    rt.star_sites.push_back(*rt.star_center);
    std::sort(rt.star_sites.begin(), rt.star_sites.end());
  }
  return rt;
}

void check_sample_times(std::span<const double> sample_times, double horizon) {
  double prev = 0.0;
  for (double t : sample_times) {
    if (!(t >= 0.0) || t > horizon)
      throw std::invalid_argument("evolve: sample time beyond horizon");
    if (t < prev) throw std::invalid_argument("evolve: sample times must be nondecreasing");
    prev = t;
  }
}

// --- eager (finite domain, prebuilt timeline) ------------------------------

class DenseView final : public LaneStateView {
 public:
  DenseView(const DomainSpec& domain, const std::vector<std::vector<double>>& vals)
      : domain_(domain), vals_(vals) {}
  std::size_t lane_count() const override { return vals_.size(); }
  double value(std::size_t lane, const Site& site) const override {
    const Site c = domain_.canonical(site);
    if (!domain_.contains(c)) return 0.0;
    return vals_[lane][static_cast<std::size_t>(domain_.site_index(c))];
  }

 private:
  const DomainSpec& domain_;
  const std::vector<std::vector<double>>& vals_;
};

LatticeState dense_snapshot(const DomainSpec& domain, const LaneRuntime& rt,
                            const std::vector<double>& vals) {
  LatticeState out(rt.kind, rt.clamp_eps);
  if (rt.star_center) out.set_star_center(*rt.star_center);
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] != 0.0) out.set(domain.site_at(static_cast<std::int64_t>(i)), vals[i]);
  return out;
}

std::vector<Trajectory> evolve_eager(const Timeline& timeline, std::span<const LaneSpec> lanes,
                                     std::span<const double> sample_times,
                                     const EvolveOptions& options) {
  const DomainSpec& domain = timeline.domain;
  check_sample_times(sample_times, timeline.horizon);

  std::vector<LaneRuntime> rts;
  std::vector<std::vector<double>> vals;
  for (const LaneSpec& lane : lanes) {
    LaneRuntime rt = make_runtime(domain, lane);
    if (rt.lambda > timeline.rate_ceiling() + 1e-12)
      throw std::invalid_argument("evolve: lane rate exceeds the timeline's rate ceiling");
    std::vector<double> v(static_cast<std::size_t>(domain.site_count()), 0.0);
    for (const auto& [site, value] : lane.initial.values())
      v[static_cast<std::size_t>(domain.site_index(site))] = value;
    rts.push_back(std::move(rt));
    vals.push_back(std::move(v));
  }

  std::vector<Trajectory> out(lanes.size());
  DenseView view(domain, vals);
  std::size_t next_sample = 0;
  std::uint64_t applied = 0;
  bool censored = false;

  auto record_through = [&](double up_to_time) {
    while (next_sample < sample_times.size() && sample_times[next_sample] < up_to_time) {
      for (std::size_t l = 0; l < rts.size(); ++l)
        out[l].samples.push_back({sample_times[next_sample], dense_snapshot(domain, rts[l], vals[l])});
      ++next_sample;
    }
  };

  for (const Event& ev : timeline.events) {
    record_through(ev.time);
    if (options.max_events && applied >= options.max_events) {
      censored = true;
      break;
    }
    if (ev.kind == EventKind::Death) {
      const auto idx = static_cast<std::size_t>(domain.site_index(ev.a));
      for (std::size_t l = 0; l < rts.size(); ++l)
        if (rts[l].allows(ev.a)) vals[l][idx] = 0.0;
    } else {
      const auto ia = static_cast<std::size_t>(domain.site_index(ev.a));
      const auto ib = static_cast<std::size_t>(domain.site_index(ev.b));
      for (std::size_t l = 0; l < rts.size(); ++l) {
        LaneRuntime& rt = rts[l];
        if (!rt.consumes_level(ev.level) || !rt.allows_edge(ev.a, ev.b)) continue;
        const PairUpdate u = kind_update(rt.kind, vals[l][ia], vals[l][ib], rt.mu);
        vals[l][ia] = rt.kind == ProcessKind::Contact || rt.kind == ProcessKind::Unbounded
                          ? u.x
                          : snap(u.x, rt.clamp_eps);
        vals[l][ib] = rt.kind == ProcessKind::Contact || rt.kind == ProcessKind::Unbounded
                          ? u.y
                          : snap(u.y, rt.clamp_eps);
      }
    }
    ++applied;
    if (options.observer) options.observer(ev, view);
  }
  // Remaining samples (at or beyond the last event time).
  record_through(timeline.horizon + 1.0);

  for (std::size_t l = 0; l < out.size(); ++l) {
    out[l].events_applied = applied;
    out[l].censored = censored;
  }
  return out;
}

// --- lazy (active-region, on-demand clocks) --------------------------------

// Entity rank used to order simultaneous events consistently with the eager
// engine's generation order (deaths before interactions, channel 0 before 1,
// entities in canonical order).
struct QEntry {
  double time;
  std::uint8_t rank;  // 0 = death, 1 + channel = interaction
  Site a, b;
};

struct QEntryGreater {
  bool operator()(const QEntry& l, const QEntry& r) const {
    if (l.time != r.time) return l.time > r.time;
    if (l.rank != r.rank) return l.rank > r.rank;
    if (!(l.a == r.a)) return r.a < l.a;
    return r.b < l.b;
  }
};

struct ChannelSpec {
  double rate;
  double level_base;
};

struct SiteClock {
  RngStream rng;
  double next = 0.0;
};

struct EdgeClock {
  RngStream rng;
  double next = 0.0;
  double level = 0.0;
};

struct EdgeChannelKey {
  Edge edge;
  std::uint32_t channel;
  friend bool operator==(const EdgeChannelKey& l, const EdgeChannelKey& r) {
    return l.channel == r.channel && l.edge == r.edge;
  }
};

struct EdgeChannelKeyHash {
  std::size_t operator()(const EdgeChannelKey& k) const {
    return static_cast<std::size_t>(mix64(EdgeHash{}(k.edge) ^ (k.channel + 0x2545f4914f6cdd1dULL)));
  }
};

class SparseView final : public LaneStateView {
 public:
  explicit SparseView(const std::vector<LatticeState>& states) : states_(states) {}
  std::size_t lane_count() const override { return states_.size(); }
  double value(std::size_t lane, const Site& site) const override {
    return states_[lane].at(site);
  }

 private:
  const std::vector<LatticeState>& states_;
};

class LazyEngine {
 public:
  LazyEngine(const DomainSpec& domain, double horizon, std::span<const LaneSpec> lanes,
             std::span<const ChannelSpec> channels, const RngStream& base,
             std::span<const double> sample_times, const EvolveOptions& options)
      : domain_(domain), horizon_(horizon), channels_(channels.begin(), channels.end()),
        base_(base), sample_times_(sample_times), options_(options) {
    check_sample_times(sample_times, horizon);
    for (const LaneSpec& lane : lanes) {
      rts_.push_back(make_runtime(domain, lane));
      states_.push_back(lane.initial);
      out_.emplace_back();
    }
    for (const LatticeState& st : states_)
      for (const auto& [site, value] : st.values()) activate(site, -1.0);
  }

  std::vector<Trajectory> run() {
    SparseView view(states_);
    while (!queue_.empty()) {
      QEntry entry = queue_.top();
      if (entry.time > horizon_) break;
      queue_.pop();
      record_through(entry.time);
      if (options_.max_events && applied_ >= options_.max_events) {
        censored_ = true;
        break;
      }
      Event ev = fire(entry);
      ++applied_;
      if (options_.observer) options_.observer(ev, view);
    }
    record_through(horizon_ + 1.0);
    for (std::size_t l = 0; l < out_.size(); ++l) {
      out_[l].events_applied = applied_;
      out_[l].censored = censored_;
    }
    return std::move(out_);
  }

 private:
  void record_through(double up_to_time) {
    while (next_sample_ < sample_times_.size() && sample_times_[next_sample_] < up_to_time) {
      for (std::size_t l = 0; l < states_.size(); ++l)
        out_[l].samples.push_back({sample_times_[next_sample_], states_[l]});
      ++next_sample_;
    }
  }

  // Track a newly relevant site: its death clock plus every incident edge.
  // Clocks fast-forward their substream from time zero past `now`, which is
  // exact because all skipped events were no-ops while the region was empty,
  // and reproduces the eager per-entity sequences draw for draw.
  void activate(const Site& site, double now) {
    if (tracked_sites_.insert(site).second) {
      SiteClock clock{detail::death_stream(base_, site), 0.0};
      do {
        clock.next = next_clock_time(clock.next, 1.0, clock.rng);
      } while (clock.next < now);
      if (clock.next <= horizon_) queue_.push({clock.next, 0, site, Site{}});
      site_clocks_.emplace(site, std::move(clock));
    }
    domain_.neighbors(site, scratch_neighbors_);
    for (const Site& nb : scratch_neighbors_) {
      Edge e = Edge::canonical(site, nb);
      if (!tracked_edges_.insert(e).second) continue;
      for (std::uint32_t c = 0; c < channels_.size(); ++c) {
        if (channels_[c].rate <= 0.0) continue;
        EdgeClock clock{detail::edge_stream(base_, e, c), 0.0, 0.0};
        do {
          clock.next = next_clock_time(clock.next, channels_[c].rate, clock.rng);
          clock.level = channels_[c].level_base + channels_[c].rate * clock.rng.uniform01();
        } while (clock.next < now);
        if (clock.next <= horizon_)
          queue_.push({clock.next, static_cast<std::uint8_t>(1 + c), e.a, e.b});
        edge_clocks_.emplace(EdgeChannelKey{e, c}, std::move(clock));
      }
    }
  }

  Event fire(const QEntry& entry) {
    Event ev;
    ev.time = entry.time;
    ev.seq = seq_++;
    if (entry.rank == 0) {
      ev.kind = EventKind::Death;
      ev.a = entry.a;
      SiteClock& clock = site_clocks_.at(entry.a);
      clock.next = next_clock_time(clock.next, 1.0, clock.rng);
      if (clock.next <= horizon_) queue_.push({clock.next, 0, entry.a, Site{}});
      for (std::size_t l = 0; l < rts_.size(); ++l)
        if (rts_[l].allows(entry.a)) states_[l].erase(entry.a);
      return ev;
    }

    const std::uint32_t channel = entry.rank - 1;
    Edge e;
    e.a = entry.a;
    e.b = entry.b;
    EdgeClock& clock = edge_clocks_.at(EdgeChannelKey{e, channel});
    ev.kind = channel == 0 ? EventKind::Interaction : EventKind::SecondaryInteraction;
    ev.level = clock.level;
    ev.a = entry.a;
    ev.b = entry.b;
    clock.next = next_clock_time(clock.next, channels_[channel].rate, clock.rng);
    clock.level = channels_[channel].level_base + channels_[channel].rate * clock.rng.uniform01();
    if (clock.next <= horizon_)
      queue_.push({clock.next, static_cast<std::uint8_t>(1 + channel), entry.a, entry.b});

    bool touched_positive = false;
    for (std::size_t l = 0; l < rts_.size(); ++l) {
      LaneRuntime& rt = rts_[l];
      if (!rt.consumes_level(ev.level) || !rt.allows_edge(ev.a, ev.b)) continue;
      LatticeState& st = states_[l];
      const PairUpdate u = kind_update(rt.kind, st.at(ev.a), st.at(ev.b), rt.mu);
      st.set(ev.a, u.x);
      st.set(ev.b, u.y);
      touched_positive = true;
    }
    if (touched_positive) {
      if (any_positive(ev.a)) activate(ev.a, ev.time);
      if (any_positive(ev.b)) activate(ev.b, ev.time);
    }
    return ev;
  }

  bool any_positive(const Site& s) const {
    for (const LatticeState& st : states_)
      if (st.at(s) > 0.0) return true;
    return false;
  }

  const DomainSpec& domain_;
  double horizon_;
  std::vector<ChannelSpec> channels_;
  RngStream base_;
  std::span<const double> sample_times_;
  const EvolveOptions& options_;

  std::vector<LaneRuntime> rts_;
  std::vector<LatticeState> states_;
  std::vector<Trajectory> out_;

  std::priority_queue<QEntry, std::vector<QEntry>, QEntryGreater> queue_;
  std::unordered_set<Site, SiteHash> tracked_sites_;
  std::unordered_set<Edge, EdgeHash> tracked_edges_;
  std::unordered_map<Site, SiteClock, SiteHash> site_clocks_;
  std::unordered_map<EdgeChannelKey, EdgeClock, EdgeChannelKeyHash> edge_clocks_;
  std::vector<Site> scratch_neighbors_;

  std::size_t next_sample_ = 0;
  std::uint64_t applied_ = 0;
  std::uint64_t seq_ = 0;
  bool censored_ = false;
};

double max_lane_lambda(std::span<const LaneSpec> lanes) {
  double top = 0.0;
  for (const LaneSpec& lane : lanes) top = std::max(top, lane.lambda);
  return top;
}

}  // namespace

std::vector<Trajectory> evolve_lanes(const DomainSpec& domain, double horizon,
                                     std::span<const LaneSpec> lanes, const RngStream& base,
                                     std::span<const double> sample_times,
                                     const EvolveOptions& options) {
  if (lanes.empty()) throw std::invalid_argument("evolve: no lanes");
  const double top = max_lane_lambda(lanes);
  if (domain.finite() && !options.force_lazy) {
    Timeline tl = build_timeline(domain, top, horizon, base);
    return evolve_eager(tl, lanes, sample_times, options);
  }
  const ChannelSpec channel{top, 0.0};
  LazyEngine engine(domain, horizon, lanes, std::span(&channel, top > 0.0 ? 1 : 0), base,
                    sample_times, options);
  return engine.run();
}

std::vector<Trajectory> evolve_lanes_on(const Timeline& timeline, std::span<const LaneSpec> lanes,
                                        std::span<const double> sample_times,
                                        const EvolveOptions& options) {
  if (lanes.empty()) throw std::invalid_argument("evolve: no lanes");
  return evolve_eager(timeline, lanes, sample_times, options);
}

Trajectory evolve(const LatticeState& initial, const Params& params, const RngStream& base,
                  std::span<const double> sample_times, const EvolveOptions& options) {
  params.validate(initial.kind());
  LaneSpec lane{initial.kind(), params.lambda, params.mu, initial};
  std::vector<Trajectory> out =
      evolve_lanes(params.domain, params.horizon, std::span(&lane, 1), base, sample_times, options);
  return std::move(out.front());
}

Trajectory evolve_on_timeline(const LatticeState& initial, const Timeline& timeline, double mu,
                              std::span<const double> sample_times, const EvolveOptions& options) {
  LaneSpec lane{initial.kind(), timeline.rate_ceiling(), mu, initial};
  std::vector<Trajectory> out = evolve_lanes_on(timeline, std::span(&lane, 1), sample_times, options);
  return std::move(out.front());
}

std::pair<Trajectory, Trajectory> evolve_coupled(const Params& p1, const Params& p2,
                                                 const LatticeState& initial1,
                                                 const LatticeState& initial2,
                                                 const RngStream& base,
                                                 std::span<const double> sample_times,
                                                 const EvolveOptions& options) {
  p1.validate(initial1.kind());
  p2.validate(initial2.kind());
  if (!(p1.domain == p2.domain) || p1.horizon != p2.horizon)
    throw std::invalid_argument("evolve_coupled: domains and horizons must match");
  if (p1.lambda > p2.lambda || p1.mu > p2.mu)
    throw std::invalid_argument(
        "evolve_coupled: ordering requires lambda1 <= lambda2 and mu1 <= mu2");
  const bool kinds_ok = initial1.kind() == initial2.kind() ||
                        (initial1.kind() == ProcessKind::Bounded &&
                         initial2.kind() == ProcessKind::Unbounded);
  if (!kinds_ok)
    throw std::invalid_argument("evolve_coupled: kinds must match (or bounded vs unbounded)");
  for (const auto& [site, value] : initial1.values())
    if (!(value <= initial2.at(site)))
      throw std::invalid_argument("evolve_coupled: initial configurations are not ordered");

  std::vector<LaneSpec> lanes = {
      {initial1.kind(), p1.lambda, p1.mu, initial1},
      {initial2.kind(), p2.lambda, p2.mu, initial2},
  };

  EvolveOptions opts = options;
  auto user_observer = options.observer;
  opts.observer = [&user_observer](const Event& ev, const LaneStateView& view) {
    const Site* touched[2] = {&ev.a, ev.is_interaction() ? &ev.b : nullptr};
    for (const Site* s : touched) {
      if (!s) continue;
      if (!(view.value(0, *s) <= view.value(1, *s)))
        throw std::logic_error("evolve_coupled: pointwise ordering violated");
    }
    if (user_observer) user_observer(ev, view);
  };

  std::vector<Trajectory> out;
  if (p1.domain.finite() && !options.force_lazy) {
    Timeline tl = augment_for_coupling(p1.domain, p1.lambda, p2.lambda, p1.horizon, base);
    out = evolve_eager(tl, lanes, sample_times, opts);
  } else {
    const ChannelSpec channels[2] = {{p1.lambda, 0.0}, {p2.lambda - p1.lambda, p1.lambda}};
    const std::size_t n_channels = p2.lambda > p1.lambda ? 2 : (p1.lambda > 0.0 ? 1 : 0);
    LazyEngine engine(p1.domain, p1.horizon, lanes, std::span(channels, n_channels), base,
                      sample_times, opts);
    out = engine.run();
  }

  // Full-state ordering at every sample time.
  for (std::size_t k = 0; k < out[0].samples.size(); ++k) {
    const LatticeState& lo = out[0].samples[k].state;
    const LatticeState& hi = out[1].samples[k].state;
    for (const auto& [site, value] : lo.values())
      if (!(value <= hi.at(site)))
        throw std::logic_error("evolve_coupled: pointwise ordering violated at sample time");
  }
  return {std::move(out[0]), std::move(out[1])};
}

}  // namespace kcp
