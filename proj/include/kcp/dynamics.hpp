#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcp/lattice.hpp"
#include "kcp/timeline.hpp"

namespace kcp {

/// The four process variants sharing one graphical representation.
enum class ProcessKind : std::uint8_t { Bounded, Unbounded, Contact, StarRestricted };

const char* to_string(ProcessKind kind);

/// Sparse configuration: site -> knowledge. Sites without an entry hold 0;
/// zero values are never stored explicitly.
///
/// Bounded/StarRestricted values live in [0, 1]; values within `clamp_eps`
/// of a boundary are snapped onto it. Contact values are exactly 0 or 1.
/// Unbounded values are any nonnegative reals (no snapping).
class LatticeState {
 public:
  using Map = std::unordered_map<Site, double, SiteHash>;

  LatticeState() = default;
  explicit LatticeState(ProcessKind kind, double clamp_eps = 1e-12)
      : kind_(kind), clamp_eps_(clamp_eps) {}

  static LatticeState single(ProcessKind kind, Site site, double value,
                             double clamp_eps = 1e-12);

  ProcessKind kind() const { return kind_; }
  double clamp_eps() const { return clamp_eps_; }
  const std::optional<Site>& star_center() const { return star_center_; }
  void set_star_center(Site s) { star_center_ = std::move(s); }

  double at(const Site& s) const {
    auto it = values_.find(s);
    return it == values_.end() ? 0.0 : it->second;
  }
  /// Store `v` at `s`, applying the kind's range rules and boundary snap.
  void set(const Site& s, double v);
  void erase(const Site& s) { values_.erase(s); }

  const Map& values() const { return values_; }
  std::size_t support_size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Support and values as a deterministic, site-sorted list.
  std::vector<std::pair<Site, double>> sorted_entries() const;

  /// Throws unless every entry is positive, in the kind's range, and inside
  /// the (canonicalized) domain.
  void validate(const DomainSpec& domain) const;

  friend bool operator==(const LatticeState& a, const LatticeState& b) {
    return a.values_ == b.values_;
  }

 private:
  ProcessKind kind_ = ProcessKind::Bounded;
  double clamp_eps_ = 1e-12;
  std::optional<Site> star_center_;
  Map values_;
};

/// Model parameters of one process variant.
struct Params {
  int dim = 1;
  double lambda = 1.0;
  double mu = 1.0;
  DomainSpec domain = DomainSpec::lazy(1);
  double horizon = 1.0;
  double clamp_eps = 1e-12;

  void validate(ProcessKind kind) const;
};

struct TrajectorySample {
  double time = 0.0;
  LatticeState state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::uint64_t events_applied = 0;
  /// True when the per-replica work budget aborted the run early.
  bool censored = false;

  const LatticeState& state_at(double time) const;
};

/// Interaction update at an edge {x, y}. Bounded/StarRestricted: both sites
/// learn a fraction mu of the partner's knowledge they do not already hold,
/// from the pre-update values. Contact: infection passes through the mark.
void apply_interaction(LatticeState& state, const DomainSpec& domain, const Site& x,
                       const Site& y, double mu);

/// Uncapped interaction update of the dominating process: each side adds
/// mu times the partner's pre-update value.
void apply_interaction_unbounded(LatticeState& state, const DomainSpec& domain, const Site& x,
                                 const Site& y, double mu);

/// Death mark: the knowledge at x jumps to zero.
void apply_death(LatticeState& state, const Site& x);

/// Read-only access to every lane's configuration during evolution,
/// passed to event observers.
class LaneStateView {
 public:
  virtual ~LaneStateView() = default;
  virtual std::size_t lane_count() const = 0;
  virtual double value(std::size_t lane, const Site& site) const = 0;
};

/// One process evolving over the shared randomness: a lane with interaction
/// rate `lambda` consumes exactly the interaction marks with level < lambda.
struct LaneSpec {
  ProcessKind kind = ProcessKind::Bounded;
  double lambda = 1.0;
  double mu = 1.0;
  LatticeState initial;
};

struct EvolveOptions {
  /// Use the lazy active-region engine even on a finite domain.
  bool force_lazy = false;
  /// Abort (and flag the trajectory censored) after this many events; 0 = off.
  std::uint64_t max_events = 0;
  /// Called after each event is applied.
  std::function<void(const Event&, const LaneStateView&)> observer;
};

/// Evolve several lanes over one realization of the graphical representation
/// on `domain`: an eager timeline when finite, on-demand clocks when lazy.
/// Both engines produce identical trajectories for the same `base` stream.
std::vector<Trajectory> evolve_lanes(const DomainSpec& domain, double horizon,
                                     std::span<const LaneSpec> lanes, const RngStream& base,
                                     std::span<const double> sample_times,
                                     const EvolveOptions& options = {});

/// Same, over an existing timeline (finite domains).
std::vector<Trajectory> evolve_lanes_on(const Timeline& timeline, std::span<const LaneSpec> lanes,
                                        std::span<const double> sample_times,
                                        const EvolveOptions& options = {});

/// Evolve a single process from `initial` through a fresh realization.
Trajectory evolve(const LatticeState& initial, const Params& params, const RngStream& base,
                  std::span<const double> sample_times, const EvolveOptions& options = {});

/// Replay a single process through a fixed, already-built timeline,
/// consuming every interaction mark in it.
Trajectory evolve_on_timeline(const LatticeState& initial, const Timeline& timeline, double mu,
                              std::span<const double> sample_times,
                              const EvolveOptions& options = {});

/// Coupled evolution of two parameterizations under shared randomness:
/// process 1 consumes the primary marks, process 2 the primary and secondary
/// marks. Requires lambda1 <= lambda2, mu1 <= mu2 and initial1 <= initial2
/// pointwise; the pointwise order is asserted after every event (exactly) and
/// a violation throws.
std::pair<Trajectory, Trajectory> evolve_coupled(const Params& p1, const Params& p2,
                                                 const LatticeState& initial1,
                                                 const LatticeState& initial2,
                                                 const RngStream& base,
                                                 std::span<const double> sample_times,
                                                 const EvolveOptions& options = {});

}  // namespace kcp
