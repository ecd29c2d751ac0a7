#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kcp/lattice.hpp"
#include "kcp/rng.hpp"

namespace kcp {

enum class EventKind : std::uint8_t { Interaction, SecondaryInteraction, Death };

/// One mark of the graphical representation: an interaction mark on an edge,
/// a secondary (coupling-augmentation) mark, or a death mark at a site.
struct Event {
  double time = 0.0;
  /// Interaction marks carry a uniform position in [0, rate-ceiling): a
  /// process with interaction rate r consumes exactly the marks with
  /// level < r, so nested rates share one realization. Death marks: 0.
  double level = 0.0;
  std::uint64_t seq = 0;  // unique, increases with generation order
  EventKind kind = EventKind::Death;
  Site a, b;  // death: a only; interaction: canonical edge (a, b)

  bool is_interaction() const { return kind != EventKind::Death; }
  Edge edge() const {
    Edge e;
    e.a = a;
    e.b = b;
    return e;
  }
};

struct Timeline {
  DomainSpec domain = DomainSpec::lazy(1);
  double lambda1 = 0.0;
  std::optional<double> lambda2;  // set by augment_for_coupling
  double horizon = 0.0;
  std::vector<Event> events;  // sorted by (time, seq)

  /// Ceiling of the interaction levels present (lambda2 if augmented).
  double rate_ceiling() const { return lambda2.value_or(lambda1); }
};

/// Next ring of a rate-`rate` exponential clock after `current`.
double next_clock_time(double current, double rate, RngStream& rng);

/// Harris graphical representation on a finite domain over [0, horizon]:
/// a rate-`lambda` interaction clock per undirected edge and a rate-one
/// death clock per site, merged into one (time, seq)-sorted event list.
/// Per-entity substreams are keyed off `base`, so the construction does not
/// depend on iteration order.
Timeline build_timeline(const DomainSpec& domain, double lambda, double horizon,
                        const RngStream& base);

/// Timeline for coupling two interaction rates: primary marks at rate
/// `lambda1` plus secondary marks at rate `lambda2 - lambda1` per edge.
/// Dropping the secondary marks recovers build_timeline(lambda1) exactly;
/// keeping all marks gives a rate-`lambda2` stream by superposition.
Timeline augment_for_coupling(const DomainSpec& domain, double lambda1, double lambda2,
                              double horizon, const RngStream& base);

/// One event per line: time (17 significant digits), tag {I, S, D},
/// site/edge coordinates; tab-separated.
void dump_timeline(const Timeline& timeline, std::ostream& os);

namespace detail {

// Substream key tags for the per-entity clocks. Shared with the lazy evolver
// so that eager and lazy evolution consume identical draws.
inline constexpr std::uint64_t kDeathStream = 0x8f1bbcdc00000001ULL;
inline constexpr std::uint64_t kEdgeStream = 0x8f1bbcdc00000002ULL;

RngStream death_stream(const RngStream& base, const Site& s);
RngStream edge_stream(const RngStream& base, const Edge& e, std::uint32_t channel);

}  // namespace detail

}  // namespace kcp
