#include "kcp/timeline.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace kcp {

double next_clock_time(double current, double rate, RngStream& rng) {
  if (!(current >= 0.0)) throw std::invalid_argument("next_clock_time: current time must be >= 0");
  return current + rng.exponential(rate);
}

namespace detail {

RngStream death_stream(const RngStream& base, const Site& s) {
  std::uint64_t id = mix64(kDeathStream + s.c.size());
  for (Coord v : s.c) id = mix64((id ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(v))) +
                                 0x9e3779b97f4a7c15ULL);
  return base.derive({kDeathStream, id});
}

RngStream edge_stream(const RngStream& base, const Edge& e, std::uint32_t channel) {
  std::uint64_t id = mix64(kEdgeStream + channel);
  for (const Site* s : {&e.a, &e.b})
    for (Coord v : s->c)
      id = mix64((id ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(v))) +
                 0x9e3779b97f4a7c15ULL);
  return base.derive({kEdgeStream, channel, id});
}

}  // namespace detail

namespace {

void append_death_marks(std::vector<Event>& events, const RngStream& base, const Site& site,
                        double horizon, std::uint64_t& seq) {
  RngStream rng = detail::death_stream(base, site);
  double t = 0.0;
  for (;;) {
    t = next_clock_time(t, 1.0, rng);
    if (t > horizon) break;
    Event ev;
    ev.time = t;
    ev.seq = seq++;
    ev.kind = EventKind::Death;
    ev.a = site;
    events.push_back(std::move(ev));
  }
}

void append_interaction_marks(std::vector<Event>& events, const RngStream& base, const Edge& edge,
                              std::uint32_t channel, double rate, double level_base,
                              double horizon, std::uint64_t& seq) {
  if (rate <= 0.0) return;
  RngStream rng = detail::edge_stream(base, edge, channel);
  double t = 0.0;
  for (;;) {
    t = next_clock_time(t, rate, rng);
    const double level = level_base + rate * rng.uniform01();
    if (t > horizon) break;
    Event ev;
    ev.time = t;
    ev.level = level;
    ev.seq = seq++;
    ev.kind = channel == 0 ? EventKind::Interaction : EventKind::SecondaryInteraction;
    ev.a = edge.a;
    ev.b = edge.b;
    events.push_back(std::move(ev));
  }
}

Timeline build_impl(const DomainSpec& domain, double lambda1, std::optional<double> lambda2,
                    double horizon, const RngStream& base) {
  if (!domain.finite())
    throw std::invalid_argument("build_timeline: unsupported mode (lazy domains draw clocks on demand)");
  if (!(horizon > 0.0)) throw std::invalid_argument("build_timeline: horizon must be > 0");
  if (lambda1 < 0.0) throw std::invalid_argument("build_timeline: lambda must be >= 0");
  if (lambda2 && *lambda2 < lambda1)
    throw std::invalid_argument("augment_for_coupling: rate ordering requires lambda1 <= lambda2");

  Timeline tl;
  tl.domain = domain;
  tl.lambda1 = lambda1;
  tl.lambda2 = lambda2;
  tl.horizon = horizon;

  std::uint64_t seq = 0;
  for (const Site& s : domain.sites()) append_death_marks(tl.events, base, s, horizon, seq);
  const std::vector<Edge> edges = domain.edges();
  for (const Edge& e : edges)
    append_interaction_marks(tl.events, base, e, 0, lambda1, 0.0, horizon, seq);
  if (lambda2)
    for (const Edge& e : edges)
      append_interaction_marks(tl.events, base, e, 1, *lambda2 - lambda1, lambda1, horizon, seq);

  std::sort(tl.events.begin(), tl.events.end(), [](const Event& l, const Event& r) {
    if (l.time != r.time) return l.time < r.time;
    return l.seq < r.seq;
  });
  return tl;
}

}  // namespace

Timeline build_timeline(const DomainSpec& domain, double lambda, double horizon,
                        const RngStream& base) {
  return build_impl(domain, lambda, std::nullopt, horizon, base);
}

Timeline augment_for_coupling(const DomainSpec& domain, double lambda1, double lambda2,
                              double horizon, const RngStream& base) {
  return build_impl(domain, lambda1, lambda2, horizon, base);
}

void dump_timeline(const Timeline& timeline, std::ostream& os) {
  char buf[64];
  for (const Event& ev : timeline.events) {
    std::snprintf(buf, sizeof buf, "%.17g", ev.time);
    os << buf << '\t';
    switch (ev.kind) {
      case EventKind::Interaction: os << 'I'; break;
      case EventKind::SecondaryInteraction: os << 'S'; break;
      case EventKind::Death: os << 'D'; break;
    }
    os << '\t' << ev.a.to_string();
    if (ev.is_interaction()) os << '\t' << ev.b.to_string();
    os << '\n';
  }
}

}  // namespace kcp
