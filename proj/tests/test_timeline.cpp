#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <sstream>

#include "kcp/timeline.hpp"

using namespace kcp;

namespace {

std::size_t count_kind(const Timeline& tl, EventKind kind) {
  std::size_t n = 0;
  for (const Event& ev : tl.events) n += ev.kind == kind ? 1 : 0;
  return n;
}

bool events_equal(const Event& a, const Event& b) {
  return a.time == b.time && a.level == b.level && a.seq == b.seq && a.kind == b.kind &&
         a.a == b.a && a.b == b.b;
}

}  // namespace

TEST_CASE("next_clock_time is strictly increasing and deterministic") {
  RngStream r1(7, 1), r2(7, 1);
  double t = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double n1 = next_clock_time(t, 3.0, r1);
    const double n2 = next_clock_time(t, 3.0, r2);
    CHECK(n1 == n2);
    CHECK(n1 > t);
    t = n1;
  }
  RngStream r3(7, 1);
  CHECK_THROWS_AS(next_clock_time(0.0, 0.0, r3), std::invalid_argument);
  CHECK_THROWS_AS(next_clock_time(-1.0, 1.0, r3), std::invalid_argument);
}

TEST_CASE("zero interaction rate leaves only death marks") {
  const Timeline tl = build_timeline(DomainSpec::torus(1, 11), 0.0, 5.0, RngStream(3));
  CHECK(tl.events.size() > 0);
  CHECK(count_kind(tl, EventKind::Death) == tl.events.size());
}

TEST_CASE("timelines are sorted, bounded, in-domain, and deterministic") {
  const DomainSpec domain = DomainSpec::torus(2, 5);
  const Timeline tl = build_timeline(domain, 1.5, 3.0, RngStream(11, 4));
  const Timeline tl2 = build_timeline(domain, 1.5, 3.0, RngStream(11, 4));
  REQUIRE(tl.events.size() == tl2.events.size());
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    const Event& ev = tl.events[i];
    CHECK(events_equal(ev, tl2.events[i]));
    CHECK(ev.time > 0.0);
    CHECK(ev.time <= 3.0);
    if (i > 0) {
      const Event& prev = tl.events[i - 1];
      CHECK((prev.time < ev.time || (prev.time == ev.time && prev.seq < ev.seq)));
    }
    if (ev.is_interaction()) {
      CHECK(domain.adjacent(ev.a, ev.b));
      CHECK(ev.level >= 0.0);
      CHECK(ev.level < 1.5);
    } else {
      CHECK(domain.contains(ev.a));
    }
  }
}

TEST_CASE("lazy domains have no prebuilt timeline") {
  CHECK_THROWS_AS(build_timeline(DomainSpec::lazy(1), 1.0, 1.0, RngStream(1)),
                  std::invalid_argument);
}

TEST_CASE("mean interaction count matches the Poisson mean") {
  // 1-d torus of size 11 has 11 edges, so lambda |E| T = 2 * 11 * 5 = 110.
  const DomainSpec domain = DomainSpec::torus(1, 11);
  const int replicas = 1000;
  const RngStream base(404);
  double total = 0.0;
  for (int r = 0; r < replicas; ++r) {
    const Timeline tl =
        build_timeline(domain, 2.0, 5.0, base.derive({static_cast<std::uint64_t>(r)}));
    total += static_cast<double>(count_kind(tl, EventKind::Interaction));
  }
  const double mean = total / replicas;
  const double se = std::sqrt(110.0 / replicas);
  CHECK(std::abs(mean - 110.0) < 3.0 * se);
}

TEST_CASE("coupling augmentation: rates, projection, superposition") {
  const DomainSpec domain = DomainSpec::free_box(1, 1);  // two edges

  SUBCASE("equal rates produce no secondary marks") {
    const Timeline tl = augment_for_coupling(domain, 2.0, 2.0, 4.0, RngStream(5));
    CHECK(count_kind(tl, EventKind::SecondaryInteraction) == 0);
  }

  SUBCASE("rate ordering is enforced") {
    CHECK_THROWS_AS(augment_for_coupling(domain, 3.0, 1.0, 4.0, RngStream(5)),
                    std::invalid_argument);
  }

  SUBCASE("dropping secondary marks recovers the lambda1 timeline") {
    const RngStream base(777, 3);
    const Timeline plain = build_timeline(domain, 1.0, 10.0, base);
    const Timeline aug = augment_for_coupling(domain, 1.0, 3.0, 10.0, base);
    std::vector<Event> primary;
    for (const Event& ev : aug.events)
      if (ev.kind != EventKind::SecondaryInteraction) primary.push_back(ev);
    REQUIRE(primary.size() == plain.events.size());
    for (std::size_t i = 0; i < primary.size(); ++i) {
      CHECK(primary[i].time == plain.events[i].time);
      CHECK(primary[i].kind == plain.events[i].kind);
      CHECK(primary[i].a == plain.events[i].a);
      CHECK(primary[i].b == plain.events[i].b);
      CHECK(primary[i].level == plain.events[i].level);
    }
  }

  SUBCASE("primary plus secondary marks form the lambda2 stream") {
    // Per-edge count over [0, 10] at lambda2 = 3 is Poisson(30).
    const RngStream base(1234);
    const Edge edge = domain.edges().front();
    const int replicas = 1000;
    double total = 0.0;
    for (int r = 0; r < replicas; ++r) {
      const Timeline aug = augment_for_coupling(domain, 1.0, 3.0, 10.0,
                                                base.derive({static_cast<std::uint64_t>(r)}));
      for (const Event& ev : aug.events)
        if (ev.is_interaction() && ev.edge() == edge) total += 1.0;
    }
    const double mean = total / replicas;
    const double se = std::sqrt(30.0 / replicas);
    CHECK(std::abs(mean - 30.0) < 3.0 * se);
    // Secondary levels live in [lambda1, lambda2).
    const Timeline aug = augment_for_coupling(domain, 1.0, 3.0, 10.0, base);
    for (const Event& ev : aug.events) {
      if (ev.kind == EventKind::SecondaryInteraction) {
        CHECK(ev.level >= 1.0);
        CHECK(ev.level < 3.0);
      }
    }
  }
}

TEST_CASE("per-edge interval counts pass a Poisson chi-square test") {
  // Counts of marks on one edge in [s, t] = [1, 3] at lambda = 1.5 should be
  // Poisson(3); goodness of fit at significance 1e-3 over 1000 replicas.
  const DomainSpec domain = DomainSpec::free_box(1, 1);
  const Edge edge = domain.edges().front();
  const double lambda = 1.5, s = 1.0, t = 3.0, m = lambda * (t - s);
  const int replicas = 1000;

  std::vector<int> histogram(32, 0);
  const RngStream base(31337);
  for (int r = 0; r < replicas; ++r) {
    const Timeline tl =
        build_timeline(domain, lambda, 4.0, base.derive({static_cast<std::uint64_t>(r)}));
    int count = 0;
    for (const Event& ev : tl.events)
      if (ev.is_interaction() && ev.edge() == edge && ev.time >= s && ev.time <= t) ++count;
    ++histogram[static_cast<std::size_t>(std::min(count, 31))];
  }

  // Bin k = 0..cut-1 individually, then one tail bin; expected counts >= 5.
  std::vector<double> expected;
  std::vector<double> observed;
  double pmf = std::exp(-m);  // P(N = 0)
  double tail = 1.0;
  int k = 0;
  while (pmf * replicas >= 5.0) {
    expected.push_back(pmf * replicas);
    double obs = 0.0;
    if (k < static_cast<int>(histogram.size())) obs = histogram[static_cast<std::size_t>(k)];
    observed.push_back(obs);
    tail -= pmf;
    ++k;
    pmf *= m / k;
  }
  REQUIRE(expected.size() >= 3);
  expected.push_back(tail * replicas);
  double obs_tail = 0.0;
  for (std::size_t j = static_cast<std::size_t>(k); j < histogram.size(); ++j)
    obs_tail += histogram[j];
  observed.push_back(obs_tail);

  double stat = 0.0;
  for (std::size_t j = 0; j < expected.size(); ++j) {
    const double d = observed[j] - expected[j];
    stat += d * d / expected[j];
  }
  boost::math::chi_squared dist(static_cast<double>(expected.size() - 1));
  const double critical = boost::math::quantile(dist, 1.0 - 1e-3);
  CHECK(stat < critical);
}

TEST_CASE("timeline dump is one tab-separated event per line") {
  const DomainSpec domain = DomainSpec::torus(2, 3);
  const Timeline tl = build_timeline(domain, 1.0, 1.0, RngStream(9));
  std::ostringstream os;
  dump_timeline(tl, os);
  std::istringstream is(os.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    const auto first_tab = line.find('\t');
    REQUIRE(first_tab != std::string::npos);
    const std::string tag = line.substr(first_tab + 1, 1);
    CHECK((tag == "I" || tag == "S" || tag == "D"));
    // 17 significant digits round-trip the double exactly.
    CHECK(std::stod(line.substr(0, first_tab)) == tl.events[lines - 1].time);
  }
  CHECK(lines == tl.events.size());
}
