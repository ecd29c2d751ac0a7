#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "kcp/lattice.hpp"

using namespace kcp;

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(DomainSpec::torus(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(DomainSpec::torus(1, 4), std::invalid_argument);  // even
  CHECK_THROWS_AS(DomainSpec::torus(1, 1), std::invalid_argument);  // too small
  CHECK_THROWS_AS(DomainSpec::free_box(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(DomainSpec::lazy(0), std::invalid_argument);
  CHECK(DomainSpec::torus(2, 5).finite());
  CHECK_FALSE(DomainSpec::lazy(3).finite());
}

TEST_CASE("torus wraps coordinates into the centered range") {
  const DomainSpec torus = DomainSpec::torus(1, 5);
  CHECK(torus.canonical(Site{3}) == Site{-2});
  CHECK(torus.canonical(Site{-3}) == Site{2});
  CHECK(torus.canonical(Site{7}) == Site{2});
  CHECK(torus.adjacent(Site{2}, Site{-2}));  // wrap edge
  CHECK_FALSE(torus.adjacent(Site{2}, Site{0}));
}

TEST_CASE("site and edge counts") {
  CHECK(DomainSpec::torus(1, 11).site_count() == 11);
  CHECK(DomainSpec::torus(1, 11).edge_count() == 11);
  CHECK(DomainSpec::torus(2, 5).site_count() == 25);
  CHECK(DomainSpec::torus(2, 5).edge_count() == 50);
  CHECK(DomainSpec::free_box(1, 2).site_count() == 5);
  CHECK(DomainSpec::free_box(1, 2).edge_count() == 4);
  CHECK(DomainSpec::free_box(2, 1).site_count() == 9);
  CHECK(DomainSpec::free_box(2, 1).edge_count() == 12);

  for (const DomainSpec& d :
       {DomainSpec::torus(1, 11), DomainSpec::torus(2, 5), DomainSpec::free_box(2, 2)}) {
    CHECK(static_cast<std::int64_t>(d.sites().size()) == d.site_count());
    const auto edges = d.edges();
    CHECK(static_cast<std::int64_t>(edges.size()) == d.edge_count());
    CHECK(std::is_sorted(edges.begin(), edges.end()));
    CHECK(std::adjacent_find(edges.begin(), edges.end()) == edges.end());  // no duplicates
    for (const Edge& e : edges) {
      CHECK(d.adjacent(e.a, e.b));
      CHECK(e.a < e.b);
    }
  }
}

TEST_CASE("neighbor enumeration") {
  const DomainSpec torus = DomainSpec::torus(2, 5);
  CHECK(torus.neighbors(Site{0, 0}).size() == 4);
  CHECK(torus.neighbors(Site{2, 2}).size() == 4);  // wraps

  const DomainSpec box = DomainSpec::free_box(2, 1);
  CHECK(box.neighbors(Site{0, 0}).size() == 4);
  CHECK(box.neighbors(Site{1, 1}).size() == 2);  // corner

  const DomainSpec lazy = DomainSpec::lazy(3);
  CHECK(lazy.neighbors(Site{5, -9, 100}).size() == 6);
}

TEST_CASE("site_index round-trips in row-major order") {
  const DomainSpec d = DomainSpec::torus(2, 7);
  for (std::int64_t i = 0; i < d.site_count(); ++i) {
    CHECK(d.site_index(d.site_at(i)) == i);
  }
  const auto sites = d.sites();
  CHECK(std::is_sorted(sites.begin(), sites.end()));
}

TEST_CASE("edges are canonical: {a,b} equals {b,a}") {
  const Edge e1 = Edge::canonical(Site{1, 0}, Site{0, 0});
  const Edge e2 = Edge::canonical(Site{0, 0}, Site{1, 0});
  CHECK(e1 == e2);
  CHECK(e1.a == Site{0, 0});
}
