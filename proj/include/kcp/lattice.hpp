#pragma once

#include <boost/container/small_vector.hpp>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcp/rng.hpp"

namespace kcp {

using Coord = std::int32_t;
using CoordVec = boost::container::small_vector<Coord, 4>;

/// A lattice site: d signed integer coordinates.
struct Site {
  CoordVec c;

  Site() = default;
  explicit Site(CoordVec coords) : c(std::move(coords)) {}
  Site(std::initializer_list<Coord> coords) : c(coords) {}

  static Site origin(int dim) { return Site(CoordVec(static_cast<std::size_t>(dim), 0)); }
  /// Unit step along `axis` from the origin.
  static Site unit(int dim, int axis) {
    Site s = origin(dim);
    s.c[static_cast<std::size_t>(axis)] = 1;
    return s;
  }

  int dim() const { return static_cast<int>(c.size()); }

  friend bool operator==(const Site& a, const Site& b) { return a.c == b.c; }
  friend bool operator<(const Site& a, const Site& b) {
    return std::lexicographical_compare(a.c.begin(), a.c.end(), b.c.begin(), b.c.end());
  }

  std::string to_string() const;
};

struct SiteHash {
  std::size_t operator()(const Site& s) const {
    std::uint64_t h = 0x243f6a8885a308d3ULL ^ s.c.size();
    for (Coord v : s.c) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
    return static_cast<std::size_t>(h);
  }
};

/// An undirected nearest-neighbor edge, stored in canonical (a < b) order so
/// that {a, b} and {b, a} compare equal.
struct Edge {
  Site a, b;

  Edge() = default;
  static Edge canonical(Site x, Site y) {
    Edge e;
    if (y < x) std::swap(x, y);
    e.a = std::move(x);
    e.b = std::move(y);
    return e;
  }

  friend bool operator==(const Edge& l, const Edge& r) { return l.a == r.a && l.b == r.b; }
  friend bool operator<(const Edge& l, const Edge& r) {
    if (l.a == r.a) return l.b < r.b;
    return l.a < r.a;
  }
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    SiteHash h;
    return static_cast<std::size_t>(mix64(h(e.a) ^ (0x13198a2e03707344ULL + h(e.b))));
  }
};

enum class DomainMode { Torus, FreeBox, Lazy };

/// Finite truncation of Z^d (torus or free-boundary box) or the unbounded
/// lattice (Lazy). Torus sizes are odd and origin-centered.
class DomainSpec {
 public:
  static DomainSpec torus(int dim, int linear_size);
  static DomainSpec free_box(int dim, int half_width);
  static DomainSpec lazy(int dim);

  DomainMode mode() const { return mode_; }
  int dim() const { return dim_; }
  bool finite() const { return mode_ != DomainMode::Lazy; }
  /// Sites per axis (torus: size; box: 2*half_width + 1).
  int linear_size() const;
  int half_width() const { return half_; }
  std::int64_t site_count() const;
  std::int64_t edge_count() const;

  bool contains(const Site& s) const;
  /// Torus: wrap coordinates into the centered range. Identity otherwise.
  Site canonical(Site s) const;
  /// Canonicalized nearest neighbors of `s` (free-box boundary sites have
  /// fewer than 2d).
  void neighbors(const Site& s, std::vector<Site>& out) const;
  std::vector<Site> neighbors(const Site& s) const;

  /// All sites in ascending lexicographic order (finite domains only).
  std::vector<Site> sites() const;
  /// All edges in ascending canonical order (finite domains only).
  std::vector<Edge> edges() const;

  /// Row-major index of a canonical site (finite domains only).
  std::int64_t site_index(const Site& s) const;
  Site site_at(std::int64_t index) const;

  bool adjacent(const Site& x, const Site& y) const;

  friend bool operator==(const DomainSpec& l, const DomainSpec& r) {
    return l.mode_ == r.mode_ && l.dim_ == r.dim_ && l.half_ == r.half_;
  }

 private:
  DomainSpec(DomainMode mode, int dim, int half) : mode_(mode), dim_(dim), half_(half) {}

  DomainMode mode_;
  int dim_;
  int half_;  // torus: (size-1)/2; box: half_width; lazy: 0
};

}  // namespace kcp
