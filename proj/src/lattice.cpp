#include "kcp/lattice.hpp"

#include <algorithm>

namespace kcp {

std::string Site::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

DomainSpec DomainSpec::torus(int dim, int linear_size) {
  if (dim < 1) throw std::invalid_argument("domain: dimension must be >= 1");
  if (linear_size < 3 || linear_size % 2 == 0)
    throw std::invalid_argument("domain: torus linear size must be odd and >= 3");
  return DomainSpec(DomainMode::Torus, dim, (linear_size - 1) / 2);
}

DomainSpec DomainSpec::free_box(int dim, int half_width) {
  if (dim < 1) throw std::invalid_argument("domain: dimension must be >= 1");
  if (half_width < 1) throw std::invalid_argument("domain: box half-width must be >= 1");
  return DomainSpec(DomainMode::FreeBox, dim, half_width);
}

DomainSpec DomainSpec::lazy(int dim) {
  if (dim < 1) throw std::invalid_argument("domain: dimension must be >= 1");
  return DomainSpec(DomainMode::Lazy, dim, 0);
}

int DomainSpec::linear_size() const {
  if (!finite()) throw std::logic_error("domain: lazy domains have no linear size");
  return 2 * half_ + 1;
}

std::int64_t DomainSpec::site_count() const {
  if (!finite()) throw std::logic_error("domain: lazy domains have no site count");
  std::int64_t n = 1;
  for (int k = 0; k < dim_; ++k) n *= linear_size();
  return n;
}

std::int64_t DomainSpec::edge_count() const {
  const std::int64_t l = linear_size();
  std::int64_t per_axis = 1;
  for (int k = 1; k < dim_; ++k) per_axis *= l;
  // torus: L edges per line; box: L-1.
  return dim_ * per_axis * (mode_ == DomainMode::Torus ? l : l - 1);
}

bool DomainSpec::contains(const Site& s) const {
  if (s.dim() != dim_) return false;
  if (!finite()) return true;
  for (Coord v : s.c)
    if (v < -half_ || v > half_) return false;
  return true;
}

Site DomainSpec::canonical(Site s) const {
  if (mode_ != DomainMode::Torus) return s;
  const int l = linear_size();
  for (Coord& v : s.c) {
    int w = (v + half_) % l;
    if (w < 0) w += l;
    v = static_cast<Coord>(w - half_);
  }
  return s;
}

void DomainSpec::neighbors(const Site& s, std::vector<Site>& out) const {
  out.clear();
  for (int k = 0; k < dim_; ++k) {
    for (int step : {-1, +1}) {
      Site n = s;
      n.c[static_cast<std::size_t>(k)] += static_cast<Coord>(step);
      if (mode_ == DomainMode::Torus) {
        out.push_back(canonical(std::move(n)));
      } else if (mode_ == DomainMode::FreeBox) {
        if (contains(n)) out.push_back(std::move(n));
      } else {
        out.push_back(std::move(n));
      }
    }
  }
}

std::vector<Site> DomainSpec::neighbors(const Site& s) const {
  std::vector<Site> out;
  neighbors(s, out);
  return out;
}

std::vector<Site> DomainSpec::sites() const {
  if (!finite()) throw std::logic_error("domain: cannot enumerate a lazy domain");
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(site_count()));
  for (std::int64_t i = 0; i < site_count(); ++i) out.push_back(site_at(i));
  return out;
}

std::vector<Edge> DomainSpec::edges() const {
  std::vector<Edge> out;
  for (const Site& s : sites()) {
    for (int k = 0; k < dim_; ++k) {
      Site n = s;
      n.c[static_cast<std::size_t>(k)] += 1;
      if (mode_ == DomainMode::Torus) {
        out.push_back(Edge::canonical(s, canonical(std::move(n))));
      } else if (contains(n)) {
        out.push_back(Edge::canonical(s, std::move(n)));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t DomainSpec::site_index(const Site& s) const {
  if (!finite()) throw std::logic_error("domain: lazy domains are not indexable");
  if (!contains(s)) throw std::out_of_range("domain: site outside domain");
  const int l = linear_size();
  std::int64_t idx = 0;
  for (int k = 0; k < dim_; ++k) idx = idx * l + (s.c[static_cast<std::size_t>(k)] + half_);
  return idx;
}

Site DomainSpec::site_at(std::int64_t index) const {
  if (!finite()) throw std::logic_error("domain: lazy domains are not indexable");
  const int l = linear_size();
  Site s = Site::origin(dim_);
  for (int k = dim_ - 1; k >= 0; --k) {
    s.c[static_cast<std::size_t>(k)] = static_cast<Coord>(index % l - half_);
    index /= l;
  }
  return s;
}

bool DomainSpec::adjacent(const Site& x, const Site& y) const {
  if (x.dim() != dim_ || y.dim() != dim_) return false;
  const Site cx = canonical(x), cy = canonical(y);
  int dist = 0;
  for (int k = 0; k < dim_; ++k) {
    int d = std::abs(cx.c[static_cast<std::size_t>(k)] - cy.c[static_cast<std::size_t>(k)]);
    if (mode_ == DomainMode::Torus) d = std::min(d, linear_size() - d);
    dist += d;
    if (dist > 1) return false;
  }
  return dist == 1;
}

}  // namespace kcp
