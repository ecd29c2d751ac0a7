#include "kcp/observables.hpp"

#include <algorithm>

namespace kcp {

double total_knowledge(const LatticeState& state) {
  // Sum in site order so the result does not depend on hash-map layout.
  double sum = 0.0;
  for (const auto& [site, value] : state.sorted_entries()) sum += value;
  return sum;
}

DensityResult density_above(const LatticeState& state, double theta, const DomainSpec& domain) {
  std::int64_t count = 0;
  for (const auto& [site, value] : state.values())
    if (value > theta) ++count;
  if (!domain.finite()) return {static_cast<double>(count), true};
  return {static_cast<double>(count) / static_cast<double>(domain.site_count()), false};
}

bool survival_proxy(const Trajectory& trajectory, double horizon, double delta) {
  return total_knowledge(trajectory.state_at(horizon)) > delta;
}

ObservableRecord observe(const LatticeState& state, const DomainSpec& domain, double time) {
  ObservableRecord rec;
  rec.time = time;
  rec.support_size = static_cast<std::int64_t>(state.support_size());
  rec.total_knowledge = total_knowledge(state);
  rec.density_above_half = density_above(state, 0.5, domain).value;
  for (const auto& [site, value] : state.values()) rec.max_value = std::max(rec.max_value, value);
  return rec;
}

}  // namespace kcp
