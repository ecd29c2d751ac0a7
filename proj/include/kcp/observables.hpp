#pragma once

#include "kcp/dynamics.hpp"

namespace kcp {

/// Scalar summaries of one configuration.
struct ObservableRecord {
  double time = 0.0;
  double total_knowledge = 0.0;
  std::int64_t support_size = 0;
  double density_above_half = 0.0;  // count when the domain is not finite
  double max_value = 0.0;
};

/// Sum of all stored knowledge values.
double total_knowledge(const LatticeState& state);

struct DensityResult {
  double value = 0.0;
  /// Lazy domains have no site count; `value` is then a raw count.
  bool is_count = false;
};

/// Fraction of domain sites with knowledge strictly above `theta`.
DensityResult density_above(const LatticeState& state, double theta, const DomainSpec& domain);

/// Finite-horizon survival proxy: total knowledge at time `horizon` exceeds
/// `delta`. The trajectory must have been sampled at `horizon`.
bool survival_proxy(const Trajectory& trajectory, double horizon, double delta);

ObservableRecord observe(const LatticeState& state, const DomainSpec& domain, double time);

}  // namespace kcp
