#pragma once

#include <optional>
#include <vector>

#include "kcp/timeline.hpp"

namespace kcp {

/// A space-time path through interaction marks: sites x_0..x_K and times
/// s_0 < s_1 < ... < s_{K+1}, where s_i is the i-th interaction time, s_0 the
/// start, and s_{K+1} the target time. Every occupancy segment
/// {x_i} x (s_i, s_{i+1}) is void of death marks (including the first and
/// last segment, which knowledge propagation requires).
struct Path {
  std::vector<Site> sites;   // size K+1
  std::vector<double> times; // size K+2
  int length() const { return static_cast<int>(sites.size()) - 1; }
};

/// Window around the i-th path interaction in which both participants are
/// alive and available for a repeat interaction: sigma_i is time s_{i-1} or
/// the last death at x_i before s_i (whichever is later); tau_i is time
/// s_{i+1} or the first death at x_{i-1} after s_i (whichever is earlier).
struct Overlap {
  int index = 0;  // i in 1..K
  double sigma = 0.0;
  double tau = 0.0;
};

/// A second interaction mark on edge {x_{i-1}, x_i} strictly inside the i-th
/// overlap window, at a time distinct from s_i.
struct DoubleInteraction {
  int overlap_index = 0;
  double time = 0.0;
};

struct PathSet {
  std::vector<Path> paths;
  bool truncated = false;  // enumeration stopped at the cap
};

/// Enumerate paths (up to `cap`) starting at `source` at time `source_time`
/// and reaching any endpoint at `target_time`, in deterministic search order
/// (earliest jumps first). Length-0 paths (the source surviving untouched)
/// are included.
PathSet extract_paths(const Timeline& timeline, const Site& source, double source_time,
                      double target_time, std::size_t cap = 10000);

/// Overlap windows (sigma_i, tau_i) for i = 1..K.
std::vector<Overlap> overlap_windows(const Path& path, const Timeline& timeline);

/// All double interactions of the path, sorted by time.
std::vector<DoubleInteraction> double_interactions(const Path& path, const Timeline& timeline,
                                                   const std::vector<Overlap>& overlaps);

/// Worst-case knowledge replay along a path of length K: each site is
/// ignorant before its first interaction, so a single interaction transports
/// v_i = mu v_{i-1}; at the first double interaction (overlap index i) the
/// receiver's value jumps to v + mu w (1 - v) with w the sender's current
/// value. Returns the K+1 carried values (the jump folded into entry i).
std::vector<double> replay_path_knowledge(const Path& path, double mu, double initial,
                                          std::optional<std::pair<int, double>> first_double);
/// Same, for a path given only by its length.
std::vector<double> replay_path_knowledge(int path_length, double mu, double initial,
                                          std::optional<std::pair<int, double>> first_double);

}  // namespace kcp
