#include "kcp/paths.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace kcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-site and per-edge lookups over a frozen timeline.
struct TimelineIndex {
  std::unordered_map<Site, std::vector<double>, SiteHash> deaths;
  struct Mark {
    double time;
    Site other;
  };
  std::unordered_map<Site, std::vector<Mark>, SiteHash> marks_at;
  std::unordered_map<Edge, std::vector<double>, EdgeHash> marks_on;

  explicit TimelineIndex(const Timeline& tl) {
    for (const Event& ev : tl.events) {
      if (ev.kind == EventKind::Death) {
        deaths[ev.a].push_back(ev.time);
      } else if (ev.kind == EventKind::Interaction) {
        marks_at[ev.a].push_back({ev.time, ev.b});
        marks_at[ev.b].push_back({ev.time, ev.a});
        marks_on[ev.edge()].push_back(ev.time);
      }
    }
    // Timeline events are time-sorted already; the per-entity lists inherit it.
  }

  // First death at `s` strictly after `t`.
  double next_death(const Site& s, double t) const {
    auto it = deaths.find(s);
    if (it == deaths.end()) return kInf;
    auto jt = std::upper_bound(it->second.begin(), it->second.end(), t);
    return jt == it->second.end() ? kInf : *jt;
  }

  // Last death at `s` strictly before `t`.
  double prev_death(const Site& s, double t) const {
    auto it = deaths.find(s);
    if (it == deaths.end()) return -kInf;
    auto jt = std::lower_bound(it->second.begin(), it->second.end(), t);
    return jt == it->second.begin() ? -kInf : *std::prev(jt);
  }
};

}  // namespace

PathSet extract_paths(const Timeline& timeline, const Site& source, double source_time,
                      double target_time, std::size_t cap) {
  if (!(source_time >= 0.0) || !(source_time < target_time) || target_time > timeline.horizon)
    throw std::invalid_argument("extract_paths: need 0 <= source time < target time <= horizon");
  const Site src = timeline.domain.canonical(source);

  TimelineIndex index(timeline);
  PathSet out;

  struct Frame {
    Site site;
    double arrival;
    double death;  // first death at `site` strictly after `arrival`
    std::size_t next_mark = 0;
  };
  std::vector<Frame> stack;
  std::vector<Site> sites{src};
  std::vector<double> times{source_time};

  auto emit_if_complete = [&](const Frame& f) {
    // Final occupancy segment {site} x (arrival, target) void of deaths.
    if (f.death >= target_time) {
      Path p;
      p.sites = sites;
      p.times = times;
      p.times.push_back(target_time);
      out.paths.push_back(std::move(p));
    }
  };

  stack.push_back({src, source_time, index.next_death(src, source_time)});
  emit_if_complete(stack.back());
  while (!stack.empty()) {
    if (out.paths.size() >= cap) {
      out.truncated = true;
      break;
    }
    Frame& f = stack.back();
    auto marks_it = index.marks_at.find(f.site);
    const std::size_t n_marks = marks_it == index.marks_at.end() ? 0 : marks_it->second.size();
    bool pushed = false;
    while (f.next_mark < n_marks) {
      const auto& mark = marks_it->second[f.next_mark];
      ++f.next_mark;
      if (mark.time <= f.arrival) continue;
      if (mark.time > f.death || mark.time >= target_time) {
        // Marks are time-sorted; every later one fails the same test.
        f.next_mark = n_marks;
        break;
      }
      sites.push_back(mark.other);
      times.push_back(mark.time);
      Frame child{mark.other, mark.time, index.next_death(mark.other, mark.time)};
      stack.push_back(child);  // invalidates f
      emit_if_complete(child);
      pushed = true;
      break;
    }
    if (!pushed && stack.back().next_mark >= n_marks) {
      stack.pop_back();
      sites.pop_back();
      times.pop_back();
    }
  }
  return out;
}

std::vector<Overlap> overlap_windows(const Path& path, const Timeline& timeline) {
  if (path.sites.size() + 1 != path.times.size() || path.sites.empty())
    throw std::invalid_argument("overlap_windows: malformed path");
  TimelineIndex index(timeline);
  std::vector<Overlap> out;
  const int k = path.length();
  for (int i = 1; i <= k; ++i) {
    const Site& prev_site = path.sites[static_cast<std::size_t>(i - 1)];
    const Site& site = path.sites[static_cast<std::size_t>(i)];
    const double s_prev = path.times[static_cast<std::size_t>(i - 1)];
    const double s_i = path.times[static_cast<std::size_t>(i)];
    const double s_next = path.times[static_cast<std::size_t>(i + 1)];
    Overlap ov;
    ov.index = i;
    ov.sigma = std::max(s_prev, index.prev_death(site, s_i));
    ov.tau = std::min(s_next, index.next_death(prev_site, s_i));
    out.push_back(ov);
  }
  return out;
}

std::vector<DoubleInteraction> double_interactions(const Path& path, const Timeline& timeline,
                                                   const std::vector<Overlap>& overlaps) {
  TimelineIndex index(timeline);
  std::vector<DoubleInteraction> out;
  for (const Overlap& ov : overlaps) {
    const std::size_t i = static_cast<std::size_t>(ov.index);
    const Edge e = Edge::canonical(path.sites[i - 1], path.sites[i]);
    const double s_i = path.times[i];
    auto it = index.marks_on.find(e);
    if (it == index.marks_on.end()) continue;
    for (double t : it->second) {
      if (t <= ov.sigma) continue;
      if (t >= ov.tau) break;
      if (t == s_i) continue;
      out.push_back({ov.index, t});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const DoubleInteraction& a, const DoubleInteraction& b) { return a.time < b.time; });
  return out;
}

std::vector<double> replay_path_knowledge(int path_length, double mu, double initial,
                                          std::optional<std::pair<int, double>> first_double) {
  if (!(initial >= 0.0 && initial <= 1.0))
    throw std::invalid_argument("replay_path_knowledge: initial must lie in [0, 1]");
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("replay_path_knowledge: mu must lie in [0, 1]");
  if (path_length < 0) throw std::invalid_argument("replay_path_knowledge: negative length");
  if (first_double && (first_double->first < 1 || first_double->first > path_length))
    throw std::invalid_argument("replay_path_knowledge: double-interaction index out of range");

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(path_length) + 1);
  values.push_back(initial);
  for (int i = 1; i <= path_length; ++i) {
    double v = mu * values.back();
    if (first_double && first_double->first == i) {
      const double w = values.back();  // sender still holds its value
      v = v + mu * w * (1.0 - v);
    }
    values.push_back(v);
  }
  return values;
}

std::vector<double> replay_path_knowledge(const Path& path, double mu, double initial,
                                          std::optional<std::pair<int, double>> first_double) {
  return replay_path_knowledge(path.length(), mu, initial, first_double);
}

}  // namespace kcp
