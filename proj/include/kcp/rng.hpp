#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

namespace kcp {

/// 64-bit avalanche mix (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// FNV-1a, used to turn experiment tags into stream-id words.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic keyed random stream.
///
/// Equal (master seed, stream id) reproduce the identical sequence within one
/// build of the artifact (cross-build or cross-platform bit-exactness is not
/// promised). Substreams derived with `derive` depend only on the key words,
/// never on how many draws were taken, so per-entity streams are reproducible
/// independently of iteration order.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : master_(master_seed), id_(stream_id),
        state_(mix64(mix64(master_seed + 0x9e3779b97f4a7c15ULL) ^ stream_id)) {}

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return id_; }

  /// Child stream keyed by `words`; independent of this stream's position.
  RngStream derive(std::initializer_list<std::uint64_t> words) const {
    std::uint64_t id = id_;
    for (std::uint64_t w : words) id = mix64((id ^ w) + 0x9e3779b97f4a7c15ULL);
    return RngStream(master_, id);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double strictly inside (0, 1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Exponential sample with the given rate; strictly positive.
  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("invalid rate: exponential clock requires rate > 0");
    return -std::log(uniform01()) / rate;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t master_;
  std::uint64_t id_;
  std::uint64_t state_;
};

}  // namespace kcp
