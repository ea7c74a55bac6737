#pragma once

#include <cstdint>

namespace relsub {

// Splittable counter-based generator (SplitMix64 core). Child streams are
// derived from (seed, path components), never from generator position, so
// every replicate/stage sees the same numbers regardless of execution order
// or thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : state_(mix(seed ^ 0x5851f42d4c957f2dULL)) {}

  // Deterministic child stream keyed by a path component.
  RngStream fork(std::uint64_t tag) const {
    RngStream child(0);
    child.state_ = mix(state_ ^ mix(tag + 0x9e3779b97f4a7c15ULL));
    return child;
  }

  RngStream fork(std::uint64_t a, std::uint64_t b) const { return fork(a).fork(b); }
  RngStream fork(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return fork(a).fork(b).fork(c);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix_out(z);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); safe for log() and inverse-cdf transforms.
  double next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  static std::uint64_t mix_out(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t z) { return mix_out(z + 0x9e3779b97f4a7c15ULL); }

  std::uint64_t state_;
};

// Stage tags used when deriving child streams, kept in one place so that
// seeds never collide across stages.
namespace stage {
inline constexpr std::uint64_t kGenerate = 0x01;
inline constexpr std::uint64_t kPilot = 0x02;
inline constexpr std::uint64_t kPilotRetry = 0x03;
inline constexpr std::uint64_t kMainDraw = 0x04;
inline constexpr std::uint64_t kCalibration = 0x05;
inline constexpr std::uint64_t kEstimatorBase = 0x100;
}  // namespace stage

}  // namespace relsub
