#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace ruinalloc::detail {

// Philox2x64-10 counter-based generator. Every sample path owns an
// independent stream keyed by (seed, path index), so estimates are bitwise
// reproducible regardless of how paths are scheduled across threads.
struct Philox2x64 {
  static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ull;
  static constexpr std::uint64_t kKeyBump = 0x9E3779B97F4A7C15ull;

  static std::pair<std::uint64_t, std::uint64_t> block(std::uint64_t key,
                                                       std::uint64_t c0,
                                                       std::uint64_t c1) {
    for (int round = 0; round < 10; ++round) {
      const auto product =
          static_cast<unsigned __int128>(kMultiplier) * static_cast<unsigned __int128>(c0);
      const auto hi = static_cast<std::uint64_t>(product >> 64);
      const auto lo = static_cast<std::uint64_t>(product);
      c0 = hi ^ key ^ c1;
      c1 = lo;
      key += kKeyBump;
    }
    return {c0, c1};
  }
};

class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) : key_(seed), path_(path) {}

  std::uint64_t next_u64() {
    if (buffered_) {
      buffered_ = false;
      return buffer_;
    }
    const auto [a, b] = Philox2x64::block(key_, path_, counter_++);
    buffer_ = b;
    buffered_ = true;
    return a;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1); safe as a strict-inequality acceptance threshold.
  double next_unit_co() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Marsaglia polar method; emits two independent standard normals.
  void next_normal_pair(double& first, double& second) {
    double v0, v1, s;
    do {
      v0 = 2.0 * next_unit() - 1.0;
      v1 = 2.0 * next_unit() - 1.0;
      s = v0 * v0 + v1 * v1;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    first = v0 * scale;
    second = v1 * scale;
  }

  double next_normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    double a, b;
    next_normal_pair(a, b);
    cached_normal_ = b;
    have_normal_ = true;
    return a;
  }

  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

 private:
  std::uint64_t key_;
  std::uint64_t path_;
  std::uint64_t counter_ = 0;
  std::uint64_t buffer_ = 0;
  bool buffered_ = false;
  double cached_normal_ = 0.0;
  bool have_normal_ = false;
};

}  // namespace ruinalloc::detail
