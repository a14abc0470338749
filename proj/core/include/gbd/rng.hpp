// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace gbd {

// Counter-based random stream (SplitMix64 core). The state is a (key, counter)
// pair, so a stream can be serialized and restored exactly, and independent
// substreams can be derived from a stream at any time without perturbing it.
// Identical seed => identical draw sequence.
class RngStream {
 public:
  RngStream() : RngStream(0) {}
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kSeedTag)), counter_(0) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform on the open interval (0,1).
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double next_normal() {
    const double u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Independent substream identified by `stream_id`; does not advance *this.
  RngStream derive(std::uint64_t stream_id) const {
    RngStream s;
    s.key_ = mix(key_ ^ mix(stream_id + kDeriveTag));
    s.counter_ = 0;
    return s;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void restore(std::uint64_t key, std::uint64_t counter) {
    key_ = key;
    counter_ = counter;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSeedTag = 0x5851F42D4C957F2Dull;
  static constexpr std::uint64_t kDeriveTag = 0xD6E8FEB86659FD93ull;
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace gbd
