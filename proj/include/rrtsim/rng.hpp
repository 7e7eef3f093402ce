#pragma once

#include <cstddef>
#include <cstdint>

namespace rrtsim {

/// Deterministic splittable random stream (SplitMix64 with a per-stream gamma).
///
/// A stream is fully determined by the pair (seed, stream_index): the initial
/// state and the odd increment ("gamma") are both derived from the pair via the
/// 64-bit SplitMix finalizer, so distinct stream indices give statistically
/// independent sequences with no cross-thread coordination.  Replays are
/// bit-exact: only integer arithmetic plus a fixed 53-bit mantissa scaling.
class RngStream {
 public:
  /// Generator identifier recorded in output metadata next to (seed, stream).
  static constexpr const char* kGeneratorName = "splitmix64-streams-v1";

  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  /// Next raw 64-bit value.
  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double();

  /// Uniform integer in {0, ..., bound-1}, unbiased (rejection sampling).
  /// bound must be >= 1.
  std::uint64_t next_below(std::uint64_t bound);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_index() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  std::uint64_t gamma_;  // odd per-stream increment
};

/// SplitMix64 finalizer (also used when deriving stream parameters).
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over a byte string; used to derive per-configuration stream indices
/// (replica r of a configuration c runs on stream fnv1a64(c) ^ r).
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const char* zstr);

}  // namespace rrtsim
