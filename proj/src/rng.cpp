#include "rrtsim/rng.hpp"

#include <cstring>
#include <stdexcept>

namespace rrtsim {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
  // Hash the pair twice to decorrelate state and gamma; forcing gamma odd
  // makes every stream's state walk a full-period cycle of Z/2^64.
  const std::uint64_t h = mix64(seed + kGoldenGamma * stream_index);
  state_ = mix64(h + kGoldenGamma);
  gamma_ = mix64(h + 2 * kGoldenGamma) | 1ULL;
}

std::uint64_t RngStream::next_u64() {
  state_ += gamma_;
  return mix64(state_);
}

double RngStream::next_double() {
  // top 53 bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be >= 1");
  const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const char* zstr) { return fnv1a64(zstr, std::strlen(zstr)); }

}  // namespace rrtsim
