#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace nfmig::sim {

namespace detail {

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

// Reproducible random stream keyed by (label, seed). Each model component
// draws from its own label so adding a component never shifts another's
// sequence. mt19937_64 output is fixed by the standard, and uniform() is
// derived from raw bits, so streams are identical across standard libraries.
class RngStream {
 public:
  RngStream(std::string_view label, std::uint64_t seed)
      : engine_(detail::splitmix64(detail::fnv1a(label) ^ detail::splitmix64(seed))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

inline RngStream rng_stream(std::string_view label, std::uint64_t seed) { return RngStream(label, seed); }

}  // namespace nfmig::sim
