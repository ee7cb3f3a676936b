#pragma once

#include <chrono>
#include <cstdint>

namespace nfmig {

// Simulation time is an integer count of microseconds. Latencies keep
// nanosecond resolution so that half-microsecond one-way delays (RTT/2 of an
// odd RTT) stay exact until they are put on the clock.
using Micros = std::chrono::microseconds;
using Nanos = std::chrono::nanoseconds;

constexpr Micros ceil_micros(Nanos d) { return std::chrono::ceil<Micros>(d); }

// ceil(bytes * 1e6 / bytes_per_second) microseconds.
constexpr Micros serialization_time(std::uint64_t bytes, std::uint64_t bytes_per_second) {
  using u128 = unsigned __int128;
  const u128 num = static_cast<u128>(bytes) * 1'000'000u;
  const u128 q = (num + bytes_per_second - 1) / bytes_per_second;
  return Micros{static_cast<std::int64_t>(q)};
}

}  // namespace nfmig
