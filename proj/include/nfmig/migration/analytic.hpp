#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nfmig {

struct AnalyticPreCopyInput {
  std::uint64_t pages = 0;
  std::uint64_t page_size = 1;
  std::uint64_t bandwidth = 1;  // bytes per second
  double dirty_rate = 0.0;      // pages per second
  std::uint64_t stop_threshold = 8;
  std::uint32_t max_rounds = 10;
};

struct AnalyticPreCopyResult {
  std::uint32_t rounds = 0;              // live rounds before the freeze
  std::vector<std::uint64_t> batches;    // pages per live round
  std::uint64_t final_batch = 0;         // pages sent while frozen
  long double downtime_s = 0;
  long double migration_time_s = 0;
  std::uint64_t bytes_pages = 0;
};

// Closed-form pre-copy for constant-rate dirtying with zero overheads and
// zero latency. With cumulative dirtying D(T) = floor(rate * T) and round
// boundaries T_i = (pages sent so far) * page_size / B, round i+1 resends
// min(S, D(T_{i+1}) - D(T_i)) pages; without the floor this is the geometric
// series S * (rate / B)^i. Time is exact rational arithmetic, never the
// simulator's integer clock.
inline AnalyticPreCopyResult analytic_pre_copy(const AnalyticPreCopyInput& in) {
  if (in.bandwidth == 0) throw std::invalid_argument("bandwidth must be > 0");
  if (in.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  using u128 = unsigned __int128;
  const u128 micro_rate = static_cast<u128>(std::llround(in.dirty_rate * 1e6));
  // floor(rate * sent_bytes / B) with rate = micro_rate / 1e6.
  auto dirtied_by = [&](u128 sent_pages) -> u128 {
    return micro_rate * sent_pages * in.page_size / (static_cast<u128>(1'000'000) * in.bandwidth);
  };

  AnalyticPreCopyResult r;
  u128 sent = 0;
  std::uint64_t batch = in.pages;
  for (;;) {
    const u128 before = dirtied_by(sent);
    sent += batch;
    r.batches.push_back(batch);
    ++r.rounds;
    batch = static_cast<std::uint64_t>(std::min<u128>(in.pages, dirtied_by(sent) - before));
    if (batch <= in.stop_threshold || r.rounds >= in.max_rounds) break;
  }
  r.final_batch = batch;
  sent += batch;
  r.bytes_pages = static_cast<std::uint64_t>(sent);
  const long double per_page = static_cast<long double>(in.page_size) / static_cast<long double>(in.bandwidth);
  r.downtime_s = static_cast<long double>(r.final_batch) * per_page;
  r.migration_time_s = static_cast<long double>(r.bytes_pages) * per_page;
  return r;
}

}  // namespace nfmig
