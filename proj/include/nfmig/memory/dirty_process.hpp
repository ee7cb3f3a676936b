#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "nfmig/memory/memory_image.hpp"
#include "nfmig/sim/rng.hpp"
#include "nfmig/sim/time.hpp"

namespace nfmig {

// Deterministic dirtying at a fixed rate. The rate is held in micro-pages per
// second and the carry in 1e-12 pages, so the number of dirtied pages over a
// run does not depend on how the run is sliced into advance() calls.
class ConstantRate {
 public:
  static constexpr std::uint64_t kRateScale = 1'000'000;                   // micro-pages
  static constexpr std::uint64_t kPageUnits = 1'000'000'000'000ull;        // rate units * us

  explicit ConstantRate(double pages_per_second) {
    if (!(pages_per_second >= 0.0) || !std::isfinite(pages_per_second))
      throw std::invalid_argument("dirty rate must be a finite value >= 0");
    micro_rate_ = static_cast<std::uint64_t>(std::llround(pages_per_second * kRateScale));
  }

  double pages_per_second() const noexcept { return static_cast<double>(micro_rate_) / kRateScale; }
  std::uint64_t micro_rate() const noexcept { return micro_rate_; }
  // Fractional page owed from earlier calls, in [0, 1).
  double carry() const noexcept { return static_cast<double>(carry_) / kPageUnits; }

  // floor(rate * duration + carry); carry keeps the fractional remainder.
  std::uint64_t take(Micros duration) {
    using u128 = unsigned __int128;
    const u128 acc = static_cast<u128>(micro_rate_) * static_cast<u128>(duration.count()) + carry_;
    carry_ = static_cast<std::uint64_t>(acc % kPageUnits);
    return static_cast<std::uint64_t>(acc / kPageUnits);
  }

 private:
  std::uint64_t micro_rate_ = 0;
  std::uint64_t carry_ = 0;
};

// Each clean page is dirtied independently with probability p per millisecond.
class Bernoulli {
 public:
  Bernoulli(double p_per_page_per_ms, std::string label, std::uint64_t seed)
      : p_(p_per_page_per_ms), label_(std::move(label)), rng_(label_, seed) {
    if (!(p_ >= 0.0 && p_ <= 1.0)) throw std::invalid_argument("dirty probability outside [0, 1]");
  }

  double probability_per_ms() const noexcept { return p_; }
  const std::string& label() const noexcept { return label_; }

  // Probability that a given page is written at least once during duration.
  double window_probability(Micros duration) const {
    return 1.0 - std::pow(1.0 - p_, static_cast<double>(duration.count()) / 1000.0);
  }

  sim::RngStream& rng() noexcept { return rng_; }

 private:
  double p_;
  std::string label_;
  sim::RngStream rng_;
};

using DirtyProcess = std::variant<ConstantRate, Bernoulli>;

// Dirties pages that are clean at the target and returns how many changed.
// ConstantRate picks the lowest clean page ids; Bernoulli draws one uniform per
// clean page in ascending id order. Must only be called while the NF runs.
inline std::uint64_t advance_dirty(MemoryImage& image, DirtyProcess& process, Micros duration) {
  if (duration.count() < 0) throw std::invalid_argument("negative dirtying duration");
  if (duration.count() == 0) return 0;
  std::uint64_t dirtied = 0;
  if (auto* cr = std::get_if<ConstantRate>(&process)) {
    std::uint64_t want = std::min(cr->take(duration), image.count(PageState::CleanAtTarget));
    for (PageId p = 0; p < image.num_pages() && dirtied < want; ++p) {
      if (image.state(p) == PageState::CleanAtTarget) {
        image.mark_dirty(p);
        ++dirtied;
      }
    }
  } else {
    auto& b = std::get<Bernoulli>(process);
    const double q = b.window_probability(duration);
    for (PageId p = 0; p < image.num_pages(); ++p) {
      if (image.state(p) != PageState::CleanAtTarget) continue;
      if (b.rng().uniform() < q) {
        image.mark_dirty(p);
        ++dirtied;
      }
    }
  }
  return dirtied;
}

}  // namespace nfmig
