#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfmig {

using PageId = std::uint64_t;

enum class PageState : std::uint8_t { NeverCopied, CleanAtTarget, DirtySinceCopy };

enum class BatchFilter { All, DirtyOnly, WorkingSetOnly, NeverCopiedOnly };

// Paged memory of a stateful NF, tracked from the point of view of one
// migration target. Page contents are not modeled, only copy state.
class MemoryImage {
 public:
  MemoryImage() = default;

  MemoryImage(std::uint64_t num_pages, std::uint64_t page_size, std::vector<PageId> working_set = {})
      : page_size_(page_size), states_(num_pages, PageState::NeverCopied), working_set_(std::move(working_set)) {
    std::sort(working_set_.begin(), working_set_.end());
    working_set_.erase(std::unique(working_set_.begin(), working_set_.end()), working_set_.end());
    if (!working_set_.empty() && working_set_.back() >= num_pages)
      throw std::out_of_range("working set page " + std::to_string(working_set_.back()) + " beyond image of " +
                              std::to_string(num_pages) + " pages");
    never_copied_ = num_pages;
  }

  // Working set = the lowest round(fraction * num_pages) page ids.
  static MemoryImage with_working_set_fraction(std::uint64_t num_pages, std::uint64_t page_size, double fraction) {
    if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("working set fraction outside [0, 1]");
    const auto count = std::min<std::uint64_t>(num_pages, static_cast<std::uint64_t>(std::llround(fraction * num_pages)));
    std::vector<PageId> ws(count);
    for (PageId p = 0; p < count; ++p) ws[p] = p;
    return MemoryImage(num_pages, page_size, std::move(ws));
  }

  std::uint64_t num_pages() const noexcept { return states_.size(); }
  std::uint64_t page_size() const noexcept { return page_size_; }
  std::uint64_t total_bytes() const noexcept { return num_pages() * page_size_; }
  const std::vector<PageId>& working_set() const noexcept { return working_set_; }

  PageState state(PageId p) const { return states_.at(p); }

  std::uint64_t count(PageState s) const noexcept {
    switch (s) {
      case PageState::NeverCopied: return never_copied_;
      case PageState::CleanAtTarget: return clean_;
      case PageState::DirtySinceCopy: return dirty_;
    }
    return 0;
  }
  std::uint64_t dirty_count() const noexcept { return dirty_; }
  bool fully_clean() const noexcept { return clean_ == num_pages(); }

  // Matching pages in ascending id order. Does not change any state.
  std::vector<PageId> take_transfer_batch(BatchFilter filter) const {
    std::vector<PageId> out;
    switch (filter) {
      case BatchFilter::All:
        out.resize(num_pages());
        for (PageId p = 0; p < out.size(); ++p) out[p] = p;
        break;
      case BatchFilter::WorkingSetOnly:
        out = working_set_;
        break;
      case BatchFilter::DirtyOnly:
        collect(PageState::DirtySinceCopy, dirty_, out);
        break;
      case BatchFilter::NeverCopiedOnly:
        collect(PageState::NeverCopied, never_copied_, out);
        break;
    }
    return out;
  }

  void mark_copied(std::span<const PageId> pages) {
    for (PageId p : pages) set(p, PageState::CleanAtTarget);
  }
  void mark_copied(PageId p) { set(p, PageState::CleanAtTarget); }

  void mark_dirty(PageId p) {
    if (states_.at(p) != PageState::CleanAtTarget) return;
    set(p, PageState::DirtySinceCopy);
  }

  // Forget everything the target holds, e.g. before a migration to a new host.
  void reset() {
    std::fill(states_.begin(), states_.end(), PageState::NeverCopied);
    never_copied_ = num_pages();
    clean_ = dirty_ = 0;
  }

 private:
  void collect(PageState s, std::uint64_t expected, std::vector<PageId>& out) const {
    out.reserve(expected);
    for (PageId p = 0; p < states_.size() && out.size() < expected; ++p)
      if (states_[p] == s) out.push_back(p);
  }

  std::uint64_t& counter(PageState s) {
    switch (s) {
      case PageState::NeverCopied: return never_copied_;
      case PageState::CleanAtTarget: return clean_;
      case PageState::DirtySinceCopy: break;
    }
    return dirty_;
  }

  void set(PageId p, PageState s) {
    PageState& cur = states_.at(p);
    if (cur == s) return;
    --counter(cur);
    ++counter(s);
    cur = s;
  }

  std::uint64_t page_size_ = 0;
  std::vector<PageState> states_;
  std::vector<PageId> working_set_;
  std::uint64_t never_copied_ = 0;
  std::uint64_t clean_ = 0;
  std::uint64_t dirty_ = 0;
};

}  // namespace nfmig
