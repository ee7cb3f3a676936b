#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "nfmig/migration/common.hpp"

namespace nfmig {

// A page touched by the restarted process, `offset` microseconds of process
// time after the restart. Stalls push later accesses back.
struct PageAccess {
  Micros offset{0};
  PageId page = 0;
};

namespace detail {

class PostCopyRun {
 public:
  PostCopyRun(NfInstance& nf, const HostNode& target, const TransferPath& path, const MigrationParams& params,
              std::span<const PageAccess> accesses, Micros start)
      : image_(*nf.memory),
        params_(params),
        accesses_(accesses),
        start_(start),
        base_(tag(nf, Strategy::PostCopy, target)),
        page_size_(image_.page_size()),
        latency_(path.latency()),
        page_time_(path.serialization(page_size_)),
        path_(path),
        sim_(start),
        sent_(image_.num_pages(), 0) {
    report_.strategy = Strategy::PostCopy;
  }

  MigrationResult run() {
    sim_.schedule(start_, "freeze", base_, [this] {
      sim_.schedule_in(params_.freeze_overhead, "transfer-begin",
                       with(base_, {{"phase", "working-set"}, {"pages", image_.working_set().size()}}),
                       [this] { send_working_set(); });
    });
    MigrationResult result{{}, sim_.run()};
    result.report = report_;
    return result;
  }

 private:
  struct Send {
    PageId page;
    bool demand;
    sim::EventHandle handle;
  };
  struct Stall {
    PageId page;
    Micros since;
    sim::EventHandle deadline;
  };

  void send_working_set() {
    const auto ws = image_.take_transfer_batch(BatchFilter::WorkingSetOnly);
    sim_.schedule_in(path_.batch_time(ws.size(), page_size_), "transfer-complete",
                     with(base_, {{"phase", "working-set"}}), [this, ws] {
                       image_.mark_copied(ws);
                       report_.bytes_transferred += ws.size() * page_size_;
                       sim_.schedule_in(params_.restart_overhead, "restart", base_, [this] { restart(); });
                     });
  }

  void restart() {
    restarted_ = sim_.now();
    report_.downtime = restarted_ - start_;
    if (image_.fully_clean()) {
      finish(true);
      return;
    }
    for (PageId p : image_.take_transfer_batch(BatchFilter::NeverCopiedOnly)) background_.push_back(p);
    epoch_ = sim_.now();
    pump();
    schedule_access(0);
  }

  // Puts the next page on the wire: a pending demand first, else the lowest
  // background page. Background sends are timed from the epoch so that an
  // uninterrupted run of k pages takes exactly ceil(k * page_size * 1e6 / B).
  void pump() {
    if (finished_ || on_wire_) return;
    if (demanded_) {
      const PageId p = *demanded_;
      demanded_.reset();
      auto h = sim_.schedule_in(page_time_, "demand-sent", with(base_, {{"page", p}}), [this, p] { sent(p, true); });
      on_wire_ = Send{p, true, h};
      return;
    }
    while (!background_.empty()) {
      const PageId p = background_.front();
      background_.pop_front();
      if (sent_[p] || image_.state(p) == PageState::CleanAtTarget) continue;
      ++since_epoch_;
      const Micros done = epoch_ + path_.serialization(since_epoch_ * page_size_);
      auto h = sim_.schedule(done, "page-sent", with(base_, {{"page", p}}), [this, p] { sent(p, false); });
      on_wire_ = Send{p, false, h};
      return;
    }
  }

  void sent(PageId p, bool demand) {
    on_wire_.reset();
    sent_[p] = 1;
    if (demand) {
      epoch_ = sim_.now();
      since_epoch_ = 0;
    }
    sim_.schedule_in(latency_, "page-arrived", with(base_, {{"page", p}, {"demand", demand}}),
                     [this, p] { arrived(p); });
    pump();
  }

  void arrived(PageId p) {
    if (finished_) return;
    const bool unblocks = stall_ && stall_->page == p;
    if (unblocks && sim_.now() - stall_->since > params_.postcopy_fault_deadline) {
      fail_stall();
      return;
    }
    image_.mark_copied(p);
    report_.bytes_transferred += page_size_;
    if (unblocks) {
      stalled_ += sim_.now() - stall_->since;
      sim_.cancel(stall_->deadline);
      stall_.reset();
      schedule_access(resume_at_);
    }
    if (image_.fully_clean()) finish(true);
  }

  void demand_reaches_source(PageId p) {
    if (finished_ || sent_[p] || image_.state(p) == PageState::CleanAtTarget) return;
    if (on_wire_) {
      // Preempted page goes back to the head of the background stream.
      sim_.cancel(on_wire_->handle);
      if (on_wire_->page != p) background_.push_front(on_wire_->page);
      on_wire_.reset();
    }
    demanded_ = p;
    pump();
  }

  void schedule_access(std::size_t k) {
    if (finished_ || k >= accesses_.size()) return;
    const Micros at = std::max(restarted_ + accesses_[k].offset + stalled_, sim_.now());
    next_access_ = sim_.schedule(at, "access", with(base_, {{"page", accesses_[k].page}}), [this, k] { access(k); });
  }

  void access(std::size_t k) {
    next_access_.reset();
    if (finished_) return;
    const PageId p = accesses_[k].page;
    if (image_.state(p) == PageState::CleanAtTarget) {
      schedule_access(k + 1);
      return;
    }
    sim_.note("page-fault", with(base_, {{"page", p}}));
    auto deadline = sim_.schedule_in(params_.postcopy_fault_deadline + Micros{1}, "deadline-check",
                                     with(base_, {{"page", p}}), [this] {
                                       if (!finished_ && stall_) fail_stall();
                                     });
    stall_ = Stall{p, sim_.now(), deadline};
    resume_at_ = k + 1;
    if (!sent_[p])
      sim_.schedule_in(latency_, "demand-request", with(base_, {{"page", p}}), [this, p] { demand_reaches_source(p); });
  }

  void fail_stall() {
    stalled_ += sim_.now() - stall_->since;
    sim_.note("fault-deadline-exceeded", with(base_, {{"page", stall_->page}}));
    stall_.reset();
    finish(false, "fault deadline exceeded");
  }

  void finish(bool ok, std::string reason = {}) {
    finished_ = true;
    report_.success = ok;
    report_.failure_reason = std::move(reason);
    report_.migration_time = sim_.now() - start_;
    report_.stall_time = stalled_;
    if (on_wire_) sim_.cancel(on_wire_->handle);
    if (next_access_) sim_.cancel(*next_access_);
    if (stall_) sim_.cancel(stall_->deadline);
    sim_.note(ok ? "migration-complete" : "migration-failed", base_);
  }

  MemoryImage& image_;
  const MigrationParams& params_;
  std::span<const PageAccess> accesses_;
  Micros start_;
  sim::Fields base_;
  std::uint64_t page_size_;
  Micros latency_;
  Micros page_time_;
  TransferPath path_;
  sim::Simulator sim_;
  MigrationReport report_;

  std::vector<std::uint8_t> sent_;  // serialized, arrival pending or done
  std::deque<PageId> background_;
  std::optional<Send> on_wire_;
  std::optional<PageId> demanded_;
  std::optional<Stall> stall_;
  std::optional<sim::EventHandle> next_access_;
  std::size_t resume_at_ = 0;
  Micros epoch_{0};
  std::uint64_t since_epoch_ = 0;
  Micros restarted_{0};
  Micros stalled_{0};
  bool finished_ = false;
};

}  // namespace detail

// Post-copy. Freeze, send the working set, restart on the target; the rest of
// the image streams in the background in ascending page id. Touching a page
// that has not arrived sends a demand request (one-way latency to the source)
// that preempts the background page on the wire, so the page lands after
// 2L + one page serialization. A single stall longer than the fault deadline
// fails the migration at that instant; bytes count pages that arrived by then.
inline MigrationResult migrate_post_copy(NfInstance& nf, const HostNode& target, const TransferPath& path,
                                         const MigrationParams& params, std::span<const PageAccess> access_trace,
                                         Micros start = Micros{0}) {
  MemoryImage& image = detail::require_state(nf, Strategy::PostCopy);
  params.validate();
  for (std::size_t i = 0; i < access_trace.size(); ++i) {
    if (access_trace[i].page >= image.num_pages())
      throw std::invalid_argument("access trace: page " + std::to_string(access_trace[i].page) + " beyond image");
    if (access_trace[i].offset.count() < 0) throw std::invalid_argument("access trace: negative offset");
    if (i > 0 && access_trace[i].offset < access_trace[i - 1].offset)
      throw std::invalid_argument("access trace: offsets must be non-decreasing");
  }
  image.reset();
  return detail::PostCopyRun(nf, target, path, params, access_trace, start).run();
}

}  // namespace nfmig
