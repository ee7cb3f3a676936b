#pragma once

#include <memory>
#include <optional>

#include "nfmig/migration/common.hpp"

namespace nfmig {

// A replica of a stateful NF running on the target and fed the same input as
// the source. The full image is copied once; from then on the two instances
// drift apart at the NF's dirty rate, and every sync interval the pages
// dirtied since the previous tick are shipped to the replica. Until the
// initial copy lands the replica is not running, so no divergence accrues.
//
// Holds references to the NF and its dirty process; both must outlive it.
class ReplicaSync {
 public:
  ReplicaSync(NfInstance& nf, const HostNode& target, double target_free_capacity, const TransferPath& path,
              const MigrationParams& params, DirtyProcess& dirty, Micros start)
      : nf_(nf),
        image_(detail::require_state(nf, Strategy::Parallel)),
        params_(params),
        path_(path),
        base_(detail::tag(nf, Strategy::Parallel, target)),
        sim_(start),
        source_(image_, dirty, start) {
    params.validate();
    if (params.ppm_sync_interval.count() <= 0) throw InvariantViolation("migration params", "ppm_sync_interval must be > 0");
    if (target_free_capacity < nf.cpu_demand)
      throw InsufficientCapacity("host '" + target.id + "' has " + std::to_string(target_free_capacity) +
                                 " free cpu, replica of '" + nf.id + "' needs " + std::to_string(nf.cpu_demand));
    image_.reset();
    sim_.schedule(start, "replica-start", detail::with(base_, {{"pages", image_.num_pages()}}), [this] {
      const auto all = image_.take_transfer_batch(BatchFilter::All);
      sim_.schedule_in(path_.batch_time(all.size(), image_.page_size()), "initial-copy-complete", base_,
                       [this, all] {
                         image_.mark_copied(all);
                         sync_bytes_ += all.size() * image_.page_size();
                         synced_at_ = sim_.now();
                         source_.rebase(sim_.now());
                         schedule_tick(sim_.now() + params_.ppm_sync_interval);
                       });
    });
  }

  ReplicaSync(const ReplicaSync&) = delete;
  ReplicaSync& operator=(const ReplicaSync&) = delete;

  // Runs sync activity up to and including time t.
  void advance_to(Micros t) {
    append(sim_.run_until(t));
    if (synced_at_ && !frozen_) source_.advance_to(t);
    now_ = std::max(now_, t);
  }

  Micros now() const noexcept { return std::max(now_, sim_.now()); }
  bool synced() const noexcept { return synced_at_.has_value(); }
  std::optional<Micros> synced_at() const noexcept { return synced_at_; }
  std::uint64_t sync_bytes() const noexcept { return sync_bytes_; }
  std::uint32_t ticks() const noexcept { return ticks_; }
  std::uint64_t out_of_sync_pages() const noexcept { return image_.dirty_count(); }
  const NfInstance& nf() const noexcept { return nf_; }

 private:
  friend MigrationResult migrate_parallel(ReplicaSync& replica, const MigrationParams& params);

  void schedule_tick(Micros at) {
    tick_ = sim_.schedule(at, "sync-tick", base_, [this] { tick(); });
  }

  void tick() {
    source_.advance_to(sim_.now());
    auto delta = image_.take_transfer_batch(BatchFilter::DirtyOnly);
    const Micros due = sim_.now() + params_.ppm_sync_interval;
    if (delta.empty()) {
      ++ticks_;
      schedule_tick(due);
      return;
    }
    tick_ = sim_.schedule_in(path_.batch_time(delta.size(), image_.page_size()), "sync-complete",
                             detail::with(base_, {{"pages", delta.size()}}), [this, delta, due] {
                               image_.mark_copied(delta);
                               source_.advance_to(sim_.now());
                               sync_bytes_ += delta.size() * image_.page_size();
                               ++ticks_;
                               schedule_tick(std::max(due, sim_.now()));
                             });
  }

  void append(sim::EventTrace t) { trace_.insert(trace_.end(), t.begin(), t.end()); }

  NfInstance& nf_;
  MemoryImage& image_;
  MigrationParams params_;
  TransferPath path_;
  sim::Fields base_;
  sim::Simulator sim_;
  detail::SourceProcess source_;
  sim::EventTrace trace_;
  std::optional<Micros> synced_at_;
  std::optional<sim::EventHandle> tick_;
  std::uint64_t sync_bytes_ = 0;
  std::uint32_t ticks_ = 0;
  Micros now_{0};
  bool frozen_ = false;
};

using ReplicaHandle = std::unique_ptr<ReplicaSync>;

inline ReplicaHandle start_replica_sync(NfInstance& nf, const HostNode& target, double target_free_capacity,
                                        const TransferPath& path, const MigrationParams& params, DirtyProcess& dirty,
                                        Micros start = Micros{0}) {
  return std::make_unique<ReplicaSync>(nf, target, target_free_capacity, path, params, dirty, start);
}

// Handover at the replica's current time: freeze the source, ship the
// out-of-sync delta, signal the handover, activate the replica. Any sync
// transfer still in flight is abandoned; its pages are part of the delta.
inline MigrationResult migrate_parallel(ReplicaSync& r, const MigrationParams& params) {
  if (!r.synced()) throw ReplicaNotSynced("replica of '" + r.nf_.id + "' has not finished its initial copy");
  if (r.frozen_) throw ReplicaNotSynced("replica of '" + r.nf_.id + "' was already handed over");
  params.validate();
  const Micros start = r.now();
  r.advance_to(start);
  if (r.tick_) r.sim_.cancel(*r.tick_);
  r.tick_.reset();

  MigrationReport report;
  report.strategy = Strategy::Parallel;
  auto& sim = r.sim_;
  const std::uint64_t page_size = r.image_.page_size();
  const Micros signaling = params.handover_signal_roundtrips * r.path_.round_trip();

  sim.schedule(start, "handover-freeze", detail::with(r.base_, {{"delta_pages", r.image_.dirty_count()}}), [&] {
    r.source_.freeze(sim.now());
    r.frozen_ = true;
    sim.schedule_in(params.freeze_overhead, "transfer-begin", r.base_, [&] {
      const auto delta = r.image_.take_transfer_batch(BatchFilter::DirtyOnly);
      sim.schedule_in(r.path_.batch_time(delta.size(), page_size), "transfer-complete",
                      detail::with(r.base_, {{"pages", delta.size()}}), [&, delta] {
                        r.image_.mark_copied(delta);
                        report.bytes_transferred = delta.size() * page_size;
                        sim.schedule_in(signaling, "handover-signaled", r.base_, [&] {
                          sim.schedule_in(params.activation_overhead, "replica-active", r.base_, [&] {
                            report.downtime = report.migration_time = sim.now() - start;
                          });
                        });
                      });
    });
  });
  r.append(sim.run());
  r.now_ = sim.now();
  report.sync_bytes = r.sync_bytes_;
  return MigrationResult{report, r.trace_};
}

}  // namespace nfmig
