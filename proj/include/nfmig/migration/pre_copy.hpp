#pragma once

#include <functional>

#include "nfmig/migration/common.hpp"

namespace nfmig {

// Iterative pre-copy. Round 0 sends every page while the NF keeps running;
// each later round resends the pages dirtied during the previous one. After a
// round, if the dirty set is at most the stop threshold or the round cap is
// reached, the NF is frozen, the residual dirty set is sent and the NF is
// restarted on the target. Hitting the cap is not an error: the report simply
// carries a large final batch.
inline MigrationResult migrate_pre_copy(NfInstance& nf, const HostNode& target, const TransferPath& path,
                                        const MigrationParams& params, DirtyProcess& dirty,
                                        Micros start = Micros{0}) {
  MemoryImage& image = detail::require_state(nf, Strategy::PreCopy);
  params.validate();
  image.reset();

  const auto base = detail::tag(nf, Strategy::PreCopy, target);
  sim::Simulator sim(start);
  detail::SourceProcess source(image, dirty, start);
  MigrationReport report;
  report.strategy = Strategy::PreCopy;
  const std::uint64_t page_size = image.page_size();

  Micros freeze_at{0};
  std::function<void()> start_round;
  auto stop_and_copy = [&] {
    freeze_at = sim.now();
    source.freeze(freeze_at);
    sim.schedule_in(params.freeze_overhead, "transfer-begin",
                    detail::with(base, {{"phase", "final"}, {"pages", image.dirty_count()}}), [&] {
                      const auto residual = image.take_transfer_batch(BatchFilter::DirtyOnly);
                      sim.schedule_in(path.batch_time(residual.size(), page_size), "transfer-complete",
                                      detail::with(base, {{"phase", "final"}}), [&, residual] {
                                        image.mark_copied(residual);
                                        report.bytes_transferred += residual.size() * page_size;
                                        sim.schedule_in(params.restart_overhead, "restart", base, [&] {
                                          report.downtime = sim.now() - freeze_at;
                                          report.migration_time = sim.now() - start;
                                        });
                                      });
                    });
  };

  start_round = [&] {
    auto batch = image.take_transfer_batch(report.rounds == 0 ? BatchFilter::All : BatchFilter::DirtyOnly);
    const Micros began = sim.now();
    const std::uint64_t pages = batch.size();
    sim.schedule_in(path.batch_time(pages, page_size), "round-complete",
                    detail::with(base, {{"round", report.rounds}, {"pages", pages}}),
                    [&, batch = std::move(batch), began] {
                      // Pages written while the batch was in flight are dirty
                      // again, so mark the batch first and then apply the
                      // dirtying of the round.
                      image.mark_copied(batch);
                      report.bytes_transferred += batch.size() * page_size;
                      ++report.rounds;
                      const auto dirtied = source.advance_to(sim.now());
                      sim.note("dirty", detail::with(base, {{"round_us", (sim.now() - began).count()},
                                                            {"dirtied", dirtied},
                                                            {"dirty_set", image.dirty_count()}}));
                      if (image.dirty_count() <= params.precopy_stop_threshold ||
                          report.rounds >= params.precopy_max_rounds)
                        stop_and_copy();
                      else
                        start_round();
                    });
  };

  sim.schedule(start, "precopy-begin", detail::with(base, {{"pages", image.num_pages()}}), [&] { start_round(); });
  MigrationResult result{{}, sim.run()};
  result.report = report;
  return result;
}

}  // namespace nfmig
