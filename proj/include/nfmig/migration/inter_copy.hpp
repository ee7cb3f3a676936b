#pragma once

#include "nfmig/migration/common.hpp"

namespace nfmig {

// Freeze, send the whole image once, restart on the target. No dirtying
// happens while frozen, so downtime equals migration time exactly.
inline MigrationResult migrate_inter_copy(NfInstance& nf, const HostNode& target, const TransferPath& path,
                                          const MigrationParams& params, Micros start = Micros{0}) {
  MemoryImage& image = detail::require_state(nf, Strategy::InterCopy);
  params.validate();
  image.reset();

  const auto base = detail::tag(nf, Strategy::InterCopy, target);
  sim::Simulator sim(start);
  MigrationReport report;
  report.strategy = Strategy::InterCopy;

  sim.schedule(start, "freeze", base, [&] {
    sim.schedule_in(params.freeze_overhead, "transfer-begin", detail::with(base, {{"pages", image.num_pages()}}), [&] {
      const auto pages = image.take_transfer_batch(BatchFilter::All);
      sim.schedule_in(path.batch_time(pages.size(), image.page_size()), "transfer-complete", base, [&, pages] {
        image.mark_copied(pages);
        report.bytes_transferred += pages.size() * image.page_size();
        sim.schedule_in(params.restart_overhead, "restart", base, [&] {
          report.downtime = report.migration_time = sim.now() - start;
        });
      });
    });
  });
  MigrationResult result{{}, sim.run()};
  result.report = report;
  return result;
}

}  // namespace nfmig
