#pragma once

#include "nfmig/migration/common.hpp"

namespace nfmig {

// Cold start of a stateless NF on the target; nothing is transferred.
inline MigrationResult redeploy_stateless(const NfInstance& nf, const HostNode& target, const MigrationParams& params,
                                          Micros start = Micros{0}) {
  if (nf.stateful)
    throw StrategyInapplicable("redeploy needs a stateless NF; " + std::string(to_string(nf.kind)) + " '" + nf.id +
                               "' is stateful");
  params.validate();
  const auto base = detail::tag(nf, Strategy::NoMigrationRedeploy, target);
  sim::Simulator sim(start);
  MigrationReport report;
  report.strategy = Strategy::NoMigrationRedeploy;
  sim.schedule(start, "redeploy-begin", base, [&] {
    sim.schedule_in(params.restart_overhead, "restart", base,
                    [&] { report.downtime = report.migration_time = sim.now() - start; });
  });
  MigrationResult result{{}, sim.run()};
  result.report = report;
  return result;
}

}  // namespace nfmig
