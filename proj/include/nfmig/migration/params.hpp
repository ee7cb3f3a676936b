#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nfmig/error.hpp"
#include "nfmig/sim/time.hpp"

namespace nfmig {

struct MigrationParams {
  Micros freeze_overhead{0};
  Micros restart_overhead{0};
  Micros activation_overhead{0};  // replica role switch, no cold restart
  std::uint64_t precopy_stop_threshold = 8;  // pages
  std::uint32_t precopy_max_rounds = 10;
  Micros postcopy_fault_deadline{100'000};
  Micros ppm_sync_interval{100'000};
  std::uint32_t handover_signal_roundtrips = 1;

  void validate() const {
    for (auto [name, v] : {std::pair{"freeze_overhead", freeze_overhead}, {"restart_overhead", restart_overhead},
                           {"activation_overhead", activation_overhead},
                           {"postcopy_fault_deadline", postcopy_fault_deadline},
                           {"ppm_sync_interval", ppm_sync_interval}})
      if (v.count() < 0) throw InvariantViolation("migration params", std::string(name) + " must be >= 0");
    if (precopy_max_rounds < 1) throw InvariantViolation("migration params", "precopy_max_rounds must be >= 1");
  }
};

enum class Strategy { InterCopy, PreCopy, PostCopy, Parallel, NoMigrationRedeploy };

constexpr std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::InterCopy: return "InterCopy";
    case Strategy::PreCopy: return "PreCopy";
    case Strategy::PostCopy: return "PostCopy";
    case Strategy::Parallel: return "Parallel";
    case Strategy::NoMigrationRedeploy: return "NoMigrationRedeploy";
  }
  return "?";
}

constexpr bool copies_state(Strategy s) { return s != Strategy::NoMigrationRedeploy; }

struct MigrationReport {
  Strategy strategy = Strategy::InterCopy;
  Micros downtime{0};
  Micros migration_time{0};
  std::uint64_t bytes_transferred = 0;
  std::uint64_t sync_bytes = 0;
  Micros stall_time{0};
  std::uint32_t rounds = 0;
  bool success = true;
  std::string failure_reason;

  std::string outcome() const { return success ? "Success" : "Failed(" + failure_reason + ")"; }

  static MigrationReport failed(Strategy s, std::string reason) {
    MigrationReport r;
    r.strategy = s;
    r.success = false;
    r.failure_reason = std::move(reason);
    return r;
  }
};

}  // namespace nfmig
