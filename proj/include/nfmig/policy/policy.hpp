#pragma once

#include <array>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nfmig/core/topology.hpp"
#include "nfmig/error.hpp"
#include "nfmig/migration/params.hpp"

namespace nfmig {

enum class Objective { MinimizeDowntime, MinimizeMigrationTime, MinimizeBytes };

inline constexpr std::array kAllObjectives{Objective::MinimizeDowntime, Objective::MinimizeMigrationTime,
                                           Objective::MinimizeBytes};

constexpr std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::MinimizeDowntime: return "downtime";
    case Objective::MinimizeMigrationTime: return "migration-time";
    case Objective::MinimizeBytes: return "bytes";
  }
  return "?";
}

inline std::optional<Objective> parse_objective(std::string_view s) { return parse_enum(s, kAllObjectives); }

struct StrategyDecision {
  Strategy chosen = Strategy::NoMigrationRedeploy;
  std::vector<Strategy> candidates;  // chosen first
  std::string rationale;
};

namespace detail {

inline StrategyDecision decide(Strategy chosen, std::vector<Strategy> alternatives, std::string rationale) {
  StrategyDecision d{chosen, {chosen}, std::move(rationale)};
  for (Strategy s : alternatives)
    if (s != chosen) d.candidates.push_back(s);
  return d;
}

}  // namespace detail

// Per-function strategy table. Where the analysis names two suitable
// approaches, the objective picks one and the other stays in candidates.
inline StrategyDecision select_strategy(NfKind kind, bool stateful, Objective objective) {
  if (auto req = required_statefulness(kind); req && *req != stateful)
    throw InvalidCombination(std::string(to_string(kind)) + " cannot be " + (stateful ? "stateful" : "stateless"));

  const bool downtime = objective == Objective::MinimizeDowntime;
  const bool bytes = objective == Objective::MinimizeBytes;
  switch (kind) {
    case NfKind::UPF:
      return detail::decide(Strategy::NoMigrationRedeploy, {}, "upf-stateless-redeploy");
    case NfKind::SMF:
      return detail::decide(downtime ? Strategy::Parallel : Strategy::PreCopy, {Strategy::Parallel, Strategy::PreCopy},
                            "smf-precopy-or-ppm");
    case NfKind::AMF:
      if (bytes)
        return detail::decide(Strategy::PreCopy, {Strategy::Parallel}, "amf-bytes-fallback-inferred");
      return detail::decide(Strategy::Parallel, {Strategy::PreCopy}, "amf-ppm-preferred");
    case NfKind::AUSF:
      return detail::decide(Strategy::InterCopy, {}, "ausf-intercopy-send-once");
    case NfKind::UDM:
      if (!stateful) return detail::decide(Strategy::NoMigrationRedeploy, {}, "udm-stateless-state-in-udr");
      return detail::decide(Strategy::InterCopy, {}, "udm-intercopy-sufficient");
    case NfKind::UDR:
      return detail::decide(Strategy::InterCopy, {}, "udr-intercopy-by-analogy");
    case NfKind::NRF: {
      const Strategy s = objective == Objective::MinimizeMigrationTime ? Strategy::InterCopy
                         : downtime                                    ? Strategy::Parallel
                                                                       : Strategy::PreCopy;
      return detail::decide(s, {Strategy::InterCopy, Strategy::PreCopy, Strategy::Parallel},
                            "nrf-objective-dependent");
    }
  }
  throw InvalidCombination("unknown NF kind");
}

// Network isolation an NF kind needs from its host driver, if any.
constexpr std::optional<Isolation> required_isolation(NfKind kind) {
  if (kind == NfKind::AUSF) return Isolation::High;
  return std::nullopt;
}

enum class PlacementViolationKind { EthernetPduRequiresL2, IsolationTooLow, CapacityExceeded };

constexpr std::string_view to_string(PlacementViolationKind v) {
  switch (v) {
    case PlacementViolationKind::EthernetPduRequiresL2: return "EthernetPduRequiresL2";
    case PlacementViolationKind::IsolationTooLow: return "IsolationTooLow";
    case PlacementViolationKind::CapacityExceeded: return "CapacityExceeded";
  }
  return "?";
}

struct PlacementViolation {
  PlacementViolationKind kind;
  std::string detail;
};

// Empty result means the NF may run on host. Capacity counts every other NF
// the topology currently places on host.
inline std::vector<PlacementViolation> check_placement(const NfInstance& nf, const HostNode& host,
                                                       const std::vector<PduSession>& sessions,
                                                       const ValidatedTopology& topology) {
  std::vector<PlacementViolation> out;
  const DriverTable& drivers = topology.drivers();
  if (nf.kind == NfKind::UPF && !drivers.carries_l2(host.attached_driver)) {
    for (const auto& s : sessions) {
      if (s.anchor_upf == nf.id && s.session_type == SessionType::Ethernet) {
        out.push_back({PlacementViolationKind::EthernetPduRequiresL2,
                       "session '" + s.id + "' is Ethernet, driver " + std::string(to_string(host.attached_driver)) +
                           " on '" + host.id + "' carries no L2"});
        break;
      }
    }
  }
  if (auto need = required_isolation(nf.kind)) {
    const Isolation have = drivers[host.attached_driver].isolation;
    if (have != *need)
      out.push_back({PlacementViolationKind::IsolationTooLow, std::string(to_string(nf.kind)) + " needs " +
                                                                  std::string(to_string(*need)) + " isolation, '" +
                                                                  host.id + "' has " + std::string(to_string(have))});
  }
  const double load = topology.host_load(host.id, nf.id);
  if (load + nf.cpu_demand > host.cpu_capacity)
    out.push_back({PlacementViolationKind::CapacityExceeded,
                   "'" + host.id + "' capacity " + std::to_string(host.cpu_capacity) + " < load " +
                       std::to_string(load + nf.cpu_demand)});
  return out;
}

// Default statefulness used when rendering the decision grid.
constexpr bool default_stateful(NfKind k) { return required_statefulness(k).value_or(true); }

// The 7 x 3 decision grid printed by `policy-table`.
inline std::string format_policy_table() {
  std::ostringstream os;
  auto row = [&](std::string_view kind, std::string_view stateful, std::string_view a, std::string_view b,
                 std::string_view c, std::string_view why) {
    os << std::left << std::setw(6) << kind << std::setw(10) << stateful << std::setw(21) << a << std::setw(21) << b
       << std::setw(21) << c << why << '\n';
  };
  row("kind", "stateful", to_string(Objective::MinimizeDowntime), to_string(Objective::MinimizeMigrationTime),
      to_string(Objective::MinimizeBytes), "rationale");
  for (NfKind k : kAllNfKinds) {
    const bool st = default_stateful(k);
    std::array<StrategyDecision, 3> d;
    for (std::size_t i = 0; i < kAllObjectives.size(); ++i) d[i] = select_strategy(k, st, kAllObjectives[i]);
    std::string why;
    for (const auto& x : d)
      if (why.find(x.rationale) == std::string::npos) why += (why.empty() ? "" : ",") + x.rationale;
    row(to_string(k), st ? "yes" : "no", to_string(d[0].chosen), to_string(d[1].chosen), to_string(d[2].chosen), why);
  }
  const auto udm = select_strategy(NfKind::UDM, false, Objective::MinimizeDowntime);
  os << "stateless UDM: " << to_string(udm.chosen) << " for every objective (" << udm.rationale << ")\n";
  return os.str();
}

}  // namespace nfmig
