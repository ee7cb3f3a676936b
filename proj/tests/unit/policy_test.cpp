#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"

using namespace nfmig;
using namespace nfmig::test;
using D = NetworkDriverKind;
using O = Objective;
using S = Strategy;

TEST(SelectStrategy, Examples) {
  EXPECT_EQ(select_strategy(NfKind::AMF, true, O::MinimizeDowntime).chosen, S::Parallel);
  EXPECT_EQ(select_strategy(NfKind::NRF, true, O::MinimizeMigrationTime).chosen, S::InterCopy);
  EXPECT_EQ(select_strategy(NfKind::UPF, false, O::MinimizeBytes).chosen, S::NoMigrationRedeploy);
}

TEST(SelectStrategy, FullGrid) {
  struct Row {
    NfKind kind;
    bool stateful;
    S downtime, mtime, bytes;
  };
  const Row rows[] = {
      {NfKind::UPF, false, S::NoMigrationRedeploy, S::NoMigrationRedeploy, S::NoMigrationRedeploy},
      {NfKind::SMF, true, S::Parallel, S::PreCopy, S::PreCopy},
      {NfKind::AMF, true, S::Parallel, S::Parallel, S::PreCopy},
      {NfKind::AUSF, true, S::InterCopy, S::InterCopy, S::InterCopy},
      {NfKind::UDM, true, S::InterCopy, S::InterCopy, S::InterCopy},
      {NfKind::UDM, false, S::NoMigrationRedeploy, S::NoMigrationRedeploy, S::NoMigrationRedeploy},
      {NfKind::UDR, true, S::InterCopy, S::InterCopy, S::InterCopy},
      {NfKind::NRF, true, S::Parallel, S::InterCopy, S::PreCopy},
  };
  for (const auto& r : rows) {
    EXPECT_EQ(select_strategy(r.kind, r.stateful, O::MinimizeDowntime).chosen, r.downtime) << to_string(r.kind);
    EXPECT_EQ(select_strategy(r.kind, r.stateful, O::MinimizeMigrationTime).chosen, r.mtime) << to_string(r.kind);
    EXPECT_EQ(select_strategy(r.kind, r.stateful, O::MinimizeBytes).chosen, r.bytes) << to_string(r.kind);
  }
}

TEST(SelectStrategy, SmfKeepsBothCandidates) {
  auto d = select_strategy(NfKind::SMF, true, O::MinimizeBytes);
  EXPECT_EQ(d.candidates, (std::vector<S>{S::PreCopy, S::Parallel}));
  EXPECT_EQ(d.rationale, "smf-precopy-or-ppm");
  EXPECT_EQ(select_strategy(NfKind::AMF, true, O::MinimizeBytes).rationale, "amf-bytes-fallback-inferred");
}

TEST(SelectStrategy, InvalidCombinations) {
  EXPECT_THROW(select_strategy(NfKind::UPF, true, O::MinimizeDowntime), InvalidCombination);
  EXPECT_THROW(select_strategy(NfKind::SMF, false, O::MinimizeDowntime), InvalidCombination);
  EXPECT_THROW(select_strategy(NfKind::AUSF, false, O::MinimizeBytes), InvalidCombination);
}

TEST(SelectStrategy, TotalAndConsistent) {
  for (NfKind k : kAllNfKinds)
    for (bool stateful : {false, true}) {
      if (auto req = required_statefulness(k); req && *req != stateful) continue;
      for (O o : kAllObjectives) {
        auto d = select_strategy(k, stateful, o);
        ASSERT_FALSE(d.candidates.empty());
        EXPECT_EQ(d.candidates.front(), d.chosen);
        EXPECT_FALSE(d.rationale.empty());
        if (!stateful) {
          for (S s : d.candidates) EXPECT_FALSE(copies_state(s));
        }
      }
    }
}

TEST(RequiredIsolation, OnlyAusf) {
  EXPECT_EQ(required_isolation(NfKind::AUSF), Isolation::High);
  EXPECT_FALSE(required_isolation(NfKind::UPF).has_value());
  EXPECT_FALSE(required_isolation(NfKind::SMF).has_value());
}

namespace {

struct Placement {
  ValidatedTopology topo;
  NfInstance nf;
};

Placement one_host(D driver, NfInstance nf, std::vector<PduSession> sessions = {}, double cpu = 8.0) {
  nf.host = "h1";
  auto topo = validate_topology({host("h1", driver, "hall-A", cpu)}, {}, {nf}, std::move(sessions));
  return {topo, nf};
}

std::vector<PlacementViolationKind> kinds(const std::vector<PlacementViolation>& v) {
  std::vector<PlacementViolationKind> out;
  for (auto& x : v) out.push_back(x.kind);
  return out;
}

NfInstance ausf() { return stateful_nf(NfKind::AUSF, 4, 1, {}, "ausf-1"); }

}  // namespace

TEST(CheckPlacement, EthernetUpfOnOverlay) {
  auto p = one_host(D::Overlay, stateless_upf(), {PduSession{"s1", SessionType::Ethernet, "ue", "upf-1"}});
  EXPECT_EQ(kinds(check_placement(p.nf, p.topo.host("h1"), p.topo.sessions(), p.topo)),
            (std::vector<PlacementViolationKind>{PlacementViolationKind::EthernetPduRequiresL2}));
}

TEST(CheckPlacement, AusfIsolation) {
  auto overlay = one_host(D::Overlay, ausf());
  EXPECT_TRUE(check_placement(overlay.nf, overlay.topo.host("h1"), {}, overlay.topo).empty());
  auto bridge = one_host(D::Bridge, ausf());
  EXPECT_EQ(kinds(check_placement(bridge.nf, bridge.topo.host("h1"), {}, bridge.topo)),
            (std::vector<PlacementViolationKind>{PlacementViolationKind::IsolationTooLow}));
}

TEST(CheckPlacement, Capacity) {
  auto p = one_host(D::Host, stateless_upf(), {}, 0.5);
  EXPECT_EQ(kinds(check_placement(p.nf, p.topo.host("h1"), {}, p.topo)),
            (std::vector<PlacementViolationKind>{PlacementViolationKind::CapacityExceeded}));
}

TEST(CheckPlacement, AddingSessionsNeverRemovesViolations) {
  const std::vector<PduSession> pool = {{"s1", SessionType::Ip, "ue", "upf-1"},
                                        {"s2", SessionType::Ethernet, "ue", "upf-1"},
                                        {"s3", SessionType::Ip, "ue2", "upf-1"},
                                        {"s4", SessionType::Ethernet, "ue2", "upf-1"}};
  for (D d : kAllDrivers) {
    auto p = one_host(d, stateless_upf(), pool);
    for (unsigned mask = 0; mask < 16; ++mask) {
      std::vector<PduSession> base;
      for (unsigned i = 0; i < 4; ++i)
        if (mask & (1u << i)) base.push_back(pool[i]);
      const auto before = check_placement(p.nf, p.topo.host("h1"), base, p.topo).size();
      for (unsigned i = 0; i < 4; ++i) {
        if (mask & (1u << i)) continue;
        auto more = base;
        more.push_back(pool[i]);
        EXPECT_GE(check_placement(p.nf, p.topo.host("h1"), more, p.topo).size(), before);
      }
    }
  }
}

TEST(PolicyTable, MatchesGoldenFile) {
  std::ifstream in(std::string(NFMIG_SOURCE_DIR) + "/tests/golden/policy_table.txt", std::ios::binary);
  ASSERT_TRUE(in);
  std::ostringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(format_policy_table(), golden.str());
}
