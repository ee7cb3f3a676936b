#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace nfmig;
using namespace nfmig::test;
using D = NetworkDriverKind;

namespace {

ValidatedTopology pair_of(D a, D b, Micros extra = Micros{0}, DriverTable drivers = {}) {
  return validate_topology({host("h1", a), host("h2", b)}, {Link{"h1", "h2", 1'000'000, extra}}, {}, {}, drivers);
}

}  // namespace

TEST(Validate, MinimalTopology) {
  auto t = validate_topology({host("host-1"), host("host-2")}, {Link{"host-1", "host-2", 1000}},
                             {stateless_upf("upf-1", "host-1")});
  EXPECT_EQ(t.hosts().size(), 2u);
  EXPECT_EQ(t.nf("upf-1").host, "host-1");
}

TEST(Validate, StatefulUpfIsRejected) {
  NfInstance upf = stateful_nf(NfKind::UPF, 4);
  upf.plane = Plane::User;
  try {
    validate_topology({host("h1")}, {}, {upf});
    FAIL() << "expected InvariantViolation";
  } catch (const InvariantViolation& e) {
    EXPECT_NE(e.entity().find("UPF"), std::string::npos);
    EXPECT_EQ(e.detail(), "stateless");
  }
}

TEST(Validate, LinkToUnknownHost) {
  try {
    validate_topology({host("h1")}, {Link{"h1", "ghost", 1000}}, {});
    FAIL() << "expected DanglingReference";
  } catch (const DanglingReference& e) {
    EXPECT_EQ(e.to(), "ghost");
  }
}

TEST(Validate, OtherErrors) {
  EXPECT_THROW(validate_topology({host("h1"), host("h1")}, {}, {}), DuplicateId);
  EXPECT_THROW(validate_topology({host("h1")}, {}, {stateless_upf("u", "h9")}), DanglingReference);
  EXPECT_THROW(validate_topology({host("h1"), host("h2")}, {Link{"h1", "h2", 0}}, {}), InvariantViolation);
  EXPECT_THROW(validate_topology({host("h1")}, {Link{"h1", "h1", 10}}, {}), InvariantViolation);
  EXPECT_THROW(validate_topology({host("h1", D::Host, "x", -1)}, {}, {}), InvariantViolation);

  NfInstance smf = stateful_nf(NfKind::SMF, 4);
  smf.plane = Plane::User;
  EXPECT_THROW(validate_topology({host("h1")}, {}, {smf}), InvariantViolation);
  NfInstance stateless_smf = stateless_upf("smf");
  stateless_smf.kind = NfKind::SMF;
  stateless_smf.plane = Plane::Control;
  EXPECT_THROW(validate_topology({host("h1")}, {}, {stateless_smf}), InvariantViolation);
  NfInstance ausf = stateless_upf("ausf");
  ausf.kind = NfKind::AUSF;
  ausf.plane = Plane::Control;
  EXPECT_THROW(validate_topology({host("h1")}, {}, {ausf}), InvariantViolation);
}

TEST(Validate, UdmMayBeEitherWay) {
  NfInstance udm = stateless_upf("udm");
  udm.kind = NfKind::UDM;
  udm.plane = Plane::Control;
  EXPECT_NO_THROW(validate_topology({host("h1")}, {}, {udm}));
  EXPECT_NO_THROW(validate_topology({host("h1")}, {}, {stateful_nf(NfKind::UDM, 4)}));
}

TEST(Validate, InteractingNfsNeedConnectedHosts) {
  NfInstance smf = stateful_nf(NfKind::SMF, 4, 1, {}, "smf");
  smf.host = "h2";
  EXPECT_THROW(validate_topology({host("h1"), host("h2")}, {}, {stateless_upf("upf", "h1"), smf}), InvariantViolation);
  EXPECT_NO_THROW(validate_topology({host("h1"), host("h2"), host("h3")},
                                    {Link{"h1", "h3", 10}, Link{"h3", "h2", 10}},
                                    {stateless_upf("upf", "h1"), smf}));
}

TEST(Validate, SessionAnchorMustBeUpf) {
  auto smf = stateful_nf(NfKind::SMF, 4, 1, {}, "smf");
  EXPECT_THROW(validate_topology({host("h1")}, {}, {smf}, {PduSession{"s", SessionType::Ip, "ue", "smf"}}),
               InvariantViolation);
  EXPECT_THROW(validate_topology({host("h1")}, {}, {smf}, {PduSession{"s", SessionType::Ip, "ue", "nope"}}),
               DanglingReference);
}

TEST(Latency, MacvlanPair) {
  auto t = pair_of(D::Macvlan, D::Macvlan);
  EXPECT_EQ(one_way_latency(t, "h1", "h2"), Nanos{260'000});
  EXPECT_EQ(t.round_trip("h1", "h2"), Nanos{520'000});
}

TEST(Latency, SameHostUsesIntraHostDefault) {
  auto t = pair_of(D::Overlay, D::Overlay);
  EXPECT_EQ(one_way_latency(t, "h1", "h1"), Nanos{25'000});
}

TEST(Latency, IntraHostIsConfigurable) {
  auto t = validate_topology({host("h1")}, {}, {}, {}, {}, TopologyOptions{Micros{7}});
  EXPECT_EQ(one_way_latency(t, "h1", "h1"), Nanos{7'000});
}

TEST(Latency, MixedDriversUseTheSlowerOne) {
  auto t = pair_of(D::Bridge, D::Overlay);
  EXPECT_EQ(one_way_latency(t, "h1", "h2"), Nanos{328'000});
}

TEST(Latency, ExtraLatencyAddsAlongTheRoute) {
  auto t = validate_topology({host("h1", D::Macvlan), host("h2", D::Macvlan), host("h3", D::Macvlan)},
                             {Link{"h1", "h2", 100, Micros{40}}, Link{"h2", "h3", 50, Micros{60}}}, {});
  EXPECT_EQ(one_way_latency(t, "h1", "h3"), Nanos{(260 + 100) * 1000});
  const auto p = t.transfer_path("h1", "h3");
  EXPECT_EQ(p.bandwidth, 50u);
  EXPECT_EQ(p.latency(), Micros{360});
}

TEST(Latency, HalfMicrosecondOneWayIsKeptExact) {
  auto t = pair_of(D::IpvlanL3, D::IpvlanL3);
  EXPECT_EQ(one_way_latency(t, "h1", "h2"), Nanos{269'500});
  EXPECT_EQ(t.transfer_path("h1", "h2").round_trip(), Micros{539});
  EXPECT_EQ(t.transfer_path("h1", "h2").latency(), Micros{270});
}

TEST(Latency, UnconnectedHostsHaveNoPath) {
  auto t = validate_topology({host("h1"), host("h2")}, {}, {});
  EXPECT_THROW(one_way_latency(t, "h1", "h2"), NoPath);
  EXPECT_THROW(carries_l2_path(t, "h1", "h2"), NoPath);
  EXPECT_THROW(one_way_latency(t, "h1", "nope"), DanglingReference);
}

TEST(Latency, TableOneFidelity) {
  const std::pair<D, int> table[] = {{D::Host, 522},     {D::Bridge, 600},   {D::Macvlan, 520},
                                     {D::IpvlanL2, 520}, {D::IpvlanL3, 539}, {D::Overlay, 656}};
  for (auto [d, rtt] : table) {
    auto t = pair_of(d, d);
    EXPECT_EQ(2 * one_way_latency(t, "h1", "h2"), Nanos{rtt * 1000}) << to_string(d);
  }
}

TEST(Latency, SymmetricForAllDriverPairs) {
  for (D a : kAllDrivers)
    for (D b : kAllDrivers)
      for (int extra : {0, 13}) {
        auto t = pair_of(a, b, Micros{extra});
        EXPECT_EQ(one_way_latency(t, "h1", "h2"), one_way_latency(t, "h2", "h1"));
      }
}

TEST(Drivers, BuiltinProfiles) {
  DriverTable t;
  EXPECT_EQ(t[D::Host].rtt_inter_host, Micros{522});
  EXPECT_TRUE(t[D::Host].carries_l2);
  EXPECT_EQ(t[D::Host].isolation, Isolation::None);
  EXPECT_EQ(t[D::Bridge].isolation, Isolation::Medium);
  EXPECT_TRUE(t[D::Macvlan].carries_l2);
  EXPECT_FALSE(t[D::IpvlanL2].carries_l2);
  EXPECT_FALSE(t[D::IpvlanL3].carries_l2);
  EXPECT_FALSE(t[D::Overlay].carries_l2);
  EXPECT_EQ(t[D::Overlay].isolation, Isolation::High);
}

TEST(Drivers, OverrideAndL2Overlay) {
  DriverTable t;
  t.override_profile({D::Bridge, Micros{700}, false, Isolation::High});
  EXPECT_EQ(pair_of(D::Bridge, D::Bridge, Micros{0}, t).round_trip("h1", "h2"), Nanos{700'000});
  EXPECT_THROW(t.override_profile({D::Host, Micros{0}, true, Isolation::None}), std::invalid_argument);
  EXPECT_FALSE(carries_l2_path(pair_of(D::Host, D::Overlay), "h1", "h2"));
  t.set_l2_overlay_enabled(true);
  EXPECT_TRUE(carries_l2_path(pair_of(D::Host, D::Overlay, Micros{0}, t), "h1", "h2"));
}

TEST(L2Path, Examples) {
  EXPECT_TRUE(carries_l2_path(pair_of(D::Host, D::Macvlan), "h1", "h2"));
  EXPECT_FALSE(carries_l2_path(pair_of(D::Host, D::Overlay), "h1", "h2"));
  EXPECT_TRUE(carries_l2_path(pair_of(D::Overlay, D::Overlay), "h1", "h1"));
}

TEST(L2Path, DowngradingNeverEnablesL2) {
  DriverTable table;
  for (D a : kAllDrivers)
    for (D b : kAllDrivers) {
      const bool before = carries_l2_path(pair_of(a, b), "h1", "h2");
      for (D worse : kAllDrivers) {
        if (table[worse].carries_l2) continue;
        EXPECT_FALSE(carries_l2_path(pair_of(worse, b), "h1", "h2"));
        EXPECT_FALSE(carries_l2_path(pair_of(a, worse), "h1", "h2"));
        EXPECT_LE(carries_l2_path(pair_of(worse, b), "h1", "h2"), before);
      }
    }
}

TEST(Types, EnumNamesRoundTrip) {
  for (D d : kAllDrivers) EXPECT_EQ(parse_driver(to_string(d)), d);
  for (NfKind k : kAllNfKinds) EXPECT_EQ(parse_nf_kind(to_string(k)), k);
  EXPECT_FALSE(parse_driver("Weave").has_value());
  for (NfKind k : kAllNfKinds) EXPECT_EQ(plane_of(k) == Plane::User, k == NfKind::UPF);
}

TEST(Topology, RelocatedCopyIsIndependent) {
  auto t = validate_topology({host("h1"), host("h2")}, {Link{"h1", "h2", 10}}, {stateless_upf("u", "h1")});
  auto moved = t.relocated("u", "h2");
  EXPECT_EQ(t.nf("u").host, "h1");
  EXPECT_EQ(moved.nf("u").host, "h2");
  EXPECT_DOUBLE_EQ(moved.host_load("h2"), 1.0);
  EXPECT_DOUBLE_EQ(moved.host_load("h2", "u"), 0.0);
  EXPECT_THROW(t.relocated("u", "h9"), DanglingReference);
}

TEST(Topology, AccessHostPrefersFlaggedHost) {
  auto a = host("a"), b = host("b");
  b.access_point = true;
  auto t = validate_topology({a, b, host("c", D::Host, "hall-B")}, {}, {});
  EXPECT_EQ(t.access_host("hall-A")->id, "b");
  EXPECT_EQ(t.access_host("hall-B")->id, "c");
  EXPECT_EQ(t.access_host("hall-Z"), nullptr);
}
