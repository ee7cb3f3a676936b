#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include <nfmig/sim/rng.hpp>
#include <nfmig/sim/simulator.hpp>

using namespace nfmig;
using namespace nfmig::sim;
using std::chrono_literals::operator""us;

TEST(Simulator, EventAtNowRunsBeforeLaterEvents) {
  Simulator s(Micros{50});
  std::vector<std::string> order;
  s.schedule(Micros{60}, "later", {}, [&] { order.push_back("later"); });
  s.schedule(Micros{50}, "now", {}, [&] { order.push_back("now"); });
  s.run();
  EXPECT_EQ(order, (std::vector<std::string>{"now", "later"}));
}

TEST(Simulator, EqualTimesRunInSchedulingOrder) {
  Simulator s;
  std::vector<std::string> order;
  s.schedule(100us, "A", {}, [&] { order.push_back("A"); });
  s.schedule(100us, "B", {}, [&] { order.push_back("B"); });
  auto trace = s.run();
  EXPECT_EQ(order, (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_LT(trace[0].seq, trace[1].seq);
}

TEST(Simulator, SchedulingInThePastThrows) {
  Simulator s(Micros{10});
  EXPECT_THROW(s.schedule(Micros{9}, "late"), SchedulingInPast);
  s.schedule(20us, "x");
  s.run();
  EXPECT_THROW(s.schedule(Micros{19}, "late"), SchedulingInPast);
}

TEST(Simulator, EmptyQueueGivesEmptyTrace) {
  Simulator s;
  EXPECT_TRUE(s.run_until(Micros{1'000'000}).empty());
}

TEST(Simulator, RunUntilBoundaryIsInclusive) {
  Simulator s;
  for (int t : {5, 10, 15}) s.schedule(Micros{t}, "e");
  auto trace = s.run_until(10us);
  EXPECT_EQ(trace.size(), 2u);
  EXPECT_EQ(s.now(), 10us);
  EXPECT_EQ(s.pending(), 1u);
  EXPECT_EQ(s.run().size(), 1u);
}

TEST(Simulator, CancelledEventsDoNotRun) {
  Simulator s;
  bool ran = false;
  auto h = s.schedule(5us, "x", {}, [&] { ran = true; });
  EXPECT_TRUE(s.cancel(h));
  EXPECT_FALSE(s.cancel(h));
  EXPECT_TRUE(s.run().empty());
  EXPECT_FALSE(ran);
}

TEST(Simulator, ActionsScheduleFollowUps) {
  Simulator s;
  int count = 0;
  std::function<void()> again = [&] {
    if (++count < 5) s.schedule_in(10us, "tick", {}, again);
  };
  s.schedule(0us, "tick", {}, again);
  auto trace = s.run();
  EXPECT_EQ(count, 5);
  EXPECT_EQ(trace.back().time, 40us);
}

TEST(Simulator, NotesAndAnnotationsLandInTrace) {
  Simulator s;
  s.schedule(3us, "probe", Fields{{"a", 1}}, [&] {
    s.annotate(Fields{{"b", 2}});
    s.note("observed", Fields{{"c", 3}});
  });
  auto trace = s.run();
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace[0].fields["b"], 2);
  EXPECT_EQ(trace[1].kind, "observed");
  EXPECT_EQ(trace[1].time, 3us);
  EXPECT_EQ(to_jsonl(trace[0]), R"({"time_us":3,"seq":0,"kind":"probe","a":1,"b":2})");
}

// Random schedule/cancel mix: causality and conservation.
TEST(SimulatorProperty, CausalityAndConservation) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng("sim-property", seed);
    Simulator s;
    std::set<std::uint64_t> live;
    std::vector<EventHandle> handles;
    for (int i = 0; i < 200; ++i) {
      auto h = s.schedule(Micros{static_cast<long>(rng.next_u64() % 1000)}, "e");
      handles.push_back(h);
      live.insert(h.seq);
    }
    for (auto& h : handles)
      if (rng.uniform() < 0.2 && s.cancel(h)) live.erase(h.seq);
    const Micros t_end{static_cast<long>(rng.next_u64() % 1000)};
    std::set<std::uint64_t> expected;
    for (auto& h : handles)
      if (live.contains(h.seq) && h.time <= t_end) expected.insert(h.seq);
    auto trace = s.run_until(t_end);
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      EXPECT_TRUE(seen.insert(trace[i].seq).second);
      if (i > 0) {
        EXPECT_LE(trace[i - 1].time, trace[i].time);
        if (trace[i - 1].time == trace[i].time) {
          EXPECT_LT(trace[i - 1].seq, trace[i].seq);
        }
      }
    }
    EXPECT_EQ(seen, expected) << "seed " << seed;
  }
}

TEST(Rng, SameLabelAndSeedRepeat) {
  auto a = rng_stream("dirty/smf-1", 42);
  auto b = rng_stream("dirty/smf-1", 42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentLabelsDiffer) {
  auto a = rng_stream("dirty/smf-1", 42);
  auto b = rng_stream("dirty/amf-1", 42);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, DifferentSeedsDiffer) {
  auto a = rng_stream("x", 1);
  auto b = rng_stream("x", 2);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, UniformMeanIsOneHalf) {
  auto r = rng_stream("mean", 7);
  double sum = 0;
  for (int i = 0; i < 100'000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100'000, 0.5, 0.02);
}

TEST(Time, SerializationRoundsUp) {
  EXPECT_EQ(serialization_time(100, 100), Micros{1'000'000});
  EXPECT_EQ(serialization_time(1, 3), Micros{333'334});
  EXPECT_EQ(serialization_time(0, 3), Micros{0});
  EXPECT_EQ(ceil_micros(Nanos{269'500}), Micros{270});
}
