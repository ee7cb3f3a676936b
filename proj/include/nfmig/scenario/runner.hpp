#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfmig/migration/engine.hpp"
#include "nfmig/policy/policy.hpp"
#include "nfmig/scenario/scenario.hpp"
#include "nfmig/sim/rng.hpp"
#include "nfmig/sim/simulator.hpp"

namespace nfmig {

struct MigrationRecord {
  std::string trigger_id;
  std::string nf_id;
  NfKind kind = NfKind::UPF;
  std::string source_host;
  std::string target_host;  // empty when no feasible host was found
  Micros started{0};
  Micros switched{0};  // NF serves from the target from here on
  MigrationReport report;
};

struct RttSample {
  Micros time{0};
  Micros rtt{0};  // -1 when the UE has no path to its anchor
};

struct KindTotals {
  std::uint64_t migrations = 0;
  std::uint64_t failed = 0;
  Micros downtime{0};
  Micros migration_time{0};
  std::uint64_t bytes = 0;
  std::uint64_t sync_bytes = 0;
  Micros stall{0};
};

struct MetricsBundle {
  std::vector<MigrationRecord> reports;
  std::vector<RttSample> user_plane_rtt;
  std::map<NfKind, KindTotals> totals;
  sim::EventTrace trace;
};

inline std::map<NfKind, KindTotals> aggregate(const std::vector<MigrationRecord>& reports) {
  std::map<NfKind, KindTotals> out;
  for (const auto& r : reports) {
    KindTotals& t = out[r.kind];
    ++t.migrations;
    t.failed += r.report.success ? 0 : 1;
    t.downtime += r.report.downtime;
    t.migration_time += r.report.migration_time;
    t.bytes += r.report.bytes_transferred;
    t.sync_bytes += r.report.sync_bytes;
    t.stall += r.report.stall_time;
  }
  return out;
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<Objective> objective;
};

namespace detail {

inline DirtyProcess make_dirty_process(const DirtyModelSpec& spec, const std::string& nf_id, std::uint64_t seed) {
  if (spec.kind == DirtyModelSpec::Kind::Bernoulli) return Bernoulli(spec.p_per_page_per_ms, "dirty/" + nf_id, seed);
  return ConstantRate(spec.rate_pages_per_s);
}

// Executes one scenario: triggers move UEs between halls, the policy picks a
// strategy per affected NF, the migration engine runs it, and the UE's
// user-plane RTT is sampled at a fixed interval.
class ScenarioRun {
 public:
  ScenarioRun(const Scenario& sc, const RunOptions& opts)
      : sc_(sc),
        seed_(opts.seed.value_or(sc.seed)),
        objective_override_(opts.objective),
        placement_(sc.topology) {
    for (std::size_t i = 0; i < sc.topology.nfs().size(); ++i) {
      const NfInstance& nf = sc.topology.nfs()[i];
      nfs_.emplace(nf.id, nf);
      active_host_[nf.id] = nf.host;
      dirty_.emplace(nf.id, make_dirty_process(sc.deployments[i].dirty, nf.id, seed_));
    }
    for (const auto& u : sc.ues) ue_zone_[u.id] = u.zone;
  }

  MetricsBundle run() {
    // Triggers go first so a sample taken at a trigger's instant sees it.
    for (const auto& trig : sc_.triggers)
      main_.schedule(trig.time, "trigger",
                     sim::Fields{{"trigger", trig.id}, {"ue", trig.ue_id}, {"new_zone", trig.new_zone}},
                     [this, &trig] { on_trigger(trig); });
    for (Micros t{0}; t <= sc_.duration; t += sc_.rtt_sample_interval)
      main_.schedule(t, "rtt-sample", sim::Fields::object(), [this] { sample_rtt(); });
    log_ = main_.run_until(sc_.duration);
    log_.insert(log_.end(), std::make_move_iterator(sub_.begin()), std::make_move_iterator(sub_.end()));

    // One time-ordered trace: migration sub-runs interleave with the main
    // timeline; ties keep the order records were produced in.
    std::stable_sort(log_.begin(), log_.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
    for (std::size_t i = 0; i < log_.size(); ++i) log_[i].seq = i;

    MetricsBundle out;
    out.reports = std::move(reports_);
    out.user_plane_rtt = std::move(rtt_);
    out.totals = aggregate(out.reports);
    out.trace = std::move(log_);
    return out;
  }

 private:
  void note(std::string kind, sim::Fields f) { main_.note(std::move(kind), std::move(f)); }

  const PduSession* primary_session() const {
    return sc_.topology.sessions().empty() ? nullptr : &sc_.topology.sessions().front();
  }

  void sample_rtt() {
    const PduSession* s = primary_session();
    if (!s) return;
    apply_relocations(main_.now());
    const HostNode* access = sc_.topology.access_host(ue_zone_.at(s->ue_id));
    const std::string& anchor = active_host_.at(s->anchor_upf);
    Micros rtt{-1};
    if (access && sc_.topology.connected(access->id, anchor))
      rtt = ceil_micros(sc_.topology.round_trip(access->id, anchor));
    rtt_.push_back(RttSample{main_.now(), rtt});
    main_.annotate(sim::Fields{{"ue", s->ue_id}, {"anchor", anchor}, {"rtt_us", rtt.count()}});
  }

  // An NF serves from its new host from the switch instant on, including
  // samples that were queued earlier for that same instant.
  void apply_relocations(Micros now) {
    while (!relocations_.empty() && relocations_.begin()->first <= now) {
      const auto& [nf, host] = relocations_.begin()->second;
      active_host_[nf] = host;
      relocations_.erase(relocations_.begin());
    }
  }

  std::vector<std::string> affected_nfs(const MigrationTrigger& trig) const {
    std::vector<std::string> out;
    for (const auto& nf : sc_.topology.nfs()) {
      if (std::find(trig.affected_kinds.begin(), trig.affected_kinds.end(), nf.kind) == trig.affected_kinds.end())
        continue;
      if (nf.kind == NfKind::UPF) {
        const auto& ss = sc_.topology.sessions();
        const bool anchors_ue = std::any_of(ss.begin(), ss.end(), [&](const PduSession& s) {
          return s.ue_id == trig.ue_id && s.anchor_upf == nf.id;
        });
        if (!anchors_ue) continue;
      }
      out.push_back(nf.id);
    }
    return out;
  }

  // Feasible host in the zone closest to the zone's access host; ties by id.
  const HostNode* choose_target(const NfInstance& nf, const std::string& source, const std::string& zone) const {
    const HostNode* access = placement_.access_host(zone);
    const HostNode* best = nullptr;
    Nanos best_latency{0};
    for (const HostNode* h : placement_.hosts_in_hall(zone)) {
      if (h->id == source || !placement_.connected(source, h->id)) continue;
      if (!check_placement(nf, *h, placement_.sessions(), placement_).empty()) continue;
      if (!placement_.connected(h->id, access->id)) continue;
      const Nanos lat = placement_.one_way_latency(h->id, access->id);
      if (!best || lat < best_latency) {
        best = h;
        best_latency = lat;
      }
    }
    return best;
  }

  void on_trigger(const MigrationTrigger& trig) {
    const Micros now = main_.now();
    ue_zone_[trig.ue_id] = trig.new_zone;
    const Objective objective = objective_override_.value_or(trig.objective.value_or(sc_.objective));
    for (const std::string& id : affected_nfs(trig)) migrate_one(trig, id, objective, now);
  }

  void migrate_one(const MigrationTrigger& trig, const std::string& nf_id, Objective objective, Micros now) {
    NfInstance& nf = nfs_.at(nf_id);
    const std::string source = placement_.nf(nf_id).host;
    auto tagged = [&](sim::Fields f) {
      f["trigger"] = trig.id;
      return f;
    };
    if (placement_.host(source).hall == trig.new_zone) {
      note("already-in-zone", tagged({{"nf", nf_id}, {"host", source}}));
      return;
    }

    const NfDeployment& dep = sc_.deployment(nf_id);
    StrategyDecision decision = dep.strategy_override
                                    ? StrategyDecision{*dep.strategy_override, {*dep.strategy_override}, "override"}
                                    : select_strategy(nf.kind, nf.stateful, objective);
    sim::Fields cands = sim::Fields::array();
    for (Strategy s : decision.candidates) cands.push_back(std::string(to_string(s)));
    note("strategy-decision",
         tagged({{"nf", nf_id},
                 {"objective", std::string(to_string(objective))},
                 {"chosen", std::string(to_string(decision.chosen))},
                 {"candidates", cands},
                 {"rationale", decision.rationale}}));

    MigrationRecord rec{trig.id, nf_id, nf.kind, source, "", now, now, {}};
    auto fail = [&](const std::string& why) {
      rec.report = MigrationReport::failed(decision.chosen, why);
      note("migration-failed", tagged({{"nf", nf_id}, {"reason", why}}));
      reports_.push_back(rec);
    };

    if (auto it = busy_until_.find(nf_id); it != busy_until_.end() && it->second > now) {
      fail("migration in progress");
      return;
    }
    const HostNode* target = choose_target(nf, source, trig.new_zone);
    if (!target) {
      fail("NoFeasibleHost(" + nf_id + ", " + trig.new_zone + ")");
      return;
    }
    rec.target_host = target->id;
    note("placement", tagged({{"nf", nf_id}, {"source", source}, {"target", target->id}}));

    const TransferPath path = placement_.transfer_path(source, target->id);
    const MigrationParams& params = sc_.migration_params;
    MigrationResult result;
    Micros switched = now;
    try {
      switch (decision.chosen) {
        case Strategy::NoMigrationRedeploy:
          result = redeploy_stateless(nf, *target, params, now);
          switched = now + result.report.migration_time;
          break;
        case Strategy::InterCopy:
          result = migrate_inter_copy(nf, *target, path, params, now);
          switched = now + result.report.migration_time;
          break;
        case Strategy::PreCopy:
          result = migrate_pre_copy(nf, *target, path, params, dirty_.at(nf_id), now);
          switched = now + result.report.migration_time;
          break;
        case Strategy::PostCopy:
          result = migrate_post_copy(nf, *target, path, params, dep.access_trace, now);
          switched = now + result.report.downtime;
          break;
        case Strategy::Parallel: {
          const double free = target->cpu_capacity - placement_.host_load(target->id, nf_id);
          auto replica = start_replica_sync(nf, *target, free, path, params, dirty_.at(nf_id), now);
          replica->advance_to(now + path.batch_time(nf.memory->num_pages(), nf.memory->page_size()));
          // Hand over one sync interval after the replica came up.
          replica->advance_to(*replica->synced_at() + params.ppm_sync_interval);
          const Micros handover = replica->now();
          result = migrate_parallel(*replica, params);
          switched = handover + result.report.downtime;
          break;
        }
      }
    } catch (const Error& e) {
      fail(e.what());
      return;
    }
    for (auto& r : result.trace) {
      r.fields["trigger"] = trig.id;
      sub_.push_back(std::move(r));
    }
    rec.report = result.report;
    rec.switched = switched;
    reports_.push_back(rec);
    note("migration-report",
         tagged({{"nf", nf_id},
                 {"strategy", std::string(to_string(result.report.strategy))},
                 {"downtime_us", result.report.downtime.count()},
                 {"migration_time_us", result.report.migration_time.count()},
                 {"bytes", result.report.bytes_transferred},
                 {"sync_bytes", result.report.sync_bytes},
                 {"outcome", result.report.outcome()}}));
    if (!result.report.success) return;

    const std::string dest = target->id;
    placement_ = placement_.relocated(nf_id, dest);
    busy_until_[nf_id] = switched;
    relocations_.emplace(switched, std::pair{nf_id, dest});
    main_.schedule(switched, "nf-relocated", sim::Fields{{"nf", nf_id}, {"host", dest}, {"trigger", trig.id}},
                   [this] { apply_relocations(main_.now()); });
  }

  const Scenario& sc_;
  std::uint64_t seed_;
  std::optional<Objective> objective_override_;
  ValidatedTopology placement_;
  std::map<std::string, NfInstance> nfs_;
  std::map<std::string, DirtyProcess> dirty_;
  std::map<std::string, std::string> active_host_;
  std::map<std::string, std::string> ue_zone_;
  std::map<std::string, Micros> busy_until_;
  std::multimap<Micros, std::pair<std::string, std::string>> relocations_;  // switch time -> (nf, host)
  sim::Simulator main_;
  sim::EventTrace log_;
  sim::EventTrace sub_;  // records of the migration sub-runs
  std::vector<MigrationRecord> reports_;
  std::vector<RttSample> rtt_;
};

}  // namespace detail

inline MetricsBundle run_scenario(const Scenario& scenario, const RunOptions& options = {}) {
  return detail::ScenarioRun(scenario, options).run();
}

}  // namespace nfmig
