#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nfmig/core/topology.hpp"
#include "nfmig/error.hpp"
#include "nfmig/migration/params.hpp"
#include "nfmig/migration/post_copy.hpp"
#include "nfmig/policy/policy.hpp"

namespace nfmig {

struct DirtyModelSpec {
  enum class Kind { Constant, Bernoulli };
  Kind kind = Kind::Constant;
  double rate_pages_per_s = 0.0;
  double p_per_page_per_ms = 0.0;
};

struct NfDeployment {
  std::string nf_id;
  DirtyModelSpec dirty;
  std::vector<PageAccess> access_trace;
  std::optional<Strategy> strategy_override;
};

struct UeSpec {
  std::string id;
  std::string zone;
};

struct MigrationTrigger {
  std::string id;
  Micros time{0};
  std::string ue_id;
  std::string new_zone;
  std::vector<NfKind> affected_kinds{NfKind::SMF, NfKind::AMF};
  std::optional<Objective> objective;
};

struct Scenario {
  std::string name;
  ValidatedTopology topology;
  std::vector<NfDeployment> deployments;  // same order as topology.nfs()
  std::vector<UeSpec> ues;
  MigrationParams migration_params;
  Objective objective = Objective::MinimizeDowntime;
  std::vector<MigrationTrigger> triggers;
  Micros duration{10'000'000};
  std::uint64_t seed = 0;
  Micros rtt_sample_interval{100'000};

  const NfDeployment& deployment(const std::string& nf_id) const {
    for (const auto& d : deployments)
      if (d.nf_id == nf_id) return d;
    throw DanglingReference("scenario", nf_id);
  }
};

// Defaults for every optional scenario key.
struct ScenarioDefaults {
  static constexpr std::uint64_t page_size = 4096;
  static constexpr double working_set_fraction = 0.2;
  static constexpr double cpu_demand = 1.0;
  static constexpr Micros duration{10'000'000};
  static constexpr Micros rtt_sample_interval{100'000};
  static MigrationParams migration_params() {
    MigrationParams p;
    p.freeze_overhead = Micros{5'000};
    p.restart_overhead = Micros{50'000};
    p.activation_overhead = Micros{1'000};
    p.precopy_stop_threshold = 8;
    p.precopy_max_rounds = 10;
    p.postcopy_fault_deadline = Micros{100'000};
    p.ppm_sync_interval = Micros{100'000};
    p.handover_signal_roundtrips = 1;
    return p;
  }
};

constexpr AvailabilityClass default_availability(NfKind k) {
  switch (k) {
    case NfKind::UPF:
    case NfKind::AMF: return AvailabilityClass::Critical;
    case NfKind::SMF:
    case NfKind::NRF: return AvailabilityClass::High;
    default: return AvailabilityClass::Standard;
  }
}

namespace detail {

using json = nlohmann::json;

// Typed access to one JSON object with the key path used in error messages.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_ + ": expected an object");
  }

  const std::string& path() const noexcept { return path_; }
  std::string at(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }
  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const json& raw(std::string_view key) const { return j_.at(std::string(key)); }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : j_.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ParseError(at(k) + ": unknown key");
  }

  const json& need(std::string_view key) const {
    if (!has(key)) throw ParseError(at(key) + ": required key missing");
    return raw(key);
  }

  std::string str(std::string_view key, std::optional<std::string> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      need(key);
    }
    const json& v = raw(key);
    if (!v.is_string()) throw ParseError(at(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(std::string_view key, bool def) const {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ParseError(at(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::uint64_t u64(std::string_view key, std::optional<std::uint64_t> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      need(key);
    }
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ParseError(at(key) + ": expected a non-negative integer");
    if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) throw ParseError(at(key) + ": must not be negative");
    return v.get<std::uint64_t>();
  }

  Micros micros(std::string_view key, std::optional<Micros> def = std::nullopt) const {
    if (!has(key) && def) return *def;
    const std::uint64_t v = u64(key);
    if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
      throw ParseError(at(key) + ": out of range");
    return Micros{static_cast<std::int64_t>(v)};
  }

  double number(std::string_view key, std::optional<double> def = std::nullopt) const {
    if (!has(key)) {
      if (def) return *def;
      need(key);
    }
    const json& v = raw(key);
    if (!v.is_number()) throw ParseError(at(key) + ": expected a number");
    const double d = v.get<double>();
    if (d < 0.0) throw ParseError(at(key) + ": must not be negative");
    return d;
  }

  const json& array(std::string_view key, bool required = false) const {
    static const json empty = json::array();
    if (!has(key)) {
      if (required) need(key);
      return empty;
    }
    const json& v = raw(key);
    if (!v.is_array()) throw ParseError(at(key) + ": expected an array");
    return v;
  }

  template <typename E, typename Parse>
  E enumeration(std::string_view key, Parse parse, std::optional<E> def = std::nullopt) const {
    if (!has(key) && def) return *def;
    const std::string s = str(key);
    auto e = parse(s);
    if (!e) throw ParseError(at(key) + ": unknown value '" + s + "'");
    return *e;
  }

 private:
  const json& j_;
  std::string path_;
};

inline std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline std::optional<Strategy> parse_strategy(std::string_view s) {
  return parse_enum(s, std::array{Strategy::InterCopy, Strategy::PreCopy, Strategy::PostCopy, Strategy::Parallel,
                                  Strategy::NoMigrationRedeploy});
}

inline DriverTable read_drivers(const Obj& top) {
  DriverTable table;
  if (!top.has("drivers")) return table;
  const json& d = top.raw("drivers");
  if (!d.is_object()) throw ParseError("drivers: expected an object");
  for (const auto& [name, body] : d.items()) {
    const auto kind = parse_driver(name);
    if (!kind) throw ParseError("drivers." + name + ": unknown driver");
    Obj o(body, "drivers." + name);
    o.allow_only({"rtt_inter_host_us", "carries_l2", "isolation"});
    NetworkDriverProfile p = table[*kind];
    p.rtt_inter_host = o.micros("rtt_inter_host_us", p.rtt_inter_host);
    if (p.rtt_inter_host.count() == 0) throw ParseError(o.at("rtt_inter_host_us") + ": must be > 0");
    p.carries_l2 = o.boolean("carries_l2", p.carries_l2);
    p.isolation = o.enumeration<Isolation>("isolation", parse_isolation, p.isolation);
    table.override_profile(p);
  }
  return table;
}

inline MigrationParams read_params(const Obj& top) {
  MigrationParams p = ScenarioDefaults::migration_params();
  if (!top.has("migration_params")) return p;
  Obj o(top.raw("migration_params"), "migration_params");
  o.allow_only({"freeze_overhead_us", "restart_overhead_us", "activation_overhead_us", "precopy_stop_threshold_pages",
                "precopy_max_rounds", "postcopy_fault_deadline_us", "ppm_sync_interval_us",
                "handover_signal_roundtrips"});
  p.freeze_overhead = o.micros("freeze_overhead_us", p.freeze_overhead);
  p.restart_overhead = o.micros("restart_overhead_us", p.restart_overhead);
  p.activation_overhead = o.micros("activation_overhead_us", p.activation_overhead);
  p.precopy_stop_threshold = o.u64("precopy_stop_threshold_pages", p.precopy_stop_threshold);
  p.precopy_max_rounds = static_cast<std::uint32_t>(o.u64("precopy_max_rounds", p.precopy_max_rounds));
  if (p.precopy_max_rounds < 1) throw ParseError(o.at("precopy_max_rounds") + ": must be >= 1");
  p.postcopy_fault_deadline = o.micros("postcopy_fault_deadline_us", p.postcopy_fault_deadline);
  p.ppm_sync_interval = o.micros("ppm_sync_interval_us", p.ppm_sync_interval);
  if (p.ppm_sync_interval.count() == 0) throw ParseError(o.at("ppm_sync_interval_us") + ": must be > 0");
  p.handover_signal_roundtrips = static_cast<std::uint32_t>(o.u64("handover_signal_roundtrips", p.handover_signal_roundtrips));
  return p;
}

inline std::pair<NfInstance, NfDeployment> read_nf(const Obj& o) {
  o.allow_only({"id", "kind", "host", "stateful", "plane", "availability", "cpu_demand", "memory", "access_trace",
                "strategy"});
  NfInstance nf;
  NfDeployment dep;
  nf.id = dep.nf_id = o.str("id");
  nf.kind = o.enumeration<NfKind>("kind", parse_nf_kind);
  nf.host = o.str("host");
  nf.stateful = o.boolean("stateful", default_stateful(nf.kind));
  nf.plane = o.has("plane") ? o.enumeration<Plane>("plane", [](std::string_view s) {
    return parse_enum(s, std::array{Plane::User, Plane::Control});
  })
                            : plane_of(nf.kind);
  nf.availability_class = o.enumeration<AvailabilityClass>("availability", parse_availability, default_availability(nf.kind));
  nf.cpu_demand = o.number("cpu_demand", ScenarioDefaults::cpu_demand);
  if (o.has("memory")) {
    Obj m(o.raw("memory"), o.at("memory"));
    m.allow_only({"pages", "page_size", "working_set_fraction", "working_set", "dirty"});
    const std::uint64_t pages = m.u64("pages");
    const std::uint64_t page_size = m.u64("page_size", ScenarioDefaults::page_size);
    if (page_size == 0) throw ParseError(m.at("page_size") + ": must be > 0");
    if (m.has("working_set")) {
      std::vector<PageId> ws;
      const json& arr = m.array("working_set");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_unsigned()) throw ParseError(idx(m.at("working_set"), i) + ": expected a page id");
        ws.push_back(arr[i].get<PageId>());
        if (ws.back() >= pages) throw ParseError(idx(m.at("working_set"), i) + ": page id beyond image");
      }
      nf.memory = MemoryImage(pages, page_size, std::move(ws));
    } else {
      const double f = m.number("working_set_fraction", ScenarioDefaults::working_set_fraction);
      if (f > 1.0) throw ParseError(m.at("working_set_fraction") + ": must be within [0, 1]");
      nf.memory = MemoryImage::with_working_set_fraction(pages, page_size, f);
    }
    if (m.has("dirty")) {
      Obj d(m.raw("dirty"), m.at("dirty"));
      d.allow_only({"model", "rate_pages_per_s", "p_per_page_per_ms"});
      const std::string model = d.str("model", "constant");
      if (model == "constant") {
        dep.dirty.kind = DirtyModelSpec::Kind::Constant;
        dep.dirty.rate_pages_per_s = d.number("rate_pages_per_s", 0.0);
      } else if (model == "bernoulli") {
        dep.dirty.kind = DirtyModelSpec::Kind::Bernoulli;
        dep.dirty.p_per_page_per_ms = d.number("p_per_page_per_ms");
        if (dep.dirty.p_per_page_per_ms > 1.0) throw ParseError(d.at("p_per_page_per_ms") + ": must be within [0, 1]");
      } else {
        throw ParseError(d.at("model") + ": unknown value '" + model + "' (constant|bernoulli)");
      }
    }
  }
  const json& trace = o.array("access_trace");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const json& e = trace[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw ParseError(idx(o.at("access_trace"), i) + ": expected [offset_us, page]");
    dep.access_trace.push_back(PageAccess{Micros{e[0].get<std::int64_t>()}, e[1].get<PageId>()});
  }
  if (o.has("strategy")) dep.strategy_override = o.enumeration<Strategy>("strategy", parse_strategy);
  return {std::move(nf), std::move(dep)};
}

}  // namespace detail

// Builds a scenario from its JSON document. `origin` prefixes messages.
inline Scenario load_scenario_json(const nlohmann::json& doc, const std::string& origin = "scenario") {
  using detail::idx;
  using detail::Obj;
  Scenario sc;
  std::vector<HostNode> hosts;
  std::vector<Link> links;
  std::vector<NfInstance> nfs;
  std::vector<PduSession> sessions;
  TopologyOptions topo_opts;
  DriverTable drivers;
  try {
    Obj top(doc, "");
    top.allow_only({"name", "seed", "duration_us", "objective", "rtt_sample_interval_us", "intra_host_latency_us",
                    "l2_overlay_enabled", "drivers", "hosts", "links", "nfs", "sessions", "ues", "migration_params",
                    "triggers"});
    sc.name = top.str("name", "unnamed");
    sc.seed = top.u64("seed", 0);
    sc.duration = top.micros("duration_us", ScenarioDefaults::duration);
    sc.objective = top.enumeration<Objective>("objective", parse_objective, Objective::MinimizeDowntime);
    sc.rtt_sample_interval = top.micros("rtt_sample_interval_us", ScenarioDefaults::rtt_sample_interval);
    if (sc.rtt_sample_interval.count() == 0) throw ParseError("rtt_sample_interval_us: must be > 0");
    topo_opts.intra_host_latency = top.micros("intra_host_latency_us", kDefaultIntraHostLatency);
    drivers = detail::read_drivers(top);
    drivers.set_l2_overlay_enabled(top.boolean("l2_overlay_enabled", false));
    sc.migration_params = detail::read_params(top);

    const auto& jh = top.array("hosts", true);
    for (std::size_t i = 0; i < jh.size(); ++i) {
      Obj o(jh[i], idx("hosts", i));
      o.allow_only({"id", "hall", "cpu_capacity", "driver", "access_point"});
      hosts.push_back(HostNode{o.str("id"), o.str("hall"), o.number("cpu_capacity"),
                               o.enumeration<NetworkDriverKind>("driver", parse_driver), o.boolean("access_point", false)});
    }
    const auto& jl = top.array("links");
    for (std::size_t i = 0; i < jl.size(); ++i) {
      Obj o(jl[i], idx("links", i));
      o.allow_only({"a", "b", "bandwidth_Bps", "extra_latency_us"});
      Link l{o.str("a"), o.str("b"), o.u64("bandwidth_Bps"), o.micros("extra_latency_us", Micros{0})};
      if (l.bandwidth == 0) throw ParseError(o.at("bandwidth_Bps") + ": must be > 0");
      links.push_back(std::move(l));
    }
    const auto& jn = top.array("nfs");
    for (std::size_t i = 0; i < jn.size(); ++i) {
      auto [nf, dep] = detail::read_nf(Obj(jn[i], idx("nfs", i)));
      nfs.push_back(std::move(nf));
      sc.deployments.push_back(std::move(dep));
    }
    const auto& js = top.array("sessions");
    for (std::size_t i = 0; i < js.size(); ++i) {
      Obj o(js[i], idx("sessions", i));
      o.allow_only({"id", "type", "ue", "anchor_upf"});
      sessions.push_back(PduSession{o.str("id"), o.enumeration<SessionType>("type", parse_session_type, SessionType::Ip),
                                    o.str("ue"), o.str("anchor_upf")});
    }
    const auto& ju = top.array("ues");
    for (std::size_t i = 0; i < ju.size(); ++i) {
      Obj o(ju[i], idx("ues", i));
      o.allow_only({"id", "zone"});
      sc.ues.push_back(UeSpec{o.str("id"), o.str("zone")});
    }
    const auto& jt = top.array("triggers");
    for (std::size_t i = 0; i < jt.size(); ++i) {
      Obj o(jt[i], idx("triggers", i));
      o.allow_only({"id", "time_us", "ue", "new_zone", "affected_kinds", "objective"});
      MigrationTrigger t;
      t.id = o.str("id", "trigger-" + std::to_string(i));
      t.time = o.micros("time_us");
      t.ue_id = o.str("ue");
      t.new_zone = o.str("new_zone");
      if (o.has("affected_kinds")) {
        t.affected_kinds.clear();
        const auto& ks = o.array("affected_kinds");
        for (std::size_t k = 0; k < ks.size(); ++k) {
          auto kind = ks[k].is_string() ? parse_nf_kind(ks[k].get<std::string>()) : std::nullopt;
          if (!kind) throw ParseError(idx(o.at("affected_kinds"), k) + ": expected an NF kind");
          t.affected_kinds.push_back(*kind);
        }
      }
      if (o.has("objective")) t.objective = o.enumeration<Objective>("objective", parse_objective);
      sc.triggers.push_back(std::move(t));
    }
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  }

  try {
    sc.migration_params.validate();
    sc.topology = validate_topology(std::move(hosts), std::move(links), std::move(nfs), std::move(sessions),
                                    std::move(drivers), topo_opts);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(origin + ": " + e.what());
  } catch (const std::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  }

  auto invalid = [&](const std::string& what) { throw ValidationError(origin + ": " + what); };
  std::set<std::string> halls;
  for (const auto& h : sc.topology.hosts()) halls.insert(h.hall);
  std::set<std::string> ue_ids;
  for (const auto& u : sc.ues) {
    if (!ue_ids.insert(u.id).second) invalid("duplicate UE id '" + u.id + "'");
    if (!halls.contains(u.zone)) invalid("UE '" + u.id + "' is in unknown zone '" + u.zone + "'");
  }
  for (const auto& s : sc.topology.sessions())
    if (!ue_ids.contains(s.ue_id)) invalid("session '" + s.id + "' references unknown UE '" + s.ue_id + "'");
  std::set<std::string> trigger_ids;
  for (std::size_t i = 0; i < sc.triggers.size(); ++i) {
    const auto& t = sc.triggers[i];
    if (!trigger_ids.insert(t.id).second) invalid("duplicate trigger id '" + t.id + "'");
    if (i > 0 && t.time < sc.triggers[i - 1].time) invalid("triggers must be sorted by time ('" + t.id + "')");
    if (t.time > sc.duration) invalid("trigger '" + t.id + "' is after the scenario duration");
    if (!ue_ids.contains(t.ue_id)) invalid("trigger '" + t.id + "' references unknown UE '" + t.ue_id + "'");
    if (!halls.contains(t.new_zone)) invalid("trigger '" + t.id + "' targets unknown zone '" + t.new_zone + "'");
  }
  for (std::size_t i = 0; i < sc.deployments.size(); ++i) {
    const auto& dep = sc.deployments[i];
    const auto& nf = sc.topology.nfs()[i];
    if (dep.strategy_override) {
      const bool copies = copies_state(*dep.strategy_override);
      if (copies != nf.stateful)
        invalid("NF '" + nf.id + "' cannot use strategy " + std::string(to_string(*dep.strategy_override)));
    }
    for (const auto& a : dep.access_trace)
      if (!nf.memory || a.page >= nf.memory->num_pages())
        invalid("NF '" + nf.id + "' access trace touches page " + std::to_string(a.page) + " outside its image");
    for (std::size_t k = 1; k < dep.access_trace.size(); ++k)
      if (dep.access_trace[k].offset < dep.access_trace[k - 1].offset)
        invalid("NF '" + nf.id + "' access trace offsets must be non-decreasing");
  }
  return sc;
}

inline nlohmann::json read_scenario_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError(path.string() + ":" + std::to_string(line) + ": syntax error: " + e.what());
  }
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return load_scenario_json(read_scenario_document(path), path.string());
}

}  // namespace nfmig
