#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "nfmig/core/types.hpp"
#include "nfmig/error.hpp"

namespace nfmig {

inline constexpr Micros kDefaultIntraHostLatency{25};

// Bandwidth-delay abstraction of the channel a migration uses.
struct TransferPath {
  std::uint64_t bandwidth = std::numeric_limits<std::uint64_t>::max();  // bytes per second
  Nanos one_way{0};

  // One-way latency as it lands on the integer clock.
  Micros latency() const { return ceil_micros(one_way); }
  Micros round_trip() const { return ceil_micros(2 * one_way); }
  Micros serialization(std::uint64_t bytes) const { return serialization_time(bytes, bandwidth); }

  // ceil(k * page_size * 1e6 / B) + L; an empty batch costs nothing.
  Micros batch_time(std::uint64_t pages, std::uint64_t page_size) const {
    if (pages == 0) return Micros{0};
    return serialization(pages * page_size) + latency();
  }
};

struct TopologyOptions {
  Micros intra_host_latency = kDefaultIntraHostLatency;
};

// Reference-checked, invariant-checked topology. Immutable; relocated()
// returns a new value.
class ValidatedTopology {
 public:
  const std::vector<HostNode>& hosts() const noexcept { return hosts_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  const std::vector<NfInstance>& nfs() const noexcept { return nfs_; }
  const std::vector<PduSession>& sessions() const noexcept { return sessions_; }
  const DriverTable& drivers() const noexcept { return drivers_; }
  Micros intra_host_latency() const noexcept { return options_.intra_host_latency; }

  const HostNode& host(const std::string& id) const {
    auto it = host_index_.find(id);
    if (it == host_index_.end()) throw DanglingReference("topology", id);
    return hosts_[it->second];
  }
  bool has_host(const std::string& id) const { return host_index_.contains(id); }

  const NfInstance& nf(const std::string& id) const {
    for (const auto& n : nfs_)
      if (n.id == id) return n;
    throw DanglingReference("topology", id);
  }

  const NetworkDriverProfile& profile_of(const std::string& host_id) const {
    return drivers_[host(host_id).attached_driver];
  }

  bool connected(const std::string& a, const std::string& b) const { return route(a, b).has_value(); }

  // RTT/2 of the slower endpoint driver plus extra latency along the route;
  // intra-host latency when a == b.
  Nanos one_way_latency(const std::string& a, const std::string& b) const {
    return transfer_path(a, b).one_way;
  }

  Nanos round_trip(const std::string& a, const std::string& b) const { return 2 * one_way_latency(a, b); }

  bool carries_l2_path(const std::string& a, const std::string& b) const {
    if (a == b) {
      host(a);
      return true;
    }
    if (!connected(a, b)) throw NoPath(a, b);
    return drivers_.carries_l2(host(a).attached_driver) && drivers_.carries_l2(host(b).attached_driver);
  }

  TransferPath transfer_path(const std::string& a, const std::string& b) const {
    const HostNode& ha = host(a);
    const HostNode& hb = host(b);
    if (a == b) return TransferPath{std::numeric_limits<std::uint64_t>::max(), options_.intra_host_latency};
    auto r = route(a, b);
    if (!r) throw NoPath(a, b);
    const Micros rtt = std::max(drivers_[ha.attached_driver].rtt_inter_host, drivers_[hb.attached_driver].rtt_inter_host);
    return TransferPath{r->bandwidth, Nanos{rtt} / 2 + Nanos{r->extra}};
  }

  // Sum of cpu_demand of NFs placed on host, optionally ignoring one NF.
  double host_load(const std::string& host_id, const std::string& excluding_nf = {}) const {
    double load = 0.0;
    for (const auto& n : nfs_)
      if (n.host == host_id && n.id != excluding_nf) load += n.cpu_demand;
    return load;
  }

  std::vector<const HostNode*> hosts_in_hall(const std::string& hall) const {
    std::vector<const HostNode*> out;
    for (const auto& h : hosts_)
      if (h.hall == hall) out.push_back(&h);
    std::sort(out.begin(), out.end(), [](auto* x, auto* y) { return x->id < y->id; });
    return out;
  }

  // Host through which UEs in a hall reach the network: the lowest-id host
  // flagged access_point, else the lowest-id host in the hall.
  const HostNode* access_host(const std::string& hall) const {
    auto in_hall = hosts_in_hall(hall);
    for (auto* h : in_hall)
      if (h->access_point) return h;
    return in_hall.empty() ? nullptr : in_hall.front();
  }

  ValidatedTopology relocated(const std::string& nf_id, const std::string& host_id) const {
    host(host_id);
    ValidatedTopology copy = *this;
    for (auto& n : copy.nfs_)
      if (n.id == nf_id) {
        n.host = host_id;
        return copy;
      }
    throw DanglingReference("relocation", nf_id);
  }

 private:
  friend ValidatedTopology validate_topology(std::vector<HostNode>, std::vector<Link>, std::vector<NfInstance>,
                                             std::vector<PduSession>, DriverTable, TopologyOptions);

  struct Route {
    Micros extra{0};
    std::uint64_t bandwidth = 0;
  };

  // Minimum extra-latency route; ties go to fewer hops, then to the lower
  // host index, so the result is deterministic.
  std::optional<Route> route(const std::string& a, const std::string& b) const {
    host(a);
    host(b);
    const std::size_t src = host_index_.at(a);
    const std::size_t dst = host_index_.at(b);
    using Key = std::tuple<std::int64_t, std::size_t, std::size_t>;  // extra, hops, node
    std::vector<std::optional<Key>> best(hosts_.size());
    std::vector<std::uint64_t> bw(hosts_.size(), 0);
    std::set<Key> frontier;
    best[src] = Key{0, 0, src};
    bw[src] = std::numeric_limits<std::uint64_t>::max();
    frontier.insert(*best[src]);
    while (!frontier.empty()) {
      auto [d, hops, u] = *frontier.begin();
      frontier.erase(frontier.begin());
      if (u == dst) return Route{Micros{d}, bw[u]};
      for (const auto& [v, li] : adjacency_[u]) {
        const Link& l = links_[li];
        Key cand{d + l.extra_latency.count(), hops + 1, v};
        if (!best[v] || cand < *best[v]) {
          if (best[v]) frontier.erase(*best[v]);
          best[v] = cand;
          bw[v] = std::min(bw[u], l.bandwidth);
          frontier.insert(cand);
        }
      }
    }
    return std::nullopt;
  }

  std::vector<HostNode> hosts_;
  std::vector<Link> links_;
  std::vector<NfInstance> nfs_;
  std::vector<PduSession> sessions_;
  DriverTable drivers_;
  TopologyOptions options_;
  std::unordered_map<std::string, std::size_t> host_index_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;  // (neighbor, link index)
};

// Pairs of NF kinds that exchange messages (N4, N11, N8, N10, N12, N13, UDM-UDR,
// and every control-plane NF with the NRF).
inline bool nf_kinds_interact(NfKind x, NfKind y) {
  auto is = [&](NfKind p, NfKind q) { return (x == p && y == q) || (x == q && y == p); };
  if (is(NfKind::SMF, NfKind::UPF) || is(NfKind::AMF, NfKind::SMF) || is(NfKind::AMF, NfKind::UDM) ||
      is(NfKind::SMF, NfKind::UDM) || is(NfKind::AMF, NfKind::AUSF) || is(NfKind::AUSF, NfKind::UDM) ||
      is(NfKind::UDM, NfKind::UDR))
    return true;
  if (x == y) return false;
  return (x == NfKind::NRF && plane_of(y) == Plane::Control) || (y == NfKind::NRF && plane_of(x) == Plane::Control);
}

// Statefulness the model fixes per kind; nullopt where it is configurable.
constexpr std::optional<bool> required_statefulness(NfKind k) {
  switch (k) {
    case NfKind::UPF: return false;
    case NfKind::UDM: return std::nullopt;
    default: return true;
  }
}

inline void check_nf_invariants(const NfInstance& nf) {
  const std::string who = std::string(to_string(nf.kind)) + " '" + nf.id + "'";
  if (nf.plane != plane_of(nf.kind))
    throw InvariantViolation(who, "plane must be " + std::string(to_string(plane_of(nf.kind))));
  if (auto req = required_statefulness(nf.kind); req && *req != nf.stateful)
    throw InvariantViolation(who, *req ? "stateful" : "stateless");
  if (nf.stateful != nf.memory.has_value())
    throw InvariantViolation(who, nf.stateful ? "stateful NF needs a memory image" : "stateless NF has no memory image");
  if (!(nf.cpu_demand >= 0.0)) throw InvariantViolation(who, "cpu_demand must be >= 0");
}

inline ValidatedTopology validate_topology(std::vector<HostNode> hosts, std::vector<Link> links,
                                           std::vector<NfInstance> nfs, std::vector<PduSession> sessions = {},
                                           DriverTable drivers = {}, TopologyOptions options = {}) {
  if (options.intra_host_latency.count() < 0)
    throw InvariantViolation("topology", "intra_host_latency must be >= 0");
  ValidatedTopology t;
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    const HostNode& h = hosts[i];
    if (!t.host_index_.emplace(h.id, i).second) throw DuplicateId(h.id);
    if (!(h.cpu_capacity >= 0.0)) throw InvariantViolation("host '" + h.id + "'", "cpu_capacity must be >= 0");
  }
  t.adjacency_.resize(hosts.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    const std::string name = "link " + l.a + "-" + l.b;
    for (const auto* end : {&l.a, &l.b})
      if (!t.host_index_.contains(*end)) throw DanglingReference(name, *end);
    if (l.a == l.b) throw InvariantViolation(name, "endpoints must be distinct");
    if (l.bandwidth == 0) throw InvariantViolation(name, "bandwidth must be > 0");
    if (l.extra_latency.count() < 0) throw InvariantViolation(name, "extra_latency must be >= 0");
    t.adjacency_[t.host_index_[l.a]].emplace_back(t.host_index_[l.b], i);
    t.adjacency_[t.host_index_[l.b]].emplace_back(t.host_index_[l.a], i);
  }
  std::set<std::string> nf_ids;
  for (const auto& nf : nfs) {
    if (!nf_ids.insert(nf.id).second) throw DuplicateId(nf.id);
    if (!t.host_index_.contains(nf.host)) throw DanglingReference(nf.id, nf.host);
    check_nf_invariants(nf);
  }
  std::set<std::string> session_ids;
  for (const auto& s : sessions) {
    if (!session_ids.insert(s.id).second) throw DuplicateId(s.id);
    auto it = std::find_if(nfs.begin(), nfs.end(), [&](const NfInstance& n) { return n.id == s.anchor_upf; });
    if (it == nfs.end()) throw DanglingReference(s.id, s.anchor_upf);
    if (it->kind != NfKind::UPF) throw InvariantViolation("session '" + s.id + "'", "anchor must be a UPF");
  }
  t.hosts_ = std::move(hosts);
  t.links_ = std::move(links);
  t.drivers_ = std::move(drivers);
  t.options_ = options;
  for (std::size_t i = 0; i < nfs.size(); ++i)
    for (std::size_t j = i + 1; j < nfs.size(); ++j)
      if (nf_kinds_interact(nfs[i].kind, nfs[j].kind) && nfs[i].host != nfs[j].host &&
          !t.connected(nfs[i].host, nfs[j].host))
        throw InvariantViolation(nfs[i].id + "<->" + nfs[j].id,
                                 "hosts '" + nfs[i].host + "' and '" + nfs[j].host + "' are not connected");
  t.nfs_ = std::move(nfs);
  t.sessions_ = std::move(sessions);
  return t;
}

// Free-function forms over a validated topology.
inline Nanos one_way_latency(const ValidatedTopology& t, const std::string& a, const std::string& b) {
  return t.one_way_latency(a, b);
}

inline bool carries_l2_path(const ValidatedTopology& t, const std::string& a, const std::string& b) {
  return t.carries_l2_path(a, b);
}

}  // namespace nfmig
