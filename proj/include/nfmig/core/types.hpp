#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "nfmig/memory/memory_image.hpp"
#include "nfmig/sim/time.hpp"

namespace nfmig {

enum class NetworkDriverKind { Host, Bridge, Macvlan, IpvlanL2, IpvlanL3, Overlay };
enum class Isolation { None, Medium, High };
enum class NfKind { UPF, SMF, AMF, AUSF, UDM, UDR, NRF };
enum class Plane { User, Control };
enum class AvailabilityClass { Standard, High, Critical };
enum class SessionType { Ip, Ethernet };

inline constexpr std::array kAllDrivers{NetworkDriverKind::Host,     NetworkDriverKind::Bridge,
                                        NetworkDriverKind::Macvlan,  NetworkDriverKind::IpvlanL2,
                                        NetworkDriverKind::IpvlanL3, NetworkDriverKind::Overlay};
inline constexpr std::array kAllNfKinds{NfKind::UPF, NfKind::SMF, NfKind::AMF, NfKind::AUSF,
                                        NfKind::UDM, NfKind::UDR, NfKind::NRF};

constexpr std::string_view to_string(NetworkDriverKind k) {
  switch (k) {
    case NetworkDriverKind::Host: return "Host";
    case NetworkDriverKind::Bridge: return "Bridge";
    case NetworkDriverKind::Macvlan: return "Macvlan";
    case NetworkDriverKind::IpvlanL2: return "IpvlanL2";
    case NetworkDriverKind::IpvlanL3: return "IpvlanL3";
    case NetworkDriverKind::Overlay: return "Overlay";
  }
  return "?";
}

constexpr std::string_view to_string(Isolation i) {
  switch (i) {
    case Isolation::None: return "None";
    case Isolation::Medium: return "Medium";
    case Isolation::High: return "High";
  }
  return "?";
}

constexpr std::string_view to_string(NfKind k) {
  switch (k) {
    case NfKind::UPF: return "UPF";
    case NfKind::SMF: return "SMF";
    case NfKind::AMF: return "AMF";
    case NfKind::AUSF: return "AUSF";
    case NfKind::UDM: return "UDM";
    case NfKind::UDR: return "UDR";
    case NfKind::NRF: return "NRF";
  }
  return "?";
}

constexpr std::string_view to_string(Plane p) { return p == Plane::User ? "User" : "Control"; }

constexpr std::string_view to_string(AvailabilityClass a) {
  switch (a) {
    case AvailabilityClass::Standard: return "Standard";
    case AvailabilityClass::High: return "High";
    case AvailabilityClass::Critical: return "Critical";
  }
  return "?";
}

constexpr std::string_view to_string(SessionType t) { return t == SessionType::Ip ? "Ip" : "Ethernet"; }

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::array<E, N>& all) {
  for (E e : all)
    if (to_string(e) == s) return e;
  return std::nullopt;
}

inline std::optional<NetworkDriverKind> parse_driver(std::string_view s) { return parse_enum(s, kAllDrivers); }
inline std::optional<NfKind> parse_nf_kind(std::string_view s) { return parse_enum(s, kAllNfKinds); }
inline std::optional<Isolation> parse_isolation(std::string_view s) {
  return parse_enum(s, std::array{Isolation::None, Isolation::Medium, Isolation::High});
}
inline std::optional<AvailabilityClass> parse_availability(std::string_view s) {
  return parse_enum(s, std::array{AvailabilityClass::Standard, AvailabilityClass::High, AvailabilityClass::Critical});
}
inline std::optional<SessionType> parse_session_type(std::string_view s) {
  return parse_enum(s, std::array{SessionType::Ip, SessionType::Ethernet});
}

struct NetworkDriverProfile {
  NetworkDriverKind kind = NetworkDriverKind::Host;
  Micros rtt_inter_host{0};
  bool carries_l2 = false;
  Isolation isolation = Isolation::None;

  bool operator==(const NetworkDriverProfile&) const = default;
};

// Container-to-container RTT measured across two hosts, L2 capability and
// network isolation of the standard Docker drivers.
inline constexpr std::array<NetworkDriverProfile, 6> kBuiltinDriverProfiles{{
    {NetworkDriverKind::Host, Micros{522}, true, Isolation::None},
    {NetworkDriverKind::Bridge, Micros{600}, true, Isolation::Medium},
    {NetworkDriverKind::Macvlan, Micros{520}, true, Isolation::Medium},
    {NetworkDriverKind::IpvlanL2, Micros{520}, false, Isolation::Medium},
    {NetworkDriverKind::IpvlanL3, Micros{539}, false, Isolation::Medium},
    {NetworkDriverKind::Overlay, Micros{656}, false, Isolation::High},
}};

// Driver profiles in effect for one topology, with per-scenario overrides.
class DriverTable {
 public:
  DriverTable() : profiles_(kBuiltinDriverProfiles) {}

  const NetworkDriverProfile& operator[](NetworkDriverKind k) const { return profiles_[index(k)]; }

  void override_profile(const NetworkDriverProfile& p) {
    if (p.rtt_inter_host.count() <= 0)
      throw std::invalid_argument("driver " + std::string(to_string(p.kind)) + ": rtt_inter_host must be > 0");
    profiles_[index(p.kind)] = p;
  }

  // L2 overlays (e.g. multus on K8s) carry Ethernet frames; Swarm's overlay
  // does not. Off by default.
  void set_l2_overlay_enabled(bool on) { l2_overlay_ = on; }
  bool l2_overlay_enabled() const noexcept { return l2_overlay_; }

  bool carries_l2(NetworkDriverKind k) const {
    if (k == NetworkDriverKind::Overlay && l2_overlay_) return true;
    return (*this)[k].carries_l2;
  }

 private:
  static std::size_t index(NetworkDriverKind k) { return static_cast<std::size_t>(k); }

  std::array<NetworkDriverProfile, 6> profiles_;
  bool l2_overlay_ = false;
};

struct HostNode {
  std::string id;
  std::string hall;
  double cpu_capacity = 0.0;
  NetworkDriverKind attached_driver = NetworkDriverKind::Host;
  // UEs in this hall attach through the lowest-id access point host.
  bool access_point = false;
};

struct Link {
  std::string a;
  std::string b;
  std::uint64_t bandwidth = 0;  // bytes per second
  Micros extra_latency{0};
};

constexpr Plane plane_of(NfKind k) { return k == NfKind::UPF ? Plane::User : Plane::Control; }

struct NfInstance {
  std::string id;
  NfKind kind = NfKind::UPF;
  bool stateful = false;
  Plane plane = Plane::User;
  std::optional<MemoryImage> memory;  // present iff stateful
  std::string host;
  AvailabilityClass availability_class = AvailabilityClass::Standard;
  double cpu_demand = 1.0;
};

struct PduSession {
  std::string id;
  SessionType session_type = SessionType::Ip;
  std::string ue_id;
  std::string anchor_upf;
};

}  // namespace nfmig
