#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nfmig/nfmig.hpp>

namespace nfmig::test {

inline NfInstance stateful_nf(NfKind kind, std::uint64_t pages, std::uint64_t page_size = 1,
                              std::vector<PageId> working_set = {}, std::string id = "nf-1") {
  NfInstance nf;
  nf.id = std::move(id);
  nf.kind = kind;
  nf.stateful = true;
  nf.plane = plane_of(kind);
  nf.memory = MemoryImage(pages, page_size, std::move(working_set));
  nf.host = "h1";
  return nf;
}

inline NfInstance stateless_upf(std::string id = "upf-1", std::string host = "h1") {
  NfInstance nf;
  nf.id = std::move(id);
  nf.kind = NfKind::UPF;
  nf.plane = Plane::User;
  nf.host = std::move(host);
  return nf;
}

inline HostNode host(std::string id, NetworkDriverKind d = NetworkDriverKind::Host, std::string hall = "hall-A",
                     double cpu = 8.0) {
  HostNode h;
  h.id = std::move(id);
  h.hall = std::move(hall);
  h.cpu_capacity = cpu;
  h.attached_driver = d;
  return h;
}

inline TransferPath path(std::uint64_t bytes_per_s, Micros one_way = Micros{0}) {
  return TransferPath{bytes_per_s, Nanos{one_way}};
}

inline MigrationParams zero_params() {
  MigrationParams p;
  p.postcopy_fault_deadline = Micros{1'000'000'000};
  return p;
}

inline const HostNode kTarget = host("h2");

}  // namespace nfmig::test
