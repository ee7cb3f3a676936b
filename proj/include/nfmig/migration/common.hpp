#pragma once

#include <stdexcept>
#include <string>

#include "nfmig/core/topology.hpp"
#include "nfmig/core/types.hpp"
#include "nfmig/memory/dirty_process.hpp"
#include "nfmig/migration/params.hpp"
#include "nfmig/sim/simulator.hpp"

namespace nfmig {

struct MigrationResult {
  MigrationReport report;
  sim::EventTrace trace;
};

namespace detail {

inline MemoryImage& require_state(NfInstance& nf, Strategy s) {
  if (!nf.stateful || !nf.memory)
    throw StrategyInapplicable(std::string(to_string(s)) + " needs a stateful NF; " + std::string(to_string(nf.kind)) +
                               " '" + nf.id + "' is stateless");
  return *nf.memory;
}

inline sim::Fields tag(const NfInstance& nf, Strategy s, const HostNode& target) {
  return sim::Fields{{"nf", nf.id}, {"strategy", std::string(to_string(s))}, {"target", target.id}};
}

inline sim::Fields with(sim::Fields f, const sim::Fields& extra) {
  for (const auto& [k, v] : extra.items()) f[k] = v;
  return f;
}

// Dirtying of an NF that is running on the source. Dirtying is applied lazily
// up to each event time; it must never be applied across a frozen interval.
class SourceProcess {
 public:
  SourceProcess(MemoryImage& image, DirtyProcess& process, Micros now)
      : image_(image), process_(process), last_(now) {}

  std::uint64_t advance_to(Micros t) {
    if (frozen_) throw std::logic_error("dirty process advanced while the NF is frozen");
    const auto n = advance_dirty(image_, process_, t - last_);
    last_ = t;
    return n;
  }

  void freeze(Micros t) {
    advance_to(t);
    frozen_ = true;
  }

  // Drops the interval since the last advance, e.g. while nothing tracks
  // divergence yet.
  void rebase(Micros t) { last_ = t; }

  bool frozen() const noexcept { return frozen_; }

 private:
  MemoryImage& image_;
  DirtyProcess& process_;
  Micros last_;
  bool frozen_ = false;
};

}  // namespace detail
}  // namespace nfmig
