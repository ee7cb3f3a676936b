#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nfmig/error.hpp"
#include "nfmig/sim/time.hpp"

namespace nfmig::sim {

using Fields = nlohmann::ordered_json;

struct TraceRecord {
  Micros time{0};
  std::uint64_t seq = 0;
  std::string kind;
  Fields fields = Fields::object();

  bool operator==(const TraceRecord&) const = default;
};

using EventTrace = std::vector<TraceRecord>;

struct EventHandle {
  Micros time{0};
  std::uint64_t seq = 0;
};

// One line per record: {"time_us":..,"seq":..,"kind":..,<fields>}.
inline std::string to_jsonl(const TraceRecord& r) {
  nlohmann::ordered_json j;
  j["time_us"] = r.time.count();
  j["seq"] = r.seq;
  j["kind"] = r.kind;
  for (const auto& [k, v] : r.fields.items()) j[k] = v;
  return j.dump();
}

// Single-threaded discrete-event core. Events run in (time, seq) order; seq
// is a global counter, so events at equal times run in scheduling order.
class Simulator {
 public:
  using Action = std::function<void()>;

  explicit Simulator(Micros start = Micros{0}) : now_(start) {}

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  Micros now() const noexcept { return now_; }
  bool empty() const noexcept { return queue_.empty(); }
  std::size_t pending() const noexcept { return queue_.size(); }

  EventHandle schedule(Micros at, std::string kind, Fields fields = Fields::object(), Action action = {}) {
    if (at < now_)
      throw SchedulingInPast("event '" + kind + "' at " + std::to_string(at.count()) + " us before now " +
                             std::to_string(now_.count()) + " us");
    const EventHandle h{at, next_seq_++};
    queue_.emplace(std::make_pair(at, h.seq), Entry{std::move(kind), std::move(fields), std::move(action)});
    return h;
  }

  EventHandle schedule_in(Micros delay, std::string kind, Fields fields = Fields::object(), Action action = {}) {
    return schedule(now_ + delay, std::move(kind), std::move(fields), std::move(action));
  }

  // Returns false if the event already ran or was cancelled.
  bool cancel(const EventHandle& h) { return queue_.erase({h.time, h.seq}) > 0; }

  // Appends a record at the current time without going through the queue.
  // Used by actions to log what they did.
  void note(std::string kind, Fields fields = Fields::object()) {
    current_->push_back(TraceRecord{now_, next_seq_++, std::move(kind), std::move(fields)});
  }

  // Adds fields to the record of the event whose action is running.
  void annotate(const Fields& extra) {
    if (!running_) throw std::logic_error("annotate outside an event action");
    auto& rec = (*current_)[*running_];
    for (const auto& [k, v] : extra.items()) rec.fields[k] = v;
  }

  // Processes every event with time <= t_end. The clock stops at the time of
  // the last processed event.
  EventTrace run_until(Micros t_end) {
    EventTrace trace;
    EventTrace* saved = current_;
    current_ = &trace;
    while (!queue_.empty() && queue_.begin()->first.first <= t_end) {
      auto node = queue_.extract(queue_.begin());
      const auto [time, seq] = node.key();
      Entry& e = node.mapped();
      now_ = time;
      trace.push_back(TraceRecord{time, seq, std::move(e.kind), std::move(e.fields)});
      if (e.action) {
        running_ = trace.size() - 1;
        e.action();
        running_.reset();
      }
    }
    current_ = saved;
    return trace;
  }

  EventTrace run() { return run_until(Micros::max()); }

 private:
  struct Entry {
    std::string kind;
    Fields fields;
    Action action;
  };

  Micros now_;
  std::uint64_t next_seq_ = 0;
  std::map<std::pair<Micros, std::uint64_t>, Entry> queue_;
  EventTrace outside_;
  EventTrace* current_ = &outside_;
  std::optional<std::size_t> running_;
};

}  // namespace nfmig::sim
