#pragma once

#include <filesystem>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nfmig/scenario/metrics.hpp"
#include "nfmig/scenario/scenario.hpp"

namespace nfmig {

struct SweepSpec {
  std::string key;  // dotted path; array elements by "id" or index, e.g. nfs.amf-1.memory.pages
  std::vector<std::string> values;
};

// Parses "KEY=V1,V2,...".
inline SweepSpec parse_sweep_param(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size())
    throw ParseError("--param expects KEY=V1,V2,... got '" + arg + "'");
  SweepSpec s{arg.substr(0, eq), {}};
  std::stringstream ss(arg.substr(eq + 1));
  for (std::string v; std::getline(ss, v, ',');)
    if (!v.empty()) s.values.push_back(v);
  if (s.values.empty()) throw ParseError("--param " + s.key + ": no values");
  return s;
}

// Sets the value at a dotted path. The value is taken as JSON when it parses,
// else as a string.
inline void patch_document(nlohmann::json& doc, const std::string& key, const std::string& value) {
  nlohmann::json* node = &doc;
  std::stringstream ss(key);
  std::vector<std::string> parts;
  for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      nlohmann::json* next = nullptr;
      for (auto& el : *node)
        if (el.is_object() && el.contains("id") && el["id"] == part) next = &el;
      if (!next && !part.empty() && part.find_first_not_of("0123456789") == std::string::npos) {
        const auto n = std::stoul(part);
        if (n < node->size()) next = &(*node)[n];
      }
      if (!next) throw ParseError("sweep key '" + key + "': no element '" + part + "'");
      node = next;
    } else if (node->is_object()) {
      if (!last && !node->contains(part)) (*node)[part] = nlohmann::json::object();
      node = &(*node)[part];
    } else {
      throw ParseError("sweep key '" + key + "': '" + part + "' is not inside an object or array");
    }
  }
  nlohmann::json v = nlohmann::json::parse(value, nullptr, false);
  *node = v.is_discarded() ? nlohmann::json(value) : v;
}

inline std::string sweep_summary_header() {
  return "param,value,migrations,failed,downtime_us,migration_time_us,bytes,sync_bytes,stall_us";
}

// Runs one scenario per value, up to `jobs` at a time, each in its own
// simulation instance; outputs go to out_dir/KEY=VALUE and a combined
// sweep.csv.
inline std::string run_sweep(const nlohmann::json& base, const std::string& origin, const SweepSpec& spec,
                             const std::filesystem::path& out_dir, unsigned jobs = 1) {
  auto one = [&](const std::string& value) {
    nlohmann::json doc = base;
    patch_document(doc, spec.key, value);
    const Scenario sc = load_scenario_json(doc, origin + " [" + spec.key + "=" + value + "]");
    MetricsBundle b = run_scenario(sc);
    export_metrics(b, out_dir / (spec.key + "=" + value));
    KindTotals t;
    for (const auto& [k, kt] : b.totals) {
      t.migrations += kt.migrations;
      t.failed += kt.failed;
      t.downtime += kt.downtime;
      t.migration_time += kt.migration_time;
      t.bytes += kt.bytes;
      t.sync_bytes += kt.sync_bytes;
      t.stall += kt.stall;
    }
    std::ostringstream row;
    row << spec.key << ',' << value << ',' << t.migrations << ',' << t.failed << ',' << t.downtime.count() << ','
        << t.migration_time.count() << ',' << t.bytes << ',' << t.sync_bytes << ',' << t.stall.count();
    return row.str();
  };

  std::vector<std::string> rows(spec.values.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t first = 0; first < spec.values.size(); first += width) {
    std::vector<std::future<std::string>> batch;
    for (std::size_t i = first; i < std::min(first + width, spec.values.size()); ++i)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, one, spec.values[i]));
    for (std::size_t i = 0; i < batch.size(); ++i) rows[first + i] = batch[i].get();
  }
  std::string csv = sweep_summary_header() + "\n";
  for (const auto& r : rows) csv += r + "\n";
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  write_file(out_dir / "sweep.csv", csv);
  return csv;
}

}  // namespace nfmig
