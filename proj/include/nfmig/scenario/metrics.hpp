#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nfmig/error.hpp"
#include "nfmig/scenario/runner.hpp"

namespace nfmig {

inline constexpr std::string_view kMigrationsCsvHeader =
    "trigger_id,nf_id,kind,strategy,downtime_us,migration_time_us,bytes,sync_bytes,stall_us,rounds,outcome";
inline constexpr std::string_view kRttCsvHeader = "time_us,rtt_us";

inline std::string migrations_csv(const MetricsBundle& b) {
  std::ostringstream os;
  os << kMigrationsCsvHeader << '\n';
  for (const auto& r : b.reports) {
    const auto& m = r.report;
    os << r.trigger_id << ',' << r.nf_id << ',' << to_string(r.kind) << ',' << to_string(m.strategy) << ','
       << m.downtime.count() << ',' << m.migration_time.count() << ',' << m.bytes_transferred << ',' << m.sync_bytes
       << ',' << m.stall_time.count() << ',' << m.rounds << ',' << m.outcome() << '\n';
  }
  return os.str();
}

inline std::string rtt_csv(const MetricsBundle& b) {
  std::ostringstream os;
  os << kRttCsvHeader << '\n';
  for (const auto& s : b.user_plane_rtt) os << s.time.count() << ',' << s.rtt.count() << '\n';
  return os.str();
}

inline std::string trace_jsonl(const MetricsBundle& b) {
  std::string out;
  for (const auto& r : b.trace) {
    out += sim::to_jsonl(r);
    out += '\n';
  }
  return out;
}

// Per-kind totals; every column is the sum of the matching migrations.csv
// column over that kind's rows.
inline std::string summary_txt(const MetricsBundle& b) {
  std::ostringstream os;
  os << "kind migrations failed downtime_us migration_time_us bytes sync_bytes stall_us\n";
  KindTotals all;
  auto line = [&](std::string_view name, const KindTotals& t) {
    os << name << ' ' << t.migrations << ' ' << t.failed << ' ' << t.downtime.count() << ' '
       << t.migration_time.count() << ' ' << t.bytes << ' ' << t.sync_bytes << ' ' << t.stall.count() << '\n';
  };
  for (const auto& [kind, t] : b.totals) {
    line(to_string(kind), t);
    all.migrations += t.migrations;
    all.failed += t.failed;
    all.downtime += t.downtime;
    all.migration_time += t.migration_time;
    all.bytes += t.bytes;
    all.sync_bytes += t.sync_bytes;
    all.stall += t.stall;
  }
  line("TOTAL", all);
  return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << content;
  if (!out.flush()) throw IoError("write failed for '" + p.string() + "'");
}

// Writes migrations.csv, rtt.csv, trace.jsonl and summary.txt into out_dir.
inline std::vector<std::filesystem::path> export_metrics(const MetricsBundle& bundle,
                                                         const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  std::vector<std::filesystem::path> files{out_dir / "migrations.csv", out_dir / "rtt.csv", out_dir / "trace.jsonl",
                                           out_dir / "summary.txt"};
  write_file(files[0], migrations_csv(bundle));
  write_file(files[1], rtt_csv(bundle));
  write_file(files[2], trace_jsonl(bundle));
  write_file(files[3], summary_txt(bundle));
  return files;
}

}  // namespace nfmig
