#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "paes/bench.hpp"

namespace paes {

inline constexpr std::string_view kCsvHeader =
    "file_size_bytes,workers,strategy,reps,retained,avg_seconds,throughput_mbps,throughput_per_core_mbps";

// CSV of the successful records: seconds with 6 decimals, throughput
// with 1. Failed cells are listed in the summary instead.
std::string to_csv(std::span<const BenchRecord> records);

// Inverse of to_csv at the stated precision (sample lists are not part
// of the CSV; reps/retained come back as counts).
std::vector<BenchRecord> parse_csv(const std::string& csv);

// Plain-text results summary: best throughput and per-core columns per
// strategy, plus the observed threads-to-processes ratio when both ran.
std::string summary_table(std::span<const BenchRecord> records, unsigned cores);

// Line chart of throughput vs. data size, one series per worker count.
std::string throughput_svg(std::span<const BenchRecord> records, ExecStrategy strategy);

// Writes report.csv, summary.txt and throughput_<strategy>.svg for each
// strategy present. Zero records is an invalid argument.
void emit_report(std::span<const BenchRecord> records, const std::filesystem::path& dir,
                 unsigned cores);

}  // namespace paes
