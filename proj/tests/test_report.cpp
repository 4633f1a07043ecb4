#include "paes/report.hpp"

#include <doctest.h>

#include <filesystem>

#include "test_util.hpp"
#include "xml_check.hpp"

using namespace paes;

namespace {

BenchRecord make_record(std::uint64_t size, unsigned workers, ExecStrategy strategy,
                        double avg, unsigned cores = 2) {
  BenchRecord r;
  r.file_size = size;
  r.workers = workers;
  r.strategy = strategy;
  r.samples = {avg, avg, avg, avg, avg};
  r.retained = {avg, avg, avg, avg};
  r.avg_seconds = avg;
  r.throughput_mbps = static_cast<double>(size) * 8.0 / (avg * 1e6);
  r.throughput_per_core_mbps = r.throughput_mbps / cores;
  return r;
}

}  // namespace

TEST_CASE("CSV header is byte-exact and a single record gives two lines") {
  const auto rec = make_record(1 << 20, 4, ExecStrategy::Threaded, 0.125);
  const auto csv = to_csv(std::vector<BenchRecord>{rec});

  const auto first_newline = csv.find('\n');
  REQUIRE(first_newline != std::string::npos);
  CHECK(csv.substr(0, first_newline) ==
        "file_size_bytes,workers,strategy,reps,retained,avg_seconds,throughput_mbps,"
        "throughput_per_core_mbps");

  std::size_t lines = 0;
  for (const char c : csv) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 2);
}

TEST_CASE("CSV formats seconds to 6 decimals and throughput to 1") {
  const auto rec = make_record(1000000, 1, ExecStrategy::Sequential, 0.5);
  const auto csv = to_csv(std::vector<BenchRecord>{rec});
  // 1e6 bytes in 0.5 s = 16 Mb/s
  CHECK(csv.find("1000000,1,sequential,5,4,0.500000,16.0,8.0") != std::string::npos);
}

TEST_CASE("CSV round-trips losslessly at the stated precision") {
  std::vector<BenchRecord> records = {
      make_record(1 << 16, 1, ExecStrategy::Sequential, 0.03125),
      make_record(1 << 16, 2, ExecStrategy::Threaded, 0.015625),
      make_record(1 << 20, 8, ExecStrategy::ProcessIsolated, 0.175),
  };
  const auto csv = to_csv(records);
  const auto parsed = parse_csv(csv);
  REQUIRE(parsed.size() == 3);
  CHECK(to_csv(parsed) == csv);
  CHECK_THROWS_AS(parse_csv("not,a,header\n"), std::invalid_argument);
}

TEST_CASE("failed records are excluded from the CSV and listed in the summary") {
  BenchRecord failed;
  failed.file_size = 42;
  failed.workers = 3;
  failed.strategy = ExecStrategy::Threaded;
  failed.failed = true;
  failed.error = "could not read input";

  std::vector<BenchRecord> records = {make_record(1024, 1, ExecStrategy::Sequential, 0.001),
                                      failed};
  const auto csv = to_csv(records);
  CHECK(csv.find("42,") == std::string::npos);

  const auto summary = summary_table(records, 2);
  CHECK(summary.find("failed cells: 1") != std::string::npos);
  CHECK(summary.find("could not read input") != std::string::npos);
}

TEST_CASE("summary table carries best-throughput and per-core columns plus the ratio") {
  std::vector<BenchRecord> records = {
      make_record(1 << 20, 1, ExecStrategy::Threaded, 0.2),
      make_record(1 << 20, 4, ExecStrategy::Threaded, 0.05),
      make_record(1 << 20, 4, ExecStrategy::ProcessIsolated, 0.08),
      make_record(1 << 20, 1, ExecStrategy::Sequential, 0.21),
  };
  const auto summary = summary_table(records, 4);
  CHECK(summary.find("RESULTS SUMMARY") != std::string::npos);
  CHECK(summary.find("Best throughput (Mb/s)") != std::string::npos);
  CHECK(summary.find("per core") != std::string::npos);
  CHECK(summary.find("threads") != std::string::npos);
  CHECK(summary.find("processes") != std::string::npos);
  CHECK(summary.find("threads/processes best-throughput ratio: 1.60") != std::string::npos);
  CHECK(summary.find("cores: 4") != std::string::npos);
}

TEST_CASE("throughput SVG is well-formed XML with labeled axes and one series per worker count") {
  std::vector<BenchRecord> records = {
      make_record(1 << 16, 1, ExecStrategy::Threaded, 0.05),
      make_record(1 << 20, 1, ExecStrategy::Threaded, 0.6),
      make_record(1 << 16, 2, ExecStrategy::Threaded, 0.03),
      make_record(1 << 20, 2, ExecStrategy::Threaded, 0.33),
  };
  const auto svg = throughput_svg(records, ExecStrategy::Threaded);
  CHECK(testutil::xml_well_formed(svg));
  CHECK(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(svg.find("Data size (bytes)") != std::string::npos);
  CHECK(svg.find("Throughput (Mb/s)") != std::string::npos);
  CHECK(svg.find("W=1") != std::string::npos);
  CHECK(svg.find("W=2") != std::string::npos);

  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  CHECK(polylines == 2);
}

TEST_CASE("emit_report writes the CSV, summary, and one SVG per strategy") {
  testutil::TempDir tmp;
  std::vector<BenchRecord> records = {
      make_record(1 << 16, 1, ExecStrategy::Sequential, 0.05),
      make_record(1 << 16, 2, ExecStrategy::Threaded, 0.03),
  };
  emit_report(records, tmp.path / "report", 2);

  namespace fs = std::filesystem;
  CHECK(fs::exists(tmp.path / "report" / "report.csv"));
  CHECK(fs::exists(tmp.path / "report" / "summary.txt"));
  CHECK(fs::exists(tmp.path / "report" / "throughput_sequential.svg"));
  CHECK(fs::exists(tmp.path / "report" / "throughput_threads.svg"));
  CHECK_FALSE(fs::exists(tmp.path / "report" / "throughput_processes.svg"));

  CHECK_THROWS_AS(emit_report({}, tmp.path / "r2", 2), std::invalid_argument);
}
