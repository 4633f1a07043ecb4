#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "paes/exec.hpp"

// Repeat/outlier-reject/average throughput measurement. The harness
// runs cells strictly one at a time; parallelism belongs to the
// strategy under test, never to the harness.
namespace paes {

unsigned logical_cores();
unsigned physical_cores();

struct BenchConfig {
  std::vector<std::uint64_t> sizes;        // bytes, swept outermost
  std::vector<unsigned> workers;
  std::vector<ExecStrategy> strategies;    // swept innermost
  unsigned reps = 10;                      // R, must be >= 3
  aes::Key128 key;
  unsigned cores = 0;                      // 0 = auto-detect logical cores
  std::filesystem::path work_dir;          // sweep inputs and scratch outputs
  std::uint64_t seed = 0x7061657300000001ULL;
  std::filesystem::path worker_exe;        // forwarded to the process strategy
};

struct BenchRecord {
  std::uint64_t file_size = 0;  // input bytes
  unsigned workers = 1;
  ExecStrategy strategy = ExecStrategy::Sequential;
  std::vector<double> samples;   // wall seconds, one per repetition
  std::vector<double> retained;  // surviving reject_outliers, input order
  double avg_seconds = 0.0;
  double throughput_mbps = 0.0;           // file_size*8 / (avg_seconds*1e6)
  double throughput_per_core_mbps = 0.0;  // throughput_mbps / core count
  bool failed = false;
  std::string error;
};

// Median/MAD filter: retain samples within 3*MAD of the median; when
// MAD is zero retain samples within 1% relative distance of the
// median; never drop below ceil(n/2) samples (closest to the median
// kept, ties toward earlier index). Empty input is an invalid argument.
std::vector<double> reject_outliers(const std::vector<double>& samples);

// One timed run of a job; injectable so averaging and rejection logic
// are testable without real timing. Default runs run_job.
using CellRunner = std::function<double(const JobSpec&)>;

// Runs the job `reps` times (output overwritten each run), rejects
// outliers, averages the rest and derives both throughput figures.
// `file_size` is the input size the throughput is computed over.
BenchRecord measure_cell(const JobSpec& job, std::uint64_t file_size, unsigned reps,
                         unsigned cores, const CellRunner& runner = {});

// Full sizes x workers x strategies cross-product, records in that
// order. Per-cell failures are recorded and never abort the sweep.
std::vector<BenchRecord> run_sweep(const BenchConfig& config, const CellRunner& runner = {});

// Deterministic pseudorandom sweep input, reproducible per (seed, size).
void generate_sweep_file(const std::filesystem::path& path, std::uint64_t size, std::uint64_t seed);

}  // namespace paes
