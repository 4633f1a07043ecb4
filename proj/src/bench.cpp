#include "paes/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "paes/errors.hpp"

namespace paes {

namespace fs = std::filesystem;

unsigned logical_cores() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

unsigned physical_cores() {
  // Unique (package, core) pairs from sysfs; logical count when unavailable.
  std::set<std::pair<long, long>> cores;
  for (unsigned cpu = 0;; ++cpu) {
    const fs::path base = "/sys/devices/system/cpu/cpu" + std::to_string(cpu) + "/topology";
    std::ifstream core_id(base / "core_id");
    std::ifstream pkg_id(base / "physical_package_id");
    if (!core_id || !pkg_id) break;
    long c = -1, p = -1;
    core_id >> c;
    pkg_id >> p;
    cores.insert({p, c});
  }
  return cores.empty() ? logical_cores() : static_cast<unsigned>(cores.size());
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<double> reject_outliers(const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("reject_outliers: no samples");
  const std::size_t n = samples.size();

  const double m = median_of(samples);
  std::vector<double> devs(n);
  for (std::size_t i = 0; i < n; ++i) devs[i] = std::abs(samples[i] - m);
  const double mad = median_of(devs);

  const double threshold = mad > 0.0 ? 3.0 * mad : 0.01 * std::abs(m);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (devs[i] <= threshold) keep.push_back(i);
  }

  const std::size_t floor = (n + 1) / 2;
  if (keep.size() < floor) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return devs[a] < devs[b]; });
    order.resize(floor);
    std::sort(order.begin(), order.end());
    keep = std::move(order);
  }

  std::vector<double> retained;
  retained.reserve(keep.size());
  for (auto i : keep) retained.push_back(samples[i]);
  return retained;
}

BenchRecord measure_cell(const JobSpec& job, std::uint64_t file_size, unsigned reps,
                         unsigned cores, const CellRunner& runner) {
  if (reps < 3) throw std::invalid_argument("measure_cell: repetitions must be >= 3");
  if (cores == 0) throw std::invalid_argument("measure_cell: core count must be >= 1");

  BenchRecord rec;
  rec.file_size = file_size;
  rec.workers = job.workers;
  rec.strategy = job.strategy;

  const CellRunner run = runner ? runner : CellRunner([](const JobSpec& j) { return run_job(j).seconds; });

  try {
    for (unsigned r = 0; r < reps; ++r) rec.samples.push_back(run(job));
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    return rec;
  }

  rec.retained = reject_outliers(rec.samples);
  rec.avg_seconds =
      std::accumulate(rec.retained.begin(), rec.retained.end(), 0.0) / static_cast<double>(rec.retained.size());
  rec.throughput_mbps = static_cast<double>(file_size) * 8.0 / (rec.avg_seconds * 1e6);
  rec.throughput_per_core_mbps = rec.throughput_mbps / static_cast<double>(cores);
  return rec;
}

void generate_sweep_file(const fs::path& path, std::uint64_t size, std::uint64_t seed) {
  std::seed_seq seq{seed, size};
  std::mt19937_64 rng(seq);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create sweep file", path.string());

  std::vector<std::uint64_t> buf(1 << 16);
  std::uint64_t remaining = size;
  while (remaining > 0) {
    for (auto& w : buf) w = rng();
    const std::uint64_t n = std::min<std::uint64_t>(remaining, buf.size() * sizeof(std::uint64_t));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(n));
    remaining -= n;
  }
  out.flush();
  if (!out) throw IoError("sweep file write failed", path.string());
}

std::vector<BenchRecord> run_sweep(const BenchConfig& config, const CellRunner& runner) {
  if (config.sizes.empty() || config.workers.empty() || config.strategies.empty()) {
    throw std::invalid_argument("run_sweep: sweep lists must be non-empty");
  }
  if (config.reps < 3) throw std::invalid_argument("run_sweep: repetitions must be >= 3");

  const unsigned cores = config.cores == 0 ? logical_cores() : config.cores;
  std::error_code ec;
  fs::create_directories(config.work_dir, ec);

  std::vector<BenchRecord> records;
  records.reserve(config.sizes.size() * config.workers.size() * config.strategies.size());

  for (const auto size : config.sizes) {
    const fs::path input = config.work_dir / ("sweep_" + std::to_string(size) + ".bin");
    std::string generation_error;
    if (!fs::exists(input) || fs::file_size(input, ec) != size) {
      try {
        generate_sweep_file(input, size, config.seed);
      } catch (const std::exception& e) {
        generation_error = e.what();
      }
    }

    for (const auto workers : config.workers) {
      for (const auto strategy : config.strategies) {
        JobSpec job;
        job.input_path = input;
        job.output_path = config.work_dir / "bench_out.tmp";
        job.key = config.key;
        job.workers = workers;
        job.strategy = strategy;
        job.direction = Direction::Encrypt;
        job.worker_exe = config.worker_exe;

        if (!generation_error.empty()) {
          BenchRecord rec;
          rec.file_size = size;
          rec.workers = workers;
          rec.strategy = strategy;
          rec.failed = true;
          rec.error = generation_error;
          records.push_back(std::move(rec));
          continue;
        }
        records.push_back(measure_cell(job, size, config.reps, cores, runner));
        fs::remove(job.output_path, ec);
      }
    }
  }
  return records;
}

}  // namespace paes
