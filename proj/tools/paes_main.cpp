// paes: AES-128 file encryption/decryption parallelized over
// block-aligned chunks, plus a throughput benchmark harness.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "paes/bench.hpp"
#include "paes/errors.hpp"
#include "paes/exec.hpp"
#include "paes/report.hpp"

namespace fs = std::filesystem;

namespace {

std::optional<paes::aes::Key128> parse_hex_key(const std::string& hex) {
  if (hex.size() != 32) return std::nullopt;
  paes::aes::Key128 key;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    const int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    key.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return key;
}

paes::aes::Key128 load_keyfile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw paes::IoError("cannot open key file", path.string());
  paes::aes::Key128 key;
  in.read(reinterpret_cast<char*>(key.bytes.data()), 16);
  if (in.gcount() != 16) throw paes::Error("key file must contain exactly 16 bytes: " + path.string());
  char extra;
  if (in.read(&extra, 1), in.gcount() != 0) {
    throw paes::Error("key file must contain exactly 16 bytes: " + path.string());
  }
  return key;
}

// "64", "16K", "4M", "1G" (1024-based multipliers).
std::optional<std::uint64_t> parse_size(std::string token) {
  if (token.empty()) return std::nullopt;
  std::uint64_t mult = 1;
  const char suffix = token.back();
  if (suffix == 'K' || suffix == 'k') mult = 1024ULL;
  if (suffix == 'M' || suffix == 'm') mult = 1024ULL * 1024;
  if (suffix == 'G' || suffix == 'g') mult = 1024ULL * 1024 * 1024;
  if (mult != 1) token.pop_back();
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  try {
    return std::stoull(token) * mult;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct KeyOptions {
  std::string key_hex;
  std::string key_file;

  void attach(CLI::App* cmd, bool required) {
    auto* hex = cmd->add_option("--key-hex", key_hex, "16-byte key as 32 hex characters");
    auto* file = cmd->add_option("--key-file", key_file, "file holding exactly 16 raw key bytes");
    hex->excludes(file);
    file->excludes(hex);
    if (required) {
      // exactly one of the two
      cmd->callback([this, cmd] {
        if (key_hex.empty() && key_file.empty()) {
          throw CLI::RequiredError("--key-hex or --key-file");
        }
      });
    }
  }

  paes::aes::Key128 resolve(const paes::aes::Key128& fallback) const {
    if (!key_hex.empty()) {
      const auto key = parse_hex_key(key_hex);
      if (!key) throw CLI::ValidationError("--key-hex", "need exactly 32 hex characters");
      return *key;
    }
    if (!key_file.empty()) return load_keyfile(key_file);
    return fallback;
  }
};

int run_crypt(const paes::JobSpec& job) {
  const auto outcome = paes::run_job(job);
  std::cout << (job.direction == paes::Direction::Encrypt ? "encrypted " : "decrypted ")
            << outcome.bytes_in << " bytes -> " << outcome.bytes_out << " bytes in "
            << outcome.seconds << " s (" << std::string(paes::to_string(job.strategy)) << ", "
            << job.workers << " worker" << (job.workers == 1 ? "" : "s") << ")\n";
  return 0;
}

int run_worker_mode(const std::string& in, std::uint64_t offset, std::uint64_t len, int final_flag,
                    const std::string& dir, int keyfd, const std::string& out) {
  paes::WorkerChunkArgs args;
  args.input_path = in;
  args.offset = offset;
  args.raw_len = len;
  args.is_final = final_flag != 0;
  if (dir == "encrypt") {
    args.direction = paes::Direction::Encrypt;
  } else if (dir == "decrypt") {
    args.direction = paes::Direction::Decrypt;
  } else {
    std::cerr << "worker: bad --dir\n";
    return 2;
  }

  std::size_t got = 0;
  while (got < 16) {
    const ssize_t n = ::read(keyfd, args.key.bytes.data() + got, 16 - got);
    if (n <= 0) break;
    got += static_cast<std::size_t>(n);
  }
  if (got != 16) {
    std::cerr << "worker: could not read 16 key bytes from fd " << keyfd << "\n";
    return 1;
  }
  if (keyfd != 0) ::close(keyfd);

  args.out_path = out;
  paes::run_worker_chunk(args);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel AES-128 file encryption and throughput benchmarking"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML config file");

  const paes::aes::Key128 default_bench_key{{0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08,
                                             0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x0e, 0x0f}};

  // encrypt / decrypt
  struct CryptArgs {
    std::string in, out;
    KeyOptions key;
    unsigned workers = 1;
    std::string strategy = "sequential";
  };
  CryptArgs enc, dec;

  const auto add_crypt = [&](CLI::App* cmd, CryptArgs& a) {
    cmd->add_option("--in", a.in, "input file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", a.out, "output file")->required();
    a.key.attach(cmd, true);
    cmd->add_option("--workers", a.workers, "worker count")->default_val(1)->check(CLI::Range(1u, 4096u));
    cmd->add_option("--strategy", a.strategy, "sequential|threads|processes")
        ->default_val("sequential")
        ->check(CLI::IsMember({"sequential", "threads", "processes"}));
  };
  add_crypt(app.add_subcommand("encrypt", "encrypt a file (AES-128, ECB, PKCS#7)"), enc);
  add_crypt(app.add_subcommand("decrypt", "decrypt a file produced by encrypt"), dec);

  // bench
  struct BenchArgs {
    std::string sizes, workers, strategies;
    unsigned reps = 10;
    KeyOptions key;
    unsigned cores = 0;
    std::string report_dir = "bench_report";
    std::string work_dir;
    std::uint64_t seed = 0x7061657300000001ULL;
  } bench;
  auto* bench_cmd = app.add_subcommand("bench", "throughput sweep with outlier-rejected timing");
  bench_cmd->add_option("--sizes", bench.sizes, "comma list of input sizes (K/M/G = 1024-based)")->required();
  bench_cmd->add_option("--workers", bench.workers, "comma list of worker counts")->required();
  bench_cmd->add_option("--strategies", bench.strategies, "comma list of sequential|threads|processes")->required();
  bench_cmd->add_option("--reps", bench.reps, "repetitions per cell (>= 3)")->default_val(10);
  bench.key.attach(bench_cmd, false);
  bench_cmd->add_option("--cores", bench.cores, "core count for per-core throughput (default: detected)");
  bench_cmd->add_option("--report-dir", bench.report_dir, "directory for report.csv, summary.txt, SVG charts")
      ->default_val("bench_report");
  bench_cmd->add_option("--work-dir", bench.work_dir, "scratch directory (default: <report-dir>/work)");
  bench_cmd->add_option("--seed", bench.seed, "seed for generated sweep inputs");

  // hidden worker mode used by the process-isolated strategy
  struct WorkerArgs {
    std::string in, out, dir = "encrypt";
    std::uint64_t offset = 0, len = 0;
    int final_flag = 0;
    int keyfd = -1;
  } worker;
  auto* worker_cmd = app.add_subcommand("__worker");
  worker_cmd->group("");  // hidden
  worker_cmd->add_option("--in", worker.in)->required();
  worker_cmd->add_option("--offset", worker.offset)->required();
  worker_cmd->add_option("--len", worker.len)->required();
  worker_cmd->add_option("--final", worker.final_flag)->required();
  worker_cmd->add_option("--dir", worker.dir);
  worker_cmd->add_option("--keyfd", worker.keyfd)->required();
  worker_cmd->add_option("--out", worker.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  try {
    if (app.got_subcommand("encrypt") || app.got_subcommand("decrypt")) {
      const bool encrypting = app.got_subcommand("encrypt");
      CryptArgs& a = encrypting ? enc : dec;
      paes::JobSpec job;
      job.input_path = a.in;
      job.output_path = a.out;
      try {
        job.key = a.key.resolve(default_bench_key);
      } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      job.workers = a.workers;
      job.strategy = *paes::strategy_from_string(a.strategy);
      job.direction = encrypting ? paes::Direction::Encrypt : paes::Direction::Decrypt;
      return run_crypt(job);
    }

    if (app.got_subcommand("bench")) {
      paes::BenchConfig config;
      for (const auto& tok : split_list(bench.sizes)) {
        const auto size = parse_size(tok);
        if (!size) {
          std::cerr << "bad size: " << tok << "\n";
          return 2;
        }
        config.sizes.push_back(*size);
      }
      for (const auto& tok : split_list(bench.workers)) {
        unsigned long value = 0;
        try {
          if (tok.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(tok);
          value = std::stoul(tok);
        } catch (const std::exception&) {
          value = 0;
        }
        if (value == 0 || value > 4096) {
          std::cerr << "bad worker count: " << tok << "\n";
          return 2;
        }
        config.workers.push_back(static_cast<unsigned>(value));
      }
      for (const auto& tok : split_list(bench.strategies)) {
        const auto s = paes::strategy_from_string(tok);
        if (!s) {
          std::cerr << "bad strategy: " << tok << "\n";
          return 2;
        }
        config.strategies.push_back(*s);
      }
      if (config.sizes.empty() || config.workers.empty() || config.strategies.empty()) {
        std::cerr << "sweep lists must be non-empty\n";
        return 2;
      }
      if (bench.reps < 3) {
        std::cerr << "--reps must be >= 3\n";
        return 2;
      }
      config.reps = bench.reps;
      try {
        config.key = bench.key.resolve(default_bench_key);
      } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      config.cores = bench.cores;
      const fs::path report_dir = bench.report_dir;
      config.work_dir = bench.work_dir.empty() ? report_dir / "work" : fs::path(bench.work_dir);
      config.seed = bench.seed;

      const unsigned cores = config.cores == 0 ? paes::logical_cores() : config.cores;
      const auto records = paes::run_sweep(config);
      paes::emit_report(records, report_dir, cores);
      std::cout << paes::summary_table(records, cores);
      std::cout << "report written to " << report_dir.string() << "\n";
      return 0;
    }

    if (app.got_subcommand("__worker")) {
      return run_worker_mode(worker.in, worker.offset, worker.len, worker.final_flag, worker.dir,
                             worker.keyfd, worker.out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
