#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "paes/aes.hpp"
#include "paes/chunk.hpp"

// Runs a chunk plan under one of three strategies. All three produce
// byte-identical output for the same input and key; the sequential
// path is the oracle the parallel ones are tested against.
namespace paes {

enum class ExecStrategy { Sequential, Threaded, ProcessIsolated };
enum class Direction { Encrypt, Decrypt };

std::string_view to_string(ExecStrategy s);
std::optional<ExecStrategy> strategy_from_string(std::string_view name);

struct JobSpec {
  std::filesystem::path input_path;
  std::filesystem::path output_path;
  aes::Key128 key;
  unsigned workers = 1;
  ExecStrategy strategy = ExecStrategy::Sequential;
  Direction direction = Direction::Encrypt;
  // Executable spawned in hidden worker mode by the process-isolated
  // strategy; empty means this very binary (/proc/self/exe).
  std::filesystem::path worker_exe;
};

struct JobOutcome {
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  double seconds = 0.0;  // wall time, job start to output fully written
};

JobOutcome run_job(const JobSpec& job);
JobOutcome run_sequential(const JobSpec& job);
JobOutcome run_threaded(const JobSpec& job);
JobOutcome run_process_isolated(const JobSpec& job);

// The unit of work a single worker performs: read the chunk's raw
// bytes, transform (padding or unpadding iff final), write the result.
struct WorkerChunkArgs {
  std::filesystem::path input_path;
  std::uint64_t offset = 0;
  std::uint64_t raw_len = 0;
  bool is_final = false;
  Direction direction = Direction::Encrypt;
  aes::Key128 key;
  std::filesystem::path out_path;
};

void run_worker_chunk(const WorkerChunkArgs& args);

// Chunk transforms shared by every strategy.
std::vector<std::uint8_t> encrypt_chunk(std::span<const std::uint8_t> raw, bool is_final,
                                        const aes::RoundKeySchedule& ks);
std::vector<std::uint8_t> decrypt_chunk(std::span<const std::uint8_t> cipher, bool is_final,
                                        const aes::RoundKeySchedule& ks);

}  // namespace paes
