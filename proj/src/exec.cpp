#include "paes/exec.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "paes/errors.hpp"

extern char** environ;

namespace paes {

namespace fs = std::filesystem;

std::string_view to_string(ExecStrategy s) {
  switch (s) {
    case ExecStrategy::Sequential: return "sequential";
    case ExecStrategy::Threaded: return "threads";
    case ExecStrategy::ProcessIsolated: return "processes";
  }
  return "sequential";
}

std::optional<ExecStrategy> strategy_from_string(std::string_view name) {
  if (name == "sequential") return ExecStrategy::Sequential;
  if (name == "threads") return ExecStrategy::Threaded;
  if (name == "processes") return ExecStrategy::ProcessIsolated;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t file_size_checked(const fs::path& p) {
  std::error_code ec;
  const auto n = fs::file_size(p, ec);
  if (ec) throw IoError("cannot stat input", p.string());
  return n;
}

std::vector<std::uint8_t> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open input", p.string());
  std::vector<std::uint8_t> data(static_cast<std::size_t>(file_size_checked(p)));
  if (!data.empty()) {
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) {
      throw IoError("short read", p.string());
    }
  }
  return data;
}

void write_file(const fs::path& p, std::span<const std::uint8_t> data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output", p.string());
  if (!data.empty()) {
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  }
  out.flush();
  if (!out) throw IoError("write failed", p.string());
}

// Output lands under a temporary name and is renamed on success, so a
// failed job never leaves a partial output file.
class AtomicOutput {
 public:
  explicit AtomicOutput(fs::path target)
      : target_(std::move(target)),
        temp_(target_.string() + ".part." + std::to_string(::getpid())) {}

  ~AtomicOutput() {
    if (!committed_) {
      std::error_code ec;
      fs::remove(temp_, ec);
    }
  }

  const fs::path& temp_path() const { return temp_; }

  void commit() {
    std::error_code ec;
    fs::rename(temp_, target_, ec);
    if (ec) throw IoError("rename failed", target_.string());
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path temp_;
  bool committed_ = false;
};

// Transform one chunk from `raw` into `out`. For encryption `out` must
// be padded_len bytes; the returned value is the number written (always
// out.size() for encrypt, raw length minus padding for a final decrypt).
std::size_t encrypt_chunk_into(std::span<const std::uint8_t> raw, bool is_final,
                               const aes::RoundKeySchedule& ks, std::span<std::uint8_t> out) {
  if (is_final) {
    const auto padded = pad_final(raw);
    aes::encrypt_ecb(padded, out, ks);
  } else {
    aes::encrypt_ecb(raw, out, ks);
  }
  return out.size();
}

std::size_t decrypt_chunk_into(std::span<const std::uint8_t> cipher, bool is_final,
                               const aes::RoundKeySchedule& ks, std::span<std::uint8_t> out) {
  aes::decrypt_ecb(cipher, out, ks);
  if (is_final) return unpad_final(out);
  return out.size();
}

ChunkPlan plan_for(Direction dir, std::uint64_t total_len, unsigned workers) {
  return dir == Direction::Encrypt ? plan_chunks(total_len, workers)
                                   : plan_decrypt_chunks(total_len, workers);
}

std::uint64_t output_buffer_len(Direction dir, const ChunkPlan& plan) {
  // Decrypt output shrinks by the (yet unknown) pad length; size for the
  // worst case and trim after the final chunk reports its true length.
  return dir == Direction::Encrypt ? plan.output_len() : plan.total_len;
}

// Shared-memory execution of a plan: used directly by the sequential
// strategy (single chunk) and by the threaded strategy (one thread per
// chunk writing a disjoint region of the output buffer).
JobOutcome run_in_memory(const JobSpec& job, unsigned workers, bool threaded) {
  const auto start = Clock::now();

  const auto input = read_file(job.input_path);
  const auto plan = plan_for(job.direction, input.size(), workers);
  const aes::RoundKeySchedule ks(job.key);

  std::vector<std::uint8_t> out(static_cast<std::size_t>(output_buffer_len(job.direction, plan)));
  std::vector<std::size_t> written(plan.chunks.size(), 0);

  auto work_chunk = [&](std::size_t idx) {
    const auto& c = plan.chunks[idx];
    const std::span<const std::uint8_t> raw(input.data() + c.offset, static_cast<std::size_t>(c.raw_len));
    const std::span<std::uint8_t> dst(out.data() + c.offset, static_cast<std::size_t>(c.padded_len));
    written[idx] = job.direction == Direction::Encrypt
                       ? encrypt_chunk_into(raw, c.is_final, ks, dst)
                       : decrypt_chunk_into(raw, c.is_final, ks, dst);
  };

  if (threaded) {
    std::vector<std::string> failures(plan.chunks.size());
    std::vector<std::thread> pool;
    pool.reserve(plan.chunks.size());
    for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
      pool.emplace_back([&, i] {
        try {
          work_chunk(i);
        } catch (const std::exception& e) {
          failures[i] = e.what();
        }
      });
    }
    for (auto& t : pool) t.join();  // wait-all before any result is used

    std::ostringstream failed;
    bool any_failed = false;
    for (std::size_t i = 0; i < failures.size(); ++i) {
      if (failures[i].empty()) continue;
      failed << (any_failed ? "; " : "") << "chunk " << i << ": " << failures[i];
      any_failed = true;
    }
    if (any_failed) throw WorkerError("worker failure: " + failed.str());
  } else {
    for (std::size_t i = 0; i < plan.chunks.size(); ++i) work_chunk(i);
  }

  std::uint64_t total_out = 0;
  for (auto w : written) total_out += w;
  out.resize(static_cast<std::size_t>(total_out));

  AtomicOutput dest(job.output_path);
  write_file(dest.temp_path(), out);
  dest.commit();

  JobOutcome outcome;
  outcome.bytes_in = input.size();
  outcome.bytes_out = total_out;
  outcome.seconds = elapsed_seconds(start);
  return outcome;
}

}  // namespace

JobOutcome run_sequential(const JobSpec& job) { return run_in_memory(job, 1, false); }

JobOutcome run_threaded(const JobSpec& job) {
  if (job.workers == 0) throw std::invalid_argument("run_threaded: workers must be >= 1");
  return run_in_memory(job, job.workers, true);
}

namespace {

fs::path self_executable() {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  if (ec) throw Error("cannot resolve /proc/self/exe for worker spawning");
  return p;
}

struct SpawnedWorker {
  pid_t pid = -1;
  fs::path temp_out;
};

// Launch one hidden-mode worker. The key travels over a dedicated pipe
// whose read end the child inherits; it never appears in argv.
pid_t spawn_worker(const fs::path& exe, const JobSpec& job, const ChunkSpec& chunk,
                   const fs::path& temp_out) {
  int key_pipe[2];
  if (::pipe(key_pipe) != 0) throw Error("pipe() failed: " + std::string(std::strerror(errno)));
  if (::write(key_pipe[1], job.key.bytes.data(), job.key.bytes.size()) !=
      static_cast<ssize_t>(job.key.bytes.size())) {
    ::close(key_pipe[0]);
    ::close(key_pipe[1]);
    throw Error("writing key to worker pipe failed");
  }
  ::close(key_pipe[1]);

  std::vector<std::string> args = {
      exe.string(),
      "__worker",
      "--in", job.input_path.string(),
      "--offset", std::to_string(chunk.offset),
      "--len", std::to_string(chunk.raw_len),
      "--final", chunk.is_final ? "1" : "0",
      "--dir", job.direction == Direction::Encrypt ? "encrypt" : "decrypt",
      "--keyfd", std::to_string(key_pipe[0]),
      "--out", temp_out.string(),
  };
  std::vector<char*> argv;
  argv.reserve(args.size() + 1);
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, exe.c_str(), nullptr, nullptr, argv.data(), environ);
  ::close(key_pipe[0]);  // child holds its own copy
  if (rc != 0) throw Error("posix_spawn failed: " + std::string(std::strerror(rc)));
  return pid;
}

std::string describe_exit(int status) {
  if (WIFEXITED(status)) return "exit code " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "unknown status";
}

}  // namespace

JobOutcome run_process_isolated(const JobSpec& job) {
  if (job.workers == 0) throw std::invalid_argument("run_process_isolated: workers must be >= 1");
  const auto start = Clock::now();

  const auto total_len = file_size_checked(job.input_path);
  const auto plan = plan_for(job.direction, total_len, job.workers);
  const fs::path exe = job.worker_exe.empty() ? self_executable() : job.worker_exe;

  std::vector<SpawnedWorker> workers;
  workers.reserve(plan.chunks.size());

  struct TempCleanup {
    std::vector<SpawnedWorker>* w;
    ~TempCleanup() {
      for (const auto& s : *w) {
        std::error_code ec;
        fs::remove(s.temp_out, ec);
      }
    }
  } cleanup{&workers};

  for (std::size_t i = 0; i < plan.chunks.size(); ++i) {
    fs::path temp = job.output_path;
    temp += ".w" + std::to_string(i) + "." + std::to_string(::getpid()) + ".part";
    workers.push_back({spawn_worker(exe, job, plan.chunks[i], temp), temp});
  }

  // Wait for every worker before touching any result.
  std::ostringstream failed;
  bool any_failed = false;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    int status = 0;
    if (::waitpid(workers[i].pid, &status, 0) < 0) {
      failed << (any_failed ? "; " : "") << "chunk " << i << ": waitpid failed";
      any_failed = true;
      continue;
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      failed << (any_failed ? "; " : "") << "chunk " << i << ": " << describe_exit(status);
      any_failed = true;
    }
  }
  if (any_failed) throw WorkerError("worker failure: " + failed.str());

  AtomicOutput dest(job.output_path);
  std::uint64_t total_out = 0;
  {
    std::ofstream out(dest.temp_path(), std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output", dest.temp_path().string());
    for (const auto& w : workers) {
      std::ifstream part(w.temp_out, std::ios::binary);
      if (!part) throw IoError("missing worker output", w.temp_out.string());
      out << part.rdbuf();
      if (!out) throw IoError("concatenation failed", dest.temp_path().string());
    }
    out.flush();
    if (!out) throw IoError("write failed", dest.temp_path().string());
    total_out = file_size_checked(dest.temp_path());
  }
  dest.commit();

  JobOutcome outcome;
  outcome.bytes_in = total_len;
  outcome.bytes_out = total_out;
  outcome.seconds = elapsed_seconds(start);
  return outcome;
}

JobOutcome run_job(const JobSpec& job) {
  switch (job.strategy) {
    case ExecStrategy::Sequential: return run_sequential(job);
    case ExecStrategy::Threaded: return run_threaded(job);
    case ExecStrategy::ProcessIsolated: return run_process_isolated(job);
  }
  throw std::invalid_argument("unknown strategy");
}

void run_worker_chunk(const WorkerChunkArgs& args) {
  const int fd = ::open(args.input_path.c_str(), O_RDONLY);
  if (fd < 0) throw IoError("cannot open input", args.input_path.string());
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(args.raw_len));
  std::size_t got = 0;
  while (got < raw.size()) {
    const ssize_t n = ::pread(fd, raw.data() + got, raw.size() - got,
                              static_cast<off_t>(args.offset + got));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    got += static_cast<std::size_t>(n);
  }
  ::close(fd);
  if (got != raw.size()) {
    throw IoError("short read of chunk [" + std::to_string(args.offset) + ", +" +
                      std::to_string(args.raw_len) + ")",
                  args.input_path.string());
  }

  const aes::RoundKeySchedule ks(args.key);
  const auto out = args.direction == Direction::Encrypt
                       ? encrypt_chunk(raw, args.is_final, ks)
                       : decrypt_chunk(raw, args.is_final, ks);
  write_file(args.out_path, out);
}

std::vector<std::uint8_t> encrypt_chunk(std::span<const std::uint8_t> raw, bool is_final,
                                        const aes::RoundKeySchedule& ks) {
  if (!is_final && raw.size() % aes::kBlockSize != 0) {
    throw std::invalid_argument("non-final chunk length must be a multiple of 16");
  }
  std::vector<std::uint8_t> out(is_final ? (raw.size() / aes::kBlockSize + 1) * aes::kBlockSize
                                         : raw.size());
  encrypt_chunk_into(raw, is_final, ks, out);
  return out;
}

std::vector<std::uint8_t> decrypt_chunk(std::span<const std::uint8_t> cipher, bool is_final,
                                        const aes::RoundKeySchedule& ks) {
  std::vector<std::uint8_t> out(cipher.size());
  const auto n = decrypt_chunk_into(cipher, is_final, ks, out);
  out.resize(n);
  return out;
}

}  // namespace paes
