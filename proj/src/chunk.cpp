#include "paes/chunk.hpp"

#include <numeric>
#include <stdexcept>

#include "paes/errors.hpp"

namespace paes {

namespace {

// Split `blocks` across `chunk_count` chunks, floor/ceil shares, larger first.
std::vector<std::uint64_t> balanced_shares(std::uint64_t blocks, unsigned chunk_count) {
  std::vector<std::uint64_t> shares(chunk_count, blocks / chunk_count);
  const std::uint64_t extra = blocks % chunk_count;
  for (std::uint64_t i = 0; i < extra; ++i) shares[static_cast<std::size_t>(i)] += 1;
  return shares;
}

}  // namespace

std::uint64_t ChunkPlan::output_len() const {
  return std::accumulate(chunks.begin(), chunks.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const ChunkSpec& c) { return acc + c.padded_len; });
}

ChunkPlan plan_chunks(std::uint64_t total_len, unsigned workers) {
  if (workers == 0) throw std::invalid_argument("plan_chunks: workers must be >= 1");

  const std::uint64_t data_blocks = (total_len + kBlock - 1) / kBlock;
  const std::uint64_t chunk_count =
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, data_blocks));

  ChunkPlan plan{total_len, workers, {}};
  plan.chunks.reserve(static_cast<std::size_t>(chunk_count));

  const auto shares = balanced_shares(data_blocks, static_cast<unsigned>(chunk_count));
  std::uint64_t offset = 0;
  for (std::uint64_t i = 0; i < chunk_count; ++i) {
    const bool is_final = (i + 1 == chunk_count);
    ChunkSpec c;
    c.offset = offset;
    c.is_final = is_final;
    if (is_final) {
      c.raw_len = total_len - offset;
      c.padded_len = (c.raw_len / kBlock + 1) * kBlock;  // always-pad
    } else {
      c.raw_len = shares[static_cast<std::size_t>(i)] * kBlock;
      c.padded_len = c.raw_len;
    }
    offset += c.raw_len;
    plan.chunks.push_back(c);
  }
  return plan;
}

ChunkPlan plan_decrypt_chunks(std::uint64_t cipher_len, unsigned workers) {
  if (workers == 0) throw std::invalid_argument("plan_decrypt_chunks: workers must be >= 1");
  if (cipher_len == 0 || cipher_len % kBlock != 0) {
    throw PaddingError("ciphertext length must be a non-zero multiple of 16");
  }

  const std::uint64_t blocks = cipher_len / kBlock;
  const std::uint64_t chunk_count = std::min<std::uint64_t>(workers, blocks);

  ChunkPlan plan{cipher_len, workers, {}};
  plan.chunks.reserve(static_cast<std::size_t>(chunk_count));

  const auto shares = balanced_shares(blocks, static_cast<unsigned>(chunk_count));
  std::uint64_t offset = 0;
  for (std::uint64_t i = 0; i < chunk_count; ++i) {
    ChunkSpec c;
    c.offset = offset;
    c.raw_len = shares[static_cast<std::size_t>(i)] * kBlock;
    c.padded_len = c.raw_len;
    c.is_final = (i + 1 == chunk_count);
    offset += c.raw_len;
    plan.chunks.push_back(c);
  }
  return plan;
}

std::vector<std::uint8_t> pad_final(std::span<const std::uint8_t> raw) {
  const std::size_t k = static_cast<std::size_t>(kBlock - raw.size() % kBlock);
  std::vector<std::uint8_t> out(raw.begin(), raw.end());
  out.insert(out.end(), k, static_cast<std::uint8_t>(k));
  return out;
}

std::size_t unpad_final(std::span<const std::uint8_t> padded) {
  if (padded.empty() || padded.size() % kBlock != 0) {
    throw PaddingError("unpad: length must be a non-zero multiple of 16");
  }
  const std::uint8_t k = padded.back();
  if (k == 0 || k > kBlock) throw PaddingError("unpad: invalid pad byte");
  for (std::size_t i = padded.size() - k; i < padded.size(); ++i) {
    if (padded[i] != k) throw PaddingError("unpad: inconsistent pad bytes");
  }
  return padded.size() - k;
}

std::vector<std::uint8_t> assemble(const ChunkPlan& plan,
                                   const std::vector<std::vector<std::uint8_t>>& encrypted_chunks) {
  if (encrypted_chunks.size() != plan.chunks.size()) {
    throw std::invalid_argument("assemble: chunk count does not match plan");
  }
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(plan.output_len()));
  for (const auto& c : encrypted_chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace paes
