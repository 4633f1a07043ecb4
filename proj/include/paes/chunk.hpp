#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Block-aligned partitioning of a byte stream across workers.
//
// Chunks are contiguous, disjoint, and cover [0, total_len) exactly.
// Every chunk except the final one has a raw length that is a multiple
// of 16, so each worker can run ECB independently and plain
// concatenation of the encrypted chunks is byte-identical to
// encrypting the whole padded stream sequentially. Padding is PKCS#7
// and is always applied (a full extra block when the input is already
// block-aligned), carried by the final chunk only.
namespace paes {

inline constexpr std::uint64_t kBlock = 16;

struct ChunkSpec {
  std::uint64_t offset = 0;
  std::uint64_t raw_len = 0;
  std::uint64_t padded_len = 0;
  bool is_final = false;

  friend bool operator==(const ChunkSpec&, const ChunkSpec&) = default;
};

struct ChunkPlan {
  std::uint64_t total_len = 0;
  unsigned workers = 1;
  std::vector<ChunkSpec> chunks;

  std::uint64_t output_len() const;
};

// Balanced partition for encryption: ceil(total_len/16) data blocks are
// distributed floor/ceil across min(workers, max(1, data blocks))
// chunks, larger shares first; the final chunk carries the padding.
// workers == 0 is an invalid argument.
ChunkPlan plan_chunks(std::uint64_t total_len, unsigned workers);

// Same balanced split over an already-encrypted stream (length must be
// a non-zero multiple of 16). No padding concept: padded_len == raw_len
// for every chunk; is_final marks where unpadding happens after
// decryption.
ChunkPlan plan_decrypt_chunks(std::uint64_t cipher_len, unsigned workers);

// PKCS#7, always-pad: append k copies of byte k, k = 16 - len%16 in [1,16].
std::vector<std::uint8_t> pad_final(std::span<const std::uint8_t> raw);

// Validates the trailer and returns the unpadded length. Throws
// PaddingError on malformed padding or non-block-multiple input.
std::size_t unpad_final(std::span<const std::uint8_t> padded);

// Plain concatenation in plan order; count mismatch with the plan is an
// invalid argument.
std::vector<std::uint8_t> assemble(const ChunkPlan& plan,
                                   const std::vector<std::vector<std::uint8_t>>& encrypted_chunks);

}  // namespace paes
