#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

// AES-128 block cipher (Nk=4, Nr=10), implemented from the Rijndael
// definition. All operations are pure; a RoundKeySchedule is immutable
// after construction and safe to share across threads.
namespace paes::aes {

inline constexpr std::size_t kBlockSize = 16;
inline constexpr int kRounds = 10;

using Block = std::array<std::uint8_t, kBlockSize>;
using RoundKey = std::array<std::uint8_t, kBlockSize>;

struct Key128 {
  std::array<std::uint8_t, kBlockSize> bytes{};
  friend bool operator==(const Key128&, const Key128&) = default;
};

// The 4x4 byte matrix the round transforms operate on. Column-major:
// byte i of a block sits at row i%4, column i/4.
struct State {
  std::array<std::uint8_t, kBlockSize> cells{};  // cells[row + 4*col]

  static State from_block(const Block& b) { return State{b}; }
  Block to_block() const { return cells; }

  std::uint8_t& at(int row, int col) { return cells[static_cast<std::size_t>(row + 4 * col)]; }
  std::uint8_t at(int row, int col) const { return cells[static_cast<std::size_t>(row + 4 * col)]; }

  friend bool operator==(const State&, const State&) = default;
};

// 11 round keys: entry 0 is the cipher key itself.
class RoundKeySchedule {
 public:
  explicit RoundKeySchedule(const Key128& key);

  const RoundKey& round_key(int round) const { return keys_[static_cast<std::size_t>(round)]; }
  static constexpr int size() { return kRounds + 1; }

 private:
  std::array<RoundKey, kRounds + 1> keys_{};
};

RoundKeySchedule expand_key(const Key128& key);

// GF(2^8) arithmetic modulo x^8 + x^4 + x^3 + x + 1.
constexpr std::uint8_t gf_xtime(std::uint8_t a) {
  return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0x00));
}

constexpr std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t p = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & 1) p ^= a;
    a = gf_xtime(a);
    b >>= 1;
  }
  return p;
}

// Substitution tables, generated at compile time from the GF(2^8)
// inversion plus affine map and checked against the permutation
// invariant (see aes.cpp).
const std::array<std::uint8_t, 256>& sbox();
const std::array<std::uint8_t, 256>& inv_sbox();

State sub_bytes(State s);
State inv_sub_bytes(State s);
State shift_rows(State s);
State inv_shift_rows(State s);
State mix_columns(State s);
State inv_mix_columns(State s);
State add_round_key(State s, const RoundKey& rk);

Block encrypt_block(const Block& in, const RoundKeySchedule& ks);
Block decrypt_block(const Block& in, const RoundKeySchedule& ks);

// Bulk ECB over a buffer whose length is a multiple of 16. `in` and
// `out` must be the same length and may alias exactly.
void encrypt_ecb(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                 const RoundKeySchedule& ks);
void decrypt_ecb(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                 const RoundKeySchedule& ks);

}  // namespace paes::aes
