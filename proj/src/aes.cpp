#include "paes/aes.hpp"

#include <cassert>
#include <stdexcept>

namespace paes::aes {

namespace {

constexpr std::uint8_t gf_inverse(std::uint8_t a) {
  if (a == 0) return 0;
  for (int b = 1; b < 256; ++b) {
    if (gf_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
  }
  return 0;  // unreachable: GF(2^8) is a field
}

constexpr std::uint8_t rotl8(std::uint8_t v, int n) {
  return static_cast<std::uint8_t>((v << n) | (v >> (8 - n)));
}

constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> t{};
  for (int i = 0; i < 256; ++i) {
    const std::uint8_t inv = gf_inverse(static_cast<std::uint8_t>(i));
    t[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
        inv ^ rotl8(inv, 1) ^ rotl8(inv, 2) ^ rotl8(inv, 3) ^ rotl8(inv, 4) ^ 0x63);
  }
  return t;
}

constexpr std::array<std::uint8_t, 256> invert_table(const std::array<std::uint8_t, 256>& t) {
  std::array<std::uint8_t, 256> inv{};
  for (int i = 0; i < 256; ++i) inv[t[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
  return inv;
}

constexpr auto kSbox = make_sbox();
constexpr auto kInvSbox = invert_table(kSbox);

constexpr bool is_permutation_pair(const std::array<std::uint8_t, 256>& f,
                                   const std::array<std::uint8_t, 256>& g) {
  std::array<bool, 256> seen{};
  for (int i = 0; i < 256; ++i) {
    if (seen[f[static_cast<std::size_t>(i)]]) return false;
    seen[f[static_cast<std::size_t>(i)]] = true;
    if (g[f[static_cast<std::size_t>(i)]] != i) return false;
  }
  return true;
}

static_assert(is_permutation_pair(kSbox, kInvSbox), "S-box must be a permutation with exact inverse");
static_assert(kSbox[0x00] == 0x63 && kSbox[0x53] == 0xed, "S-box spot entries");

constexpr std::array<std::uint8_t, 256> make_mul_table(std::uint8_t c) {
  std::array<std::uint8_t, 256> t{};
  for (int i = 0; i < 256; ++i) t[static_cast<std::size_t>(i)] = gf_mul(static_cast<std::uint8_t>(i), c);
  return t;
}

// Inverse MixColumns coefficients {0e,0b,0d,09}.
constexpr auto kMul9 = make_mul_table(0x09);
constexpr auto kMulB = make_mul_table(0x0b);
constexpr auto kMulD = make_mul_table(0x0d);
constexpr auto kMulE = make_mul_table(0x0e);

using Cells = std::array<std::uint8_t, 16>;

inline void sub_bytes_ip(Cells& c) {
  for (auto& b : c) b = kSbox[b];
}

inline void inv_sub_bytes_ip(Cells& c) {
  for (auto& b : c) b = kInvSbox[b];
}

// Row r rotates left by r. Column-major layout: row r, col c at r + 4c.
inline void shift_rows_ip(Cells& c) {
  std::uint8_t t = c[1];
  c[1] = c[5]; c[5] = c[9]; c[9] = c[13]; c[13] = t;
  t = c[2]; c[2] = c[10]; c[10] = t;
  t = c[6]; c[6] = c[14]; c[14] = t;
  t = c[15];
  c[15] = c[11]; c[11] = c[7]; c[7] = c[3]; c[3] = t;
}

inline void inv_shift_rows_ip(Cells& c) {
  std::uint8_t t = c[13];
  c[13] = c[9]; c[9] = c[5]; c[5] = c[1]; c[1] = t;
  t = c[2]; c[2] = c[10]; c[10] = t;
  t = c[6]; c[6] = c[14]; c[14] = t;
  t = c[3];
  c[3] = c[7]; c[7] = c[11]; c[11] = c[15]; c[15] = t;
}

inline void mix_columns_ip(Cells& c) {
  for (int col = 0; col < 4; ++col) {
    std::uint8_t* p = c.data() + 4 * col;
    const std::uint8_t a0 = p[0], a1 = p[1], a2 = p[2], a3 = p[3];
    const std::uint8_t t = static_cast<std::uint8_t>(a0 ^ a1 ^ a2 ^ a3);
    p[0] = static_cast<std::uint8_t>(a0 ^ t ^ gf_xtime(static_cast<std::uint8_t>(a0 ^ a1)));
    p[1] = static_cast<std::uint8_t>(a1 ^ t ^ gf_xtime(static_cast<std::uint8_t>(a1 ^ a2)));
    p[2] = static_cast<std::uint8_t>(a2 ^ t ^ gf_xtime(static_cast<std::uint8_t>(a2 ^ a3)));
    p[3] = static_cast<std::uint8_t>(a3 ^ t ^ gf_xtime(static_cast<std::uint8_t>(a3 ^ a0)));
  }
}

inline void inv_mix_columns_ip(Cells& c) {
  for (int col = 0; col < 4; ++col) {
    std::uint8_t* p = c.data() + 4 * col;
    const std::uint8_t a0 = p[0], a1 = p[1], a2 = p[2], a3 = p[3];
    p[0] = static_cast<std::uint8_t>(kMulE[a0] ^ kMulB[a1] ^ kMulD[a2] ^ kMul9[a3]);
    p[1] = static_cast<std::uint8_t>(kMul9[a0] ^ kMulE[a1] ^ kMulB[a2] ^ kMulD[a3]);
    p[2] = static_cast<std::uint8_t>(kMulD[a0] ^ kMul9[a1] ^ kMulE[a2] ^ kMulB[a3]);
    p[3] = static_cast<std::uint8_t>(kMulB[a0] ^ kMulD[a1] ^ kMul9[a2] ^ kMulE[a3]);
  }
}

inline void add_round_key_ip(Cells& c, const RoundKey& rk) {
  for (std::size_t i = 0; i < 16; ++i) c[i] = static_cast<std::uint8_t>(c[i] ^ rk[i]);
}

inline void encrypt_cells(Cells& st, const RoundKeySchedule& ks) {
  add_round_key_ip(st, ks.round_key(0));
  for (int round = 1; round < kRounds; ++round) {
    sub_bytes_ip(st);
    shift_rows_ip(st);
    mix_columns_ip(st);
    add_round_key_ip(st, ks.round_key(round));
  }
  sub_bytes_ip(st);
  shift_rows_ip(st);
  add_round_key_ip(st, ks.round_key(kRounds));
}

inline void decrypt_cells(Cells& st, const RoundKeySchedule& ks) {
  add_round_key_ip(st, ks.round_key(kRounds));
  inv_shift_rows_ip(st);
  inv_sub_bytes_ip(st);
  for (int round = kRounds - 1; round > 0; --round) {
    add_round_key_ip(st, ks.round_key(round));
    inv_mix_columns_ip(st);
    inv_shift_rows_ip(st);
    inv_sub_bytes_ip(st);
  }
  add_round_key_ip(st, ks.round_key(0));
}

}  // namespace

RoundKeySchedule::RoundKeySchedule(const Key128& key) {
  // Words w0..w43; every 4th word gets RotWord/SubWord and the Rcon byte.
  std::array<std::array<std::uint8_t, 4>, 44> w{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = key.bytes[static_cast<std::size_t>(4 * i + j)];
  }
  std::uint8_t rcon = 0x01;
  for (int i = 4; i < 44; ++i) {
    auto temp = w[static_cast<std::size_t>(i - 1)];
    if (i % 4 == 0) {
      const std::uint8_t t0 = temp[0];
      temp[0] = static_cast<std::uint8_t>(kSbox[temp[1]] ^ rcon);
      temp[1] = kSbox[temp[2]];
      temp[2] = kSbox[temp[3]];
      temp[3] = kSbox[t0];
      rcon = gf_xtime(rcon);
    }
    for (int j = 0; j < 4; ++j) {
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<std::uint8_t>(w[static_cast<std::size_t>(i - 4)][static_cast<std::size_t>(j)] ^ temp[static_cast<std::size_t>(j)]);
    }
  }
  for (int r = 0; r <= kRounds; ++r) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        keys_[static_cast<std::size_t>(r)][static_cast<std::size_t>(4 * i + j)] = w[static_cast<std::size_t>(4 * r + i)][static_cast<std::size_t>(j)];
      }
    }
  }
}

RoundKeySchedule expand_key(const Key128& key) { return RoundKeySchedule(key); }

const std::array<std::uint8_t, 256>& sbox() {
  static constexpr auto t = kSbox;
  return t;
}

const std::array<std::uint8_t, 256>& inv_sbox() {
  static constexpr auto t = kInvSbox;
  return t;
}

State sub_bytes(State s) {
  sub_bytes_ip(s.cells);
  return s;
}

State inv_sub_bytes(State s) {
  inv_sub_bytes_ip(s.cells);
  return s;
}

State shift_rows(State s) {
  shift_rows_ip(s.cells);
  return s;
}

State inv_shift_rows(State s) {
  inv_shift_rows_ip(s.cells);
  return s;
}

State mix_columns(State s) {
  mix_columns_ip(s.cells);
  return s;
}

State inv_mix_columns(State s) {
  inv_mix_columns_ip(s.cells);
  return s;
}

State add_round_key(State s, const RoundKey& rk) {
  add_round_key_ip(s.cells, rk);
  return s;
}

Block encrypt_block(const Block& in, const RoundKeySchedule& ks) {
  Cells st = in;
  encrypt_cells(st, ks);
  return st;
}

Block decrypt_block(const Block& in, const RoundKeySchedule& ks) {
  Cells st = in;
  decrypt_cells(st, ks);
  return st;
}

void encrypt_ecb(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                 const RoundKeySchedule& ks) {
  if (in.size() != out.size() || in.size() % kBlockSize != 0) {
    throw std::invalid_argument("encrypt_ecb: length must be a multiple of 16 and match output");
  }
  for (std::size_t off = 0; off < in.size(); off += kBlockSize) {
    Cells st;
    std::copy_n(in.data() + off, kBlockSize, st.data());
    encrypt_cells(st, ks);
    std::copy_n(st.data(), kBlockSize, out.data() + off);
  }
}

void decrypt_ecb(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                 const RoundKeySchedule& ks) {
  if (in.size() != out.size() || in.size() % kBlockSize != 0) {
    throw std::invalid_argument("decrypt_ecb: length must be a multiple of 16 and match output");
  }
  for (std::size_t off = 0; off < in.size(); off += kBlockSize) {
    Cells st;
    std::copy_n(in.data() + off, kBlockSize, st.data());
    decrypt_cells(st, ks);
    std::copy_n(st.data(), kBlockSize, out.data() + off);
  }
}

}  // namespace paes::aes
