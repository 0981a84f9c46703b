#include "spectra/prg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "spectra/gf2.hpp"

namespace spectra {

namespace {

int ceil_log2(uint64_t v) {
  int b = 0;
  while ((1ull << b) < v) ++b;
  return b;
}

uint32_t field_mask(int bits) {
  return bits >= 32 ? 0xffffffffu : (1u << bits) - 1u;
}

}  // namespace

KWiseBitGenerator::KWiseBitGenerator(int m_, int w_, int a_) : m(m_), w(w_), a(a_) {
  if (m < 1 || w < 1) throw std::invalid_argument("KWiseBitGenerator: m, w must be positive");
  if (a < ceil_log2(uint64_t(m))) throw std::invalid_argument("KWiseBitGenerator: 2^a < m");
  gf2::modulus(a);  // validates the exponent
}

int KWiseBitGenerator::bit_at(std::span<const uint32_t> seed, int i) const {
  if (static_cast<int>(seed.size()) != w)
    throw std::invalid_argument("KWiseBitGenerator: seed has wrong length");
  if (i < 0 || i >= m) throw std::invalid_argument("KWiseBitGenerator: bit index out of range");
  const uint32_t v = gf2::eval_poly(seed, static_cast<uint32_t>(i), a);
  return (v & 1u) ? -1 : 1;
}

std::vector<int8_t> KWiseBitGenerator::bits(std::span<const uint32_t> seed) const {
  std::vector<int8_t> out(m);
  for (int i = 0; i < m; ++i) out[i] = static_cast<int8_t>(bit_at(seed, i));
  return out;
}

HashFamily::HashFamily(int n_, int t_pow2_, int w_, int b_)
    : n(n_), t_pow2(t_pow2_), w(w_), b(b_) {
  if (n < 1 || w < 1) throw std::invalid_argument("HashFamily: n, w must be positive");
  if (t_pow2 < 1 || (t_pow2 & (t_pow2 - 1)) != 0)
    throw std::invalid_argument("HashFamily: range must be a power of two");
  if (b < ceil_log2(uint64_t(n)) || b < range_bits())
    throw std::invalid_argument("HashFamily: field exponent too small");
  gf2::modulus(b);
}

int HashFamily::range_bits() const { return std::bit_width(unsigned(t_pow2)) - 1; }

int HashFamily::eval(std::span<const uint32_t> seed, int i) const {
  if (static_cast<int>(seed.size()) != w)
    throw std::invalid_argument("HashFamily: seed has wrong length");
  if (i < 0 || i >= n) throw std::invalid_argument("HashFamily: index out of range");
  const uint32_t v = gf2::eval_poly(seed, static_cast<uint32_t>(i), b);
  return static_cast<int>(v >> (b - range_bits()));
}

MZGenerator::MZGenerator(int n, int k, double tau, int w_override)
    : n_(n),
      k_(k),
      t_([&] {
        if (n < 1 || k < 1) throw std::invalid_argument("MZGenerator: n, k must be positive");
        if (tau <= 0.0) throw std::invalid_argument("MZGenerator: tau must be positive");
        const auto buckets = static_cast<uint64_t>(std::ceil(1.0 / tau));
        return 1 << ceil_log2(buckets);
      }()),
      w_(w_override > 0 ? w_override : 80 * std::max(1, ceil_log2(uint64_t(std::max(k, 2))))),
      tau_(tau),
      hash_(n, t_, w_,
            std::max({1, ceil_log2(uint64_t(n)), int(std::bit_width(unsigned(t_))) - 1})),
      block_(n, w_, std::max(1, ceil_log2(uint64_t(n)))) {}

int64_t MZGenerator::seed_length() const {
  return int64_t(hash_.seed_bits()) + int64_t(t_) * block_.seed_bits();
}

std::vector<int8_t> MZGenerator::generate(const MZSeed& seed) const {
  if (static_cast<int>(seed.blocks.size()) != t_)
    throw std::invalid_argument("MZGenerator: wrong number of block seeds");
  std::vector<int8_t> x(n_);
  std::vector<int> rank(t_, 0);
  for (int i = 0; i < n_; ++i) {
    const int j = hash_.eval(seed.hash, i);
    x[i] = static_cast<int8_t>(block_.bit_at(seed.blocks[j], rank[j]++));
  }
  return x;
}

MZSeed MZGenerator::random_seed(CounterRng& rng) const {
  MZSeed s;
  s.hash.resize(w_);
  for (uint32_t& v : s.hash) v = rng.next_bits(hash_.b);
  s.blocks.assign(t_, std::vector<uint32_t>(w_));
  for (auto& blk : s.blocks)
    for (uint32_t& v : blk) v = rng.next_bits(block_.a);
  return s;
}

MZSeed MZGenerator::seed_from_counter(uint64_t counter) const {
  const int64_t r = seed_length();
  if (r > 63) throw std::invalid_argument("MZGenerator: seed space too large to enumerate");
  MZSeed s;
  s.hash.resize(w_);
  s.blocks.assign(t_, std::vector<uint32_t>(w_));
  int shift = static_cast<int>(r);
  auto take = [&](int bits) {
    shift -= bits;
    return static_cast<uint32_t>((counter >> shift) & field_mask(bits));
  };
  for (uint32_t& v : s.hash) v = take(hash_.b);
  for (auto& blk : s.blocks)
    for (uint32_t& v : blk) v = take(block_.a);
  return s;
}

namespace {

void append_hex(std::string& out, uint32_t v, int bits) {
  const int digits = (bits + 3) / 4;
  for (int d = digits - 1; d >= 0; --d) out += "0123456789abcdef"[(v >> (4 * d)) & 0xf];
}

uint32_t parse_hex(const std::string& hex, size_t& pos, int bits) {
  const int digits = (bits + 3) / 4;
  uint32_t v = 0;
  for (int d = 0; d < digits; ++d) {
    if (pos >= hex.size()) throw std::invalid_argument("seed hex: truncated");
    const char c = hex[pos++];
    int nib;
    if (c >= '0' && c <= '9') nib = c - '0';
    else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
    else throw std::invalid_argument("seed hex: bad digit");
    v = (v << 4) | uint32_t(nib);
  }
  return v;
}

}  // namespace

std::string MZGenerator::seed_to_hex(const MZSeed& seed) const {
  std::string out;
  for (uint32_t v : seed.hash) append_hex(out, v, hash_.b);
  for (const auto& blk : seed.blocks)
    for (uint32_t v : blk) append_hex(out, v, block_.a);
  return out;
}

MZSeed MZGenerator::seed_from_hex(const std::string& hex) const {
  MZSeed s;
  s.hash.resize(w_);
  s.blocks.assign(t_, std::vector<uint32_t>(w_));
  size_t pos = 0;
  for (uint32_t& v : s.hash) v = parse_hex(hex, pos, hash_.b) & field_mask(hash_.b);
  for (auto& blk : s.blocks)
    for (uint32_t& v : blk) v = parse_hex(hex, pos, block_.a) & field_mask(block_.a);
  if (pos != hex.size()) throw std::invalid_argument("seed hex: trailing characters");
  return s;
}

SeedStream::SeedStream(const MZGenerator& gen, uint64_t cap, uint64_t rng_seed)
    : gen_(gen),
      exhaustive_(gen.seed_length() <= 63 &&
                  (1ull << gen.seed_length()) <= cap),
      count_(exhaustive_ ? (1ull << gen.seed_length()) : cap),
      rng_(rng_seed, "seed-stream") {
  if (cap < 1) throw std::invalid_argument("SeedStream: cap must be positive");
}

bool SeedStream::next(MZSeed& out) {
  if (index_ >= count_) return false;
  out = exhaustive_ ? gen_.seed_from_counter(index_) : gen_.random_seed(rng_);
  ++index_;
  return true;
}

}  // namespace spectra
