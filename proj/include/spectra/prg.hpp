// Exact w-wise uniform bit generators, w-wise uniform hash families and
// their Meka-Zuckerman composition.
//
// Both primitives evaluate a random polynomial of degree < w over a binary
// field: the bit generator takes the least significant bit of the value, the
// hash family the top bits. Evaluation of a degree-(w-1) polynomial with
// uniform coefficients at up to w distinct points is exactly uniform
// (Vandermonde), which is what makes the marginals exact rather than
// approximate.
//
// The composed generator hashes coordinates into t buckets and fills each
// bucket from its own independent bit generator:
//   x_{| h^{-1}(j)} = G_0(z^j).
// Bucket sizes are not assumed equal; every block generator supplies up to n
// bits, consumed in increasing coordinate order within the bucket.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spectra/rng.hpp"

namespace spectra {

struct KWiseBitGenerator {
  int m = 0;  // output bits
  int w = 1;  // independence order
  int a = 1;  // field exponent, 2^a >= m

  KWiseBitGenerator(int m, int w, int a);

  int seed_bits() const { return w * a; }
  // Bit i is the LSB of the seed polynomial at field element i, mapped
  // 0 -> +1, 1 -> -1.
  int bit_at(std::span<const uint32_t> seed, int i) const;
  std::vector<int8_t> bits(std::span<const uint32_t> seed) const;
};

struct HashFamily {
  int n = 0;       // domain size
  int t_pow2 = 1;  // range size, a power of two
  int w = 1;       // independence order
  int b = 1;       // field exponent, 2^b >= n

  HashFamily(int n, int t_pow2, int w, int b);

  int range_bits() const;
  int seed_bits() const { return w * b; }
  // Bucket of index i in [0, n): the top range_bits() of the polynomial
  // value at field element i.
  int eval(std::span<const uint32_t> seed, int i) const;
};

struct MZSeed {
  std::vector<uint32_t> hash;                // w elements, b bits each
  std::vector<std::vector<uint32_t>> blocks; // t of (w elements, a bits each)
};

class MZGenerator {
 public:
  // w_override = 0 picks the default order 80 * ceil(log2 k).
  MZGenerator(int n, int k, double tau, int w_override = 0);

  int n() const { return n_; }
  int k() const { return k_; }
  int t() const { return t_; }
  int w() const { return w_; }
  double tau() const { return tau_; }
  const HashFamily& hash() const { return hash_; }
  const KWiseBitGenerator& block() const { return block_; }

  // Total seed length in bits: hash seed plus t block seeds.
  int64_t seed_length() const;

  std::vector<int8_t> generate(const MZSeed& seed) const;

  MZSeed random_seed(CounterRng& rng) const;
  // Seed with the given bit pattern (lexicographic layout: hash elements
  // first, then block elements). Requires seed_length() <= 63.
  MZSeed seed_from_counter(uint64_t counter) const;

  std::string seed_to_hex(const MZSeed& seed) const;
  MZSeed seed_from_hex(const std::string& hex) const;

 private:
  int n_, k_, t_, w_;
  double tau_;
  HashFamily hash_;
  KWiseBitGenerator block_;
};

// Yields all 2^r seeds exactly once (lexicographic) when 2^r <= cap,
// otherwise `cap` uniformly random seeds derived from rng_seed.
class SeedStream {
 public:
  SeedStream(const MZGenerator& gen, uint64_t cap, uint64_t rng_seed);

  bool exhaustive() const { return exhaustive_; }
  uint64_t count() const { return count_; }
  bool next(MZSeed& out);

 private:
  const MZGenerator& gen_;
  bool exhaustive_;
  uint64_t count_;
  uint64_t index_ = 0;
  CounterRng rng_;
};

}  // namespace spectra
