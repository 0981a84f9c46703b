// Deterministic counter-based random streams.
//
// Every stream is derived from a 64-bit master seed plus a textual label and
// an optional chunk index, so estimators can hand out independent sub-streams
// whose output never depends on thread scheduling.

#pragma once

#include <cstdint>
#include <string_view>

namespace spectra {

// SplitMix64 finalizer; bijective on 64-bit words.
uint64_t mix64(uint64_t z);

// Folds a label into a seed (FNV-1a over the bytes, then mixed).
uint64_t hash_label(uint64_t seed, std::string_view label);

// Inverse standard-normal CDF (Wichura's PPND16), |error| < 1e-15 on (0,1).
double gaussian_quantile(double p);

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : state_(mix64(seed ^ 0x243f6a8885a308d3ull)) {}
  CounterRng(uint64_t master, std::string_view label)
      : CounterRng(hash_label(master, label)) {}
  CounterRng(uint64_t master, std::string_view label, uint64_t chunk)
      : CounterRng(mix64(hash_label(master, label) + 0x9e3779b97f4a7c15ull * (chunk + 1))) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in the open interval (0,1).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_gaussian() { return gaussian_quantile(next_unit()); }

  int next_sign() { return (next_u64() >> 63) ? -1 : 1; }

  bool next_bool(double p) { return next_unit() < p; }

  // Uniform integer in [0, n); n >= 1.
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform value with the given number of low bits set at random (0..63 bits).
  uint32_t next_bits(int bits) {
    return bits == 0 ? 0u : static_cast<uint32_t>(next_u64() >> (64 - bits));
  }

 private:
  uint64_t state_;
};

}  // namespace spectra
