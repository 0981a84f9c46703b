// Monte-Carlo and exhaustive estimators: acceptance probability, fooling
// error, anti-concentration, noise/average sensitivity, bucketing goodness
// and random-matrix inequality checks.
//
// Sampling is chunked: chunk c of an estimator labelled L draws from the
// counter stream (master_seed, L, c), partial sums are reduced in chunk
// order with compensated accumulation, so results are bit-identical for any
// worker count. The env var SPECTRA_THREADS caps workers.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spectra/prg.hpp"
#include "spectra/rng.hpp"
#include "spectra/spectrahedron.hpp"

namespace spectra {

struct EstimatorConfig {
  uint64_t samples = 100000;
  uint64_t master_seed = 0;
  uint64_t chunk_size = 8192;
  double confidence = 0.999;
  int max_threads = 0;  // 0: SPECTRA_THREADS env, then hardware

  // Hoeffding radius for a [0,1]-valued mean of n samples.
  double hoeffding_radius(uint64_t n) const;
};

struct EstimatorReport {
  double estimate = 0.0;
  double radius = 0.0;
  uint64_t n_samples = 0;
  uint64_t seed = 0;
  std::map<std::string, std::string> metadata;
};

// An n-input function on sign vectors (entries +-1; Gaussian sources feed
// real vectors through the same closure).
struct BooleanFunction {
  int n = 0;
  std::function<bool(std::span<const double>)> eval;
};

BooleanFunction membership_function(const PositiveSpectrahedron& s, double tol = 0.0);
BooleanFunction membership_function(const PackedSpectrahedron& s, double tol = 0.0);

enum class SampleSource { kUniform, kGaussian };

// Exhaustive mean over all 2^n sign vectors; n <= 24.
EstimatorReport exact_accept_prob(const PositiveSpectrahedron& s, double tol = 0.0);
EstimatorReport exact_accept_prob(const PackedSpectrahedron& s, double tol = 0.0);
EstimatorReport exact_accept_prob(const BooleanFunction& f);

EstimatorReport accept_prob_mc(const BooleanFunction& f, SampleSource source,
                               const EstimatorConfig& cfg);

// Mean over PRG outputs; exhausts the seed space when 2^r <= cap_seeds
// (radius 0), otherwise averages over cap_seeds sampled seeds.
EstimatorReport accept_prob_prg(const BooleanFunction& f, const MZGenerator& gen,
                                uint64_t cap_seeds, const EstimatorConfig& cfg);

// |reference - prg| with combined radius. The reference side is exhaustive
// when cfg.samples == 0 (requires n <= 24), otherwise uniform Monte Carlo.
EstimatorReport fooling_error(const PositiveSpectrahedron& s, const MZGenerator& gen,
                              uint64_t cap_seeds, const EstimatorConfig& cfg);

// Pr[ either block's lambda_max lands in (-lambda, lambda] ].
EstimatorReport anti_concentration(const SpectrahedronPair& pair, double lambda,
                                   SampleSource source, const EstimatorConfig& cfg);

// Same event on a grid of radii, sharing one set of draws; estimates are
// monotone in lambda by construction.
std::vector<EstimatorReport> anti_concentration_curve(const SpectrahedronPair& pair,
                                                      std::span<const double> lambdas,
                                                      SampleSource source,
                                                      const EstimatorConfig& cfg);

// Pr[f(x) != f(y)] for an epsilon-correlated pair (independent per-coordinate
// flips with probability epsilon).
EstimatorReport noise_sensitivity(const BooleanFunction& f, double epsilon,
                                  const EstimatorConfig& cfg);

// n * Pr_{x,i}[f(x) != f(x with coordinate i flipped)].
EstimatorReport average_sensitivity(const BooleanFunction& f, const EstimatorConfig& cfg);

// Random partition of [n] into m buckets, each split by the sign of z into
// 2m signed buckets, plus the induced coefficients sum_{j in C_q} z_j A^j.
// Buckets 0..m-1 hold the positive-sign parts, m..2m-1 the negative ones.
struct BucketSplit {
  std::vector<std::vector<int>> index_sets;
  std::vector<SymMatrix> coefficients;
};
BucketSplit bucket_split(const PositiveSpectrahedron& s, std::span<const double> z, int m,
                         CounterRng& rng);

// Fraction of random m-way hashes for which at least 3m/4 buckets c satisfy
// sum_{j in bucket c} A^j >= I / (2 tau m).
EstimatorReport bucket_goodness(const PositiveSpectrahedron& s, int m, int trials,
                                const EstimatorConfig& cfg);

struct FactCheckResult {
  std::string fact;
  std::string config;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // radius term granted to the MC side
  bool pass = false;
};

// E ||sum_i x_i A^i||^m <= (1 + 2m ceil(log2 k))^{m/2} ||sum_i (A^i)^2||^{m/2}
// for x uniform on signs; even moments.
std::vector<FactCheckResult> check_norm_moment(const std::vector<SymMatrix>& family,
                                               std::span<const int> moments,
                                               const EstimatorConfig& cfg);

// Matrix Rosenthal for X_i = x_i A^i at Schatten order 4p:
// (E ||sum X_i||_{4p}^{4p})^{1/4p}
//   <= sqrt(4p-1) ||(sum E X_i^2)^{1/2}||_{4p} + (4p-1) (sum E ||X_i||_{4p}^{4p})^{1/4p}.
std::vector<FactCheckResult> check_rosenthal(const std::vector<SymMatrix>& family,
                                             std::span<const int> ps,
                                             const EstimatorConfig& cfg);

// Matrix Chernoff lower tail for X_i = b_i A^i with fair Bernoulli b_i:
// Pr[lambda_min(sum X_i) <= (1-delta) mu] <= k (e^{-delta}/(1-delta)^{1-delta})^{mu/R}
// with mu = lambda_min(sum E X_i) and R = max_i lambda_max(A^i).
std::vector<FactCheckResult> check_chernoff(const std::vector<SymMatrix>& family,
                                            std::span<const double> deltas,
                                            const EstimatorConfig& cfg);

}  // namespace spectra
