#include "spectra/estimators.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <thread>

namespace spectra {

namespace {

int worker_count(const EstimatorConfig& cfg, uint64_t chunks) {
  int workers = cfg.max_threads;
  if (workers <= 0) {
    if (const char* env = std::getenv("SPECTRA_THREADS")) workers = std::atoi(env);
  }
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  return static_cast<int>(std::min<uint64_t>(workers, std::max<uint64_t>(chunks, 1)));
}

// Chunked Monte Carlo over a vector-valued per-sample contribution. Chunk c
// draws from stream (master_seed, label, c); per-chunk partials are reduced
// in chunk order with Kahan compensation, independent of the worker count.
std::vector<double> run_mc_means(const EstimatorConfig& cfg, std::string_view label, int dims,
                                 const std::function<void(CounterRng&, std::span<double>)>& f) {
  if (cfg.samples == 0) throw std::invalid_argument("estimator: samples must be positive");
  const uint64_t chunk = std::max<uint64_t>(1, cfg.chunk_size);
  const uint64_t chunks = (cfg.samples + chunk - 1) / chunk;
  std::vector<std::vector<double>> partial(chunks);

  std::atomic<uint64_t> next{0};
  auto work = [&] {
    std::vector<double> acc(dims), comp(dims), row(dims);
    for (;;) {
      const uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      std::fill(acc.begin(), acc.end(), 0.0);
      std::fill(comp.begin(), comp.end(), 0.0);
      CounterRng rng(cfg.master_seed, label, c);
      const uint64_t lo = c * chunk;
      const uint64_t hi = std::min(cfg.samples, lo + chunk);
      for (uint64_t s = lo; s < hi; ++s) {
        std::fill(row.begin(), row.end(), 0.0);
        f(rng, row);
        for (int d = 0; d < dims; ++d) {
          const double y = row[d] - comp[d];
          const double t = acc[d] + y;
          comp[d] = (t - acc[d]) - y;
          acc[d] = t;
        }
      }
      partial[c] = acc;
    }
  };

  const int workers = worker_count(cfg, chunks);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  std::vector<double> total(dims, 0.0), comp(dims, 0.0);
  for (const auto& p : partial)
    for (int d = 0; d < dims; ++d) {
      const double y = p[d] - comp[d];
      const double t = total[d] + y;
      comp[d] = (t - total[d]) - y;
      total[d] = t;
    }
  for (double& v : total) v /= double(cfg.samples);
  return total;
}

EstimatorReport probability_report(double estimate, const EstimatorConfig& cfg,
                                   std::string_view label) {
  EstimatorReport rep;
  rep.estimate = estimate;
  rep.radius = cfg.hoeffding_radius(cfg.samples);
  rep.n_samples = cfg.samples;
  rep.seed = cfg.master_seed;
  rep.metadata["estimator"] = std::string(label);
  return rep;
}

void fill_signs(CounterRng& rng, std::span<double> x) {
  for (double& v : x) v = rng.next_sign();
}

void fill_source(CounterRng& rng, SampleSource source, std::span<double> x) {
  if (source == SampleSource::kUniform) {
    fill_signs(rng, x);
  } else {
    for (double& v : x) v = rng.next_gaussian();
  }
}

// Exhaustive mean over the sign cube with Gray-code incremental updates of
// the pencil sum_i x_i A^i - B.
template <class Lmax>
double gray_code_mean(const std::vector<SymMatrix>& a, const SymMatrix& b, double tol,
                      Lmax&& lmax) {
  const int n = static_cast<int>(a.size());
  if (n > 24) throw std::invalid_argument("exact_accept_prob: n > 24");
  std::vector<double> x(n, 1.0);
  SymMatrix m = -1.0 * SymMatrix(b);
  for (const SymMatrix& ai : a) m.axpy(1.0, ai);
  uint64_t hits = 0;
  const uint64_t total = 1ull << n;
  for (uint64_t code = 0;;) {
    if (lmax(m) <= tol) ++hits;
    if (++code == total) break;
    const int bit = std::countr_zero(code);
    x[bit] = -x[bit];
    m.axpy(2.0 * x[bit], a[bit]);
  }
  return double(hits) / double(total);
}

}  // namespace

double EstimatorConfig::hoeffding_radius(uint64_t n) const {
  if (n == 0) return 0.0;
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * double(n)));
}

BooleanFunction membership_function(const PositiveSpectrahedron& s, double tol) {
  auto held = std::make_shared<PositiveSpectrahedron>(s);
  return BooleanFunction{held->n(), [held, tol](std::span<const double> x) {
                           return held->contains(x, tol);
                         }};
}

BooleanFunction membership_function(const PackedSpectrahedron& s, double tol) {
  auto held = std::make_shared<PackedSpectrahedron>(s);
  return BooleanFunction{held->n(), [held, tol](std::span<const double> x) {
                           return held->contains(x, tol);
                         }};
}

EstimatorReport exact_accept_prob(const PositiveSpectrahedron& s, double tol) {
  EstimatorReport rep;
  rep.estimate = gray_code_mean(s.coefficients(), s.b(), tol,
                                [](const SymMatrix& m) { return lambda_max(m); });
  rep.n_samples = 1ull << s.n();
  rep.metadata["estimator"] = "exact";
  return rep;
}

EstimatorReport exact_accept_prob(const PackedSpectrahedron& s, double tol) {
  std::vector<SymMatrix> a;
  a.reserve(s.n());
  for (int i = 0; i < s.n(); ++i) a.push_back(s.a(i));
  EstimatorReport rep;
  rep.estimate = gray_code_mean(a, s.b(), tol,
                                [](const SymMatrix& m) { return lambda_max(m); });
  rep.n_samples = 1ull << s.n();
  rep.metadata["estimator"] = "exact";
  return rep;
}

EstimatorReport exact_accept_prob(const BooleanFunction& f) {
  if (f.n > 24) throw std::invalid_argument("exact_accept_prob: n > 24");
  const uint64_t total = 1ull << f.n;
  std::vector<double> x(f.n);
  uint64_t hits = 0;
  for (uint64_t p = 0; p < total; ++p) {
    for (int i = 0; i < f.n; ++i) x[i] = (p >> i) & 1 ? -1.0 : 1.0;
    if (f.eval(x)) ++hits;
  }
  EstimatorReport rep;
  rep.estimate = double(hits) / double(total);
  rep.n_samples = total;
  rep.metadata["estimator"] = "exact";
  return rep;
}

EstimatorReport accept_prob_mc(const BooleanFunction& f, SampleSource source,
                               const EstimatorConfig& cfg) {
  const int n = f.n;
  auto sample = [&f, n, source](CounterRng& rng, std::span<double> out) {
    std::vector<double> x(n);
    fill_source(rng, source, x);
    out[0] = f.eval(x) ? 1.0 : 0.0;
  };
  const double mean = run_mc_means(cfg, "accept-mc", 1, sample)[0];
  return probability_report(mean, cfg, source == SampleSource::kUniform ? "uniform" : "gaussian");
}

EstimatorReport accept_prob_prg(const BooleanFunction& f, const MZGenerator& gen,
                                uint64_t cap_seeds, const EstimatorConfig& cfg) {
  if (gen.n() != f.n) throw std::invalid_argument("accept_prob_prg: n mismatch");
  SeedStream stream(gen, cap_seeds, cfg.master_seed);
  MZSeed seed;
  std::vector<double> x(gen.n());
  uint64_t hits = 0;
  while (stream.next(seed)) {
    const std::vector<int8_t> bits = gen.generate(seed);
    for (int i = 0; i < gen.n(); ++i) x[i] = bits[i];
    if (f.eval(x)) ++hits;
  }
  EstimatorReport rep;
  rep.estimate = double(hits) / double(stream.count());
  rep.radius = stream.exhaustive() ? 0.0 : cfg.hoeffding_radius(stream.count());
  rep.n_samples = stream.count();
  rep.seed = cfg.master_seed;
  rep.metadata["estimator"] = "prg";
  rep.metadata["exhaustive"] = stream.exhaustive() ? "1" : "0";
  return rep;
}

EstimatorReport fooling_error(const PositiveSpectrahedron& s, const MZGenerator& gen,
                              uint64_t cap_seeds, const EstimatorConfig& cfg) {
  const BooleanFunction f = membership_function(s);
  EstimatorReport ref;
  if (cfg.samples == 0) {
    ref = exact_accept_prob(s);
  } else {
    ref = accept_prob_mc(f, SampleSource::kUniform, cfg);
  }
  const EstimatorReport prg = accept_prob_prg(f, gen, cap_seeds, cfg);
  EstimatorReport rep;
  rep.estimate = std::abs(ref.estimate - prg.estimate);
  rep.radius = ref.radius + prg.radius;
  rep.n_samples = prg.n_samples;
  rep.seed = cfg.master_seed;
  rep.metadata["estimator"] = "fooling-error";
  rep.metadata["reference"] = std::to_string(ref.estimate);
  rep.metadata["prg"] = std::to_string(prg.estimate);
  rep.metadata["exhaustive"] = prg.metadata.at("exhaustive");
  return rep;
}

std::vector<EstimatorReport> anti_concentration_curve(const SpectrahedronPair& pair,
                                                      std::span<const double> lambdas,
                                                      SampleSource source,
                                                      const EstimatorConfig& cfg) {
  for (double l : lambdas)
    if (l <= 0.0) throw std::invalid_argument("anti_concentration: lambda must be positive");
  const int n = pair.s1.n();
  const int dims = static_cast<int>(lambdas.size());
  std::vector<double> grid(lambdas.begin(), lambdas.end());
  auto sample = [&pair, n, source, grid](CounterRng& rng, std::span<double> out) {
    std::vector<double> x(n);
    fill_source(rng, source, x);
    const double l1 = pair.s1.lambda_max_at(x);
    const double l2 = pair.s2.lambda_max_at(x);
    for (size_t d = 0; d < grid.size(); ++d) {
      const double lam = grid[d];
      const bool hit = (l1 > -lam && l1 <= lam) || (l2 > -lam && l2 <= lam);
      out[d] = hit ? 1.0 : 0.0;
    }
  };
  const std::vector<double> means = run_mc_means(cfg, "anticonc", dims, sample);
  std::vector<EstimatorReport> reports;
  reports.reserve(dims);
  for (int d = 0; d < dims; ++d) {
    EstimatorReport rep = probability_report(means[d], cfg, "anticonc");
    rep.metadata["lambda"] = std::to_string(grid[d]);
    reports.push_back(std::move(rep));
  }
  return reports;
}

EstimatorReport anti_concentration(const SpectrahedronPair& pair, double lambda,
                                   SampleSource source, const EstimatorConfig& cfg) {
  return anti_concentration_curve(pair, std::array{lambda}, source, cfg).front();
}

EstimatorReport noise_sensitivity(const BooleanFunction& f, double epsilon,
                                  const EstimatorConfig& cfg) {
  if (epsilon < 0.0 || epsilon > 0.5)
    throw std::invalid_argument("noise_sensitivity: epsilon in [0, 1/2]");
  const int n = f.n;
  auto sample = [&f, n, epsilon](CounterRng& rng, std::span<double> out) {
    std::vector<double> x(n), y(n);
    fill_signs(rng, x);
    for (int i = 0; i < n; ++i) y[i] = rng.next_bool(epsilon) ? -x[i] : x[i];
    out[0] = f.eval(x) != f.eval(y) ? 1.0 : 0.0;
  };
  EstimatorReport rep =
      probability_report(run_mc_means(cfg, "noise-sensitivity", 1, sample)[0], cfg, "ns");
  rep.metadata["epsilon"] = std::to_string(epsilon);
  return rep;
}

EstimatorReport average_sensitivity(const BooleanFunction& f, const EstimatorConfig& cfg) {
  const int n = f.n;
  auto sample = [&f, n](CounterRng& rng, std::span<double> out) {
    std::vector<double> x(n);
    fill_signs(rng, x);
    const int i = static_cast<int>(rng.next_below(uint64_t(n)));
    const bool before = f.eval(x);
    x[i] = -x[i];
    out[0] = before != f.eval(x) ? 1.0 : 0.0;
  };
  const double flip = run_mc_means(cfg, "average-sensitivity", 1, sample)[0];
  EstimatorReport rep = probability_report(flip, cfg, "as");
  rep.estimate = double(n) * flip;
  rep.radius = double(n) * rep.radius;
  rep.metadata["flip_prob"] = std::to_string(flip);
  return rep;
}

BucketSplit bucket_split(const PositiveSpectrahedron& s, std::span<const double> z, int m,
                         CounterRng& rng) {
  if (m < 1) throw std::invalid_argument("bucket_split: m must be positive");
  if (static_cast<int>(z.size()) != s.n())
    throw std::invalid_argument("bucket_split: z has wrong length");
  BucketSplit split;
  split.index_sets.assign(size_t(2) * m, {});
  split.coefficients.assign(size_t(2) * m, SymMatrix(s.k()));
  for (int j = 0; j < s.n(); ++j) {
    const int c = static_cast<int>(rng.next_below(uint64_t(m)));
    const int q = z[j] > 0 ? c : c + m;
    split.index_sets[q].push_back(j);
    split.coefficients[q].axpy(z[j], s.a(j));
  }
  return split;
}

EstimatorReport bucket_goodness(const PositiveSpectrahedron& s, int m, int trials,
                                const EstimatorConfig& cfg) {
  if (m < 1 || trials < 1) throw std::invalid_argument("bucket_goodness: m, trials positive");
  const double flip = s.sign() == MatrixSign::kPsd ? 1.0 : -1.0;
  const double threshold = 1.0 / (2.0 * s.declared_tau() * double(m));
  EstimatorConfig run = cfg;
  run.samples = uint64_t(trials);
  auto sample = [&s, m, flip, threshold](CounterRng& rng, std::span<double> out) {
    std::vector<SymMatrix> sigma(m, SymMatrix(s.k()));
    for (int j = 0; j < s.n(); ++j)
      sigma[rng.next_below(uint64_t(m))].axpy(flip, s.a(j));
    int good = 0;
    for (const SymMatrix& sc : sigma)
      if (lambda_min(sc) >= threshold) ++good;
    out[0] = 4 * good >= 3 * m ? 1.0 : 0.0;
  };
  EstimatorReport rep =
      probability_report(run_mc_means(run, "bucket-goodness", 1, sample)[0], run, "buckets");
  rep.metadata["m"] = std::to_string(m);
  rep.metadata["threshold"] = std::to_string(threshold);
  return rep;
}

namespace {

struct MomentStats {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

// Runs one MC pass collecting mean and standard error for several statistics
// of the random sign combination sum_i x_i A^i.
std::vector<MomentStats> mc_moments(const std::vector<SymMatrix>& family,
                                    const std::function<void(const SymMatrix&, std::span<double>)>& stats,
                                    int dims, const EstimatorConfig& cfg,
                                    std::string_view label) {
  const int n = static_cast<int>(family.size());
  auto sample = [&family, &stats, n, dims](CounterRng& rng, std::span<double> out) {
    SymMatrix m(family.front().dim());
    for (int i = 0; i < n; ++i) m.axpy(rng.next_sign(), family[i]);
    stats(m, out.subspan(0, dims));
    for (int d = 0; d < dims; ++d) out[dims + d] = out[d] * out[d];
  };
  const std::vector<double> means = run_mc_means(cfg, label, 2 * dims, sample);
  std::vector<MomentStats> out(dims);
  for (int d = 0; d < dims; ++d) {
    out[d].mean = means[d];
    const double var = std::max(0.0, means[dims + d] - means[d] * means[d]);
    out[d].se = std::sqrt(var / double(cfg.samples));
  }
  return out;
}

SymMatrix family_square_sum(const std::vector<SymMatrix>& family) {
  SymMatrix sq(family.front().dim());
  for (const SymMatrix& a : family) {
    const EigDecomposition eig = eig_sym(a);
    std::vector<double> l2(eig.eigenvalues);
    for (double& v : l2) v *= v;
    sq += conjugate_diag(eig.eigenvectors, l2);
  }
  return sq;
}

}  // namespace

std::vector<FactCheckResult> check_norm_moment(const std::vector<SymMatrix>& family,
                                               std::span<const int> moments,
                                               const EstimatorConfig& cfg) {
  if (family.empty()) throw std::invalid_argument("check_norm_moment: empty family");
  const int k = family.front().dim();
  const int dims = static_cast<int>(moments.size());
  std::vector<int> ms(moments.begin(), moments.end());
  auto stats = [ms](const SymMatrix& m, std::span<double> out) {
    const double v = spectral_norm(m);
    for (size_t d = 0; d < ms.size(); ++d) out[d] = std::pow(v, ms[d]);
  };
  const std::vector<MomentStats> st = mc_moments(family, stats, dims, cfg, "norm-moment");

  const double sigma2 = spectral_norm(family_square_sum(family));
  const int log_k = std::max(1, int(std::ceil(std::log2(double(std::max(k, 2))))));
  std::vector<FactCheckResult> results;
  for (int d = 0; d < dims; ++d) {
    const int m = ms[d];
    FactCheckResult r;
    r.fact = "norm-moment";
    r.config = "m=" + std::to_string(m);
    r.lhs = st[d].mean;
    r.rhs = std::pow(1.0 + 2.0 * m * log_k, 0.5 * m) * std::pow(sigma2, 0.5 * m);
    r.slack = st[d].mean > 0.0 ? 3.0 * st[d].se / st[d].mean : 0.0;
    r.pass = r.lhs <= r.rhs * (1.0 + r.slack);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<FactCheckResult> check_rosenthal(const std::vector<SymMatrix>& family,
                                             std::span<const int> ps,
                                             const EstimatorConfig& cfg) {
  if (family.empty()) throw std::invalid_argument("check_rosenthal: empty family");
  const int dims = static_cast<int>(ps.size());
  std::vector<int> orders(ps.begin(), ps.end());
  auto stats = [orders](const SymMatrix& m, std::span<double> out) {
    for (size_t d = 0; d < orders.size(); ++d) {
      const double p4 = 4.0 * orders[d];
      out[d] = std::pow(schatten_norm(m, p4), p4);
    }
  };
  const std::vector<MomentStats> st = mc_moments(family, stats, dims, cfg, "rosenthal");

  const SymMatrix sq = family_square_sum(family);
  const SymMatrix sq_root = spectral_map(eig_sym(sq), [](double l) {
    return std::sqrt(std::max(0.0, l));
  });

  std::vector<FactCheckResult> results;
  for (int d = 0; d < dims; ++d) {
    const double p4 = 4.0 * orders[d];
    double tail = 0.0;
    for (const SymMatrix& a : family) tail += std::pow(schatten_norm(a, p4), p4);
    FactCheckResult r;
    r.fact = "rosenthal";
    r.config = "p=" + std::to_string(orders[d]);
    r.lhs = std::pow(st[d].mean, 1.0 / p4);
    r.rhs = std::sqrt(p4 - 1.0) * schatten_norm(sq_root, p4) +
            (p4 - 1.0) * std::pow(tail, 1.0 / p4);
    r.slack = st[d].mean > 0.0 ? 3.0 * st[d].se / st[d].mean : 0.0;
    r.pass = r.lhs <= r.rhs * std::pow(1.0 + r.slack, 1.0 / p4);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<FactCheckResult> check_chernoff(const std::vector<SymMatrix>& family,
                                            std::span<const double> deltas,
                                            const EstimatorConfig& cfg) {
  if (family.empty()) throw std::invalid_argument("check_chernoff: empty family");
  const int k = family.front().dim();
  const int n = static_cast<int>(family.size());
  SymMatrix mean_sum(k);
  double r_bound = 0.0;
  for (const SymMatrix& a : family) {
    mean_sum.axpy(0.5, a);
    r_bound = std::max(r_bound, lambda_max(a));
  }
  const double mu = lambda_min(mean_sum);

  const int dims = static_cast<int>(deltas.size());
  std::vector<double> ds(deltas.begin(), deltas.end());
  auto sample = [&family, n, k, mu, ds](CounterRng& rng, std::span<double> out) {
    SymMatrix m(k);
    for (int i = 0; i < n; ++i)
      if (rng.next_bool(0.5)) m.axpy(1.0, family[i]);
    const double lmin = lambda_min(m);
    for (size_t d = 0; d < ds.size(); ++d)
      out[d] = lmin <= (1.0 - ds[d]) * mu ? 1.0 : 0.0;
  };
  const std::vector<double> means = run_mc_means(cfg, "chernoff", dims, sample);

  std::vector<FactCheckResult> results;
  const double radius = cfg.hoeffding_radius(cfg.samples);
  for (int d = 0; d < dims; ++d) {
    const double delta = ds[d];
    FactCheckResult r;
    r.fact = "chernoff";
    r.config = "delta=" + std::to_string(delta);
    r.lhs = means[d];
    const double base = std::exp(-delta) / std::pow(1.0 - delta, 1.0 - delta);
    r.rhs = std::min(1.0, double(k) * std::pow(base, mu / r_bound));
    r.slack = 3.0 * radius;
    r.pass = r.lhs <= r.rhs + r.slack;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace spectra
