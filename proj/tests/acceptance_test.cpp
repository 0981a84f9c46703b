// Acceptance suite: one quantitative check per claim, each printed as a
// single pass/fail line. Run via ctest or directly; exits non-zero if any
// check fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "spectra/estimators.hpp"
#include "spectra/gf2.hpp"
#include "spectra/mollifier.hpp"
#include "spectra/prg.hpp"
#include "spectra/rng.hpp"
#include "spectra/scalar_function.hpp"
#include "spectra/spectral_deriv.hpp"
#include "spectra/spectrahedron.hpp"

using namespace spectra;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

SymMatrix random_sym(int k, CounterRng& rng, double norm = 0.0) {
  SymMatrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) m.set(i, j, rng.next_gaussian());
  if (norm > 0.0) m.scale(norm / spectral_norm(m));
  return m;
}

Matrix random_orthogonal(int k, CounterRng& rng) {
  return eig_sym(random_sym(k, rng)).eigenvectors;
}

// Symmetric matrix with prescribed eigenvalue gaps (>= gap each).
SymMatrix gapped_sym(int k, CounterRng& rng, double gap) {
  std::vector<double> l(k);
  l[0] = rng.next_unit();
  for (int i = 1; i < k; ++i) l[i] = l[i - 1] - gap * (1.0 + rng.next_unit());
  return conjugate_diag(random_orthogonal(k, rng), l);
}

// Visits all 2^n sign vectors with an incremental pencil update.
void enumerate_gray(const PositiveSpectrahedron& s,
                    const std::function<void(std::span<const double>, const SymMatrix&)>& visit) {
  const int n = s.n();
  std::vector<double> x(n, 1.0);
  SymMatrix m = -1.0 * SymMatrix(s.b());
  for (int i = 0; i < n; ++i) m.axpy(1.0, s.a(i));
  const uint64_t total = 1ull << n;
  for (uint64_t code = 0;;) {
    visit(x, m);
    if (++code == total) break;
    const int bit = std::countr_zero(code);
    x[bit] = -x[bit];
    m.axpy(2.0 * x[bit], s.a(bit));
  }
}

// Shifts the offset so the stated percentile of lambda_max over random sign
// vectors lands at `target`; keeps the declared envelope consistent.
PositiveSpectrahedron shift_offset(const PositiveSpectrahedron& s, uint64_t seed,
                                   double percentile, double target) {
  CounterRng rng(seed, "recenter");
  std::vector<double> vals;
  std::vector<double> x(s.n());
  for (int t = 0; t < 200; ++t) {
    for (double& v : x) v = rng.next_sign();
    vals.push_back(s.lambda_max_at(x));
  }
  const auto nth = vals.begin() + int(percentile * 199.0);
  std::nth_element(vals.begin(), nth, vals.end());
  const double q = *nth - target;
  SymMatrix b = s.b();
  for (int i = 0; i < s.k(); ++i) b.set(i, i, b(i, i) + q);
  const double gamma = spectral_norm(b) + 1e-9;
  std::vector<SymMatrix> a = s.coefficients();
  return PositiveSpectrahedron(std::move(a), std::move(b), s.sign(), s.declared_tau(),
                               s.declared_m(), gamma);
}

double fit_slope(std::span<const double> xs, std::span<const double> ys, double* intercept) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

// ---------------------------------------------------------------------------
// A1: exact wise-ness of both polynomial primitives, by full enumeration.
Outcome a1_exact_wiseness() {
  const KWiseBitGenerator gen(8, 3, 4);
  const int total = 1 << 12;
  // Every subset of size <= 3 must produce every sign pattern equally often.
  for (int mask = 1; mask < 256; ++mask) {
    if (std::popcount(unsigned(mask)) > 3) continue;
    std::vector<int> idx;
    for (int i = 0; i < 8; ++i)
      if (mask >> i & 1) idx.push_back(i);
    std::vector<int> counts(size_t(1) << idx.size(), 0);
    for (int s = 0; s < total; ++s) {
      const std::array<uint32_t, 3> seed = {uint32_t(s) & 0xf, (uint32_t(s) >> 4) & 0xf,
                                            (uint32_t(s) >> 8) & 0xf};
      int pattern = 0;
      for (size_t b = 0; b < idx.size(); ++b)
        pattern = pattern << 1 | (gen.bit_at(seed, idx[b]) < 0 ? 1 : 0);
      ++counts[pattern];
    }
    for (int c : counts)
      if (c != total >> idx.size()) return {false, "bit generator marginal skewed"};
  }

  const HashFamily h(4, 2, 2, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      std::array<int, 4> counts{};
      for (uint32_t s = 0; s < 16; ++s) {
        const std::array<uint32_t, 2> seed = {s & 3u, (s >> 2) & 3u};
        ++counts[2 * h.eval(seed, i) + h.eval(seed, j)];
      }
      for (int c : counts)
        if (c != 4) return {false, "hash pair marginal skewed"};
    }
  return {true, "all marginals exactly uniform"};
}

// A2: with t = 1 and w >= n the seed space can be exhausted and the fooling
// error is exactly zero.
Outcome a2_degenerate_exactness() {
  InstanceParams p;
  p.n = 4;
  p.k = 2;
  p.tau = 1.0;
  p.m = 4.0;
  p.gamma = 1.0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const PositiveSpectrahedron s = random_regular_instance(p, seed);
    const MZGenerator gen(p.n, p.k, p.tau, 4);
    if (gen.t() != 1) return {false, "expected a single bucket"};
    EstimatorConfig cfg;
    cfg.samples = 0;
    cfg.master_seed = seed;
    const EstimatorReport rep = fooling_error(s, gen, 1u << 20, cfg);
    if (rep.metadata.at("exhaustive") != "1") return {false, "seed space not exhausted"};
    if (rep.estimate != 0.0)
      return {false, "instance " + std::to_string(seed) + " error " + fmt(rep.estimate)};
  }
  return {true, "10/10 instances fooled exactly"};
}

// A3: desk-scale fooling on regular instances, exact reference side.
Outcome a3_desk_scale_fooling() {
  InstanceParams p;
  p.n = 16;
  p.k = 3;
  p.tau = 0.25;
  p.m = 2.0;
  p.gamma = 1.0;
  int good = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    // Redraw until no enumerated point sits within 1e-6 of the boundary.
    PositiveSpectrahedron s = random_regular_instance(p, 100 + inst);
    for (int attempt = 0;; ++attempt) {
      double min_abs = 1e300;
      enumerate_gray(s, [&](std::span<const double>, const SymMatrix& m) {
        min_abs = std::min(min_abs, std::abs(lambda_max(m)));
      });
      if (min_abs > 1e-6) break;
      if (attempt > 50) return {false, "could not avoid the boundary"};
      s = random_regular_instance(p, 100 + inst + 1000 * (attempt + 1));
    }
    uint64_t hits = 0;
    enumerate_gray(s, [&](std::span<const double>, const SymMatrix& m) {
      hits += lambda_max(m) <= 0.0;
    });
    const double exact = double(hits) / double(1ull << p.n);

    const MZGenerator gen(p.n, p.k, p.tau, 6);
    EstimatorConfig cfg;
    cfg.master_seed = 7000 + inst;
    const EstimatorReport prg =
        accept_prob_prg(membership_function(s), gen, 1000000, cfg);
    const double err = std::abs(exact - prg.estimate);
    worst = std::max(worst, err);
    if (err <= 0.05) ++good;
  }
  std::ostringstream os;
  os << good << "/20 within 0.05, worst " << fmt(worst);
  return {good >= 18, os.str()};
}

// A4: first and second derivatives against finite differences and the
// integral representations.
Outcome a4_frechet_low_order() {
  CounterRng rng(404, "a4");
  const std::array<ScalarFunction, 3> fns = {exp_function(), gauss_kernel_function(),
                                             gauss_cdf_function()};
  double worst_d1 = 0.0, worst_d2 = 0.0, worst_cross = 0.0;
  for (const ScalarFunction& f : fns) {
    for (int trial = 0; trial < 100; ++trial) {
      const int k = 2 + int(rng.next_below(5));
      const SymMatrix x = random_sym(k, rng, 1.5);
      const SymMatrix a = random_sym(k, rng, 1.0);
      const SymMatrix b = random_sym(k, rng, 1.0);

      const SymMatrix d1 = frechet_d1(f, x, a);
      const SymMatrix fd1 = fd_matrix_d1(f, x, a);
      worst_d1 = std::max(worst_d1, (d1 - fd1).max_abs() / std::max(1.0, fd1.max_abs()));

      const SymMatrix d2 = frechet_d2(f, x, a, a);
      const SymMatrix fd2 = fd_matrix_d2(f, x, a);
      worst_d2 = std::max(worst_d2, (d2 - fd2).max_abs() / std::max(1.0, fd2.max_abs()));

      if (f.name == "exp") {
        const SymMatrix dy = dyson_d1_exp(x, a, 64);
        worst_cross = std::max(worst_cross, (d1 - dy).max_abs() / std::max(1.0, dy.max_abs()));
      } else if (f.name == "gauss_kernel") {
        const SymMatrix di = d2_gauss_integral(x, a, b, 48);
        const SymMatrix dd = frechet_d2(f, x, a, b);
        worst_cross = std::max(worst_cross, (dd - di).max_abs() / std::max(1.0, di.max_abs()));
      }
    }
  }
  std::ostringstream os;
  os << "d1 " << fmt(worst_d1) << ", d2 " << fmt(worst_d2) << ", cross " << fmt(worst_cross);
  return {worst_d1 <= 1e-6 && worst_d2 <= 1e-5 && worst_cross <= 1e-7, os.str()};
}

// A5: the seven-term third derivative against the FD oracle for the product
// mollifier profile.
Outcome a5_third_order() {
  CounterRng rng(505, "a5");
  const BentkusProduct f = BentkusProduct::plain();
  int good = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix x = gapped_sym(4, rng, 0.3);
    const SymMatrix h = random_sym(4, rng, 1.0);
    const double analytic = frechet_d3_spectral(f, x, h);
    auto big_f = [](const SymMatrix& m) { return G(eig_sym(m).eigenvalues); };
    const double step = 5e-3 * (1.0 + spectral_norm(x));
    const double fd = fd_directional(big_f, x, h, 3, step);
    const double rel = std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
    worst = std::max(worst, rel);
    if (rel <= 1e-4) ++good;
  }
  std::ostringstream os;
  os << good << "/100 within 1e-4, worst " << fmt(worst);
  return {good >= 98, os.str()};
}

// A6: the smoothed third derivative against its reference envelope across a
// (k, theta) battery; the empirical constant must not grow with k.
Outcome a6_derivative_bound() {
  CounterRng rng(606, "a6");
  const std::array<int, 4> ks = {2, 4, 8, 16};
  const std::array<double, 3> thetas = {0.25, 0.5, 1.0};
  std::array<double, 4> max_ratio{};
  for (size_t ki = 0; ki < ks.size(); ++ki) {
    const int k = ks[ki];
    for (double theta : thetas) {
      MollifierParams params;
      params.k = k;
      params.theta = theta;
      params.delta = 0.01;
      const double alpha = params.alpha();
      for (int inst = 0; inst < 50; ++inst) {
        const double delta_norm = 1.0 + rng.next_unit();
        const SymMatrix x = random_sym(k, rng, delta_norm);
        const SymMatrix h = random_sym(k, rng, 1.0);
        // Both shift directions; the inward shift is the non-trivial one.
        for (double shift : {alpha, -alpha}) {
          const DerivativeReport rep = bentkus_d3_bound_check(x, h, theta, shift);
          if (!std::isfinite(rep.ratio)) return {false, "non-finite ratio"};
          max_ratio[ki] = std::max(max_ratio[ki], rep.ratio);
        }
      }
    }
  }
  double overall = 0.0;
  for (double r : max_ratio) overall = std::max(overall, r);
  std::ostringstream os;
  os << "empirical constant " << fmt(overall) << " (k=2: " << fmt(max_ratio[0])
     << ", k=16: " << fmt(max_ratio[3]) << ")";
  const bool no_growth = max_ratio[3] <= 2.0 * max_ratio[0];
  return {std::isfinite(overall) && no_growth, os.str()};
}

// A7: all three sandwich clauses at random points.
Outcome a7_sandwich() {
  for (double theta : {0.1, 0.5}) {
    MollifierParams params;
    params.k = 8;
    params.theta = theta;
    params.delta = 0.01;
    params.c_shift = 2.0;
    CounterRng rng(707, "a7-" + std::to_string(theta));
    const double span = 2.0 * params.lambda();
    std::vector<double> x(params.k);
    for (int point = 0; point < 10000; ++point) {
      for (double& v : x) v = span * (2.0 * rng.next_unit() - 1.0);
      const SandwichReport rep = sandwich_check(params, x);
      if (!rep.pass)
        return {false, "clause failed at theta " + fmt(theta)};
    }
  }
  return {true, "3 clauses x 2 thetas x 10^4 points"};
}

// A8: analytic identities of the scalar mollifier machinery.
Outcome a8_identities() {
  // Logarithmic-derivative identity via central differences.
  const double h = 1e-5;
  for (double u = -6.0; u <= 6.0 + 1e-12; u += 0.01) {
    const double fd = (gbar(u + h) - gbar(u - h)) / (2.0 * h);
    if (std::abs(fd + (u + gbar(u)) * gbar(u)) > 1e-9)
      return {false, "derivative identity residual at u=" + fmt(u)};
  }
  // Pointwise tail bracket on (0, 10]; the tail is Phi(-x) by symmetry,
  // which stays accurate where 1 - Phi(x) would cancel.
  for (double x = 0.01; x <= 10.0 + 1e-12; x += 0.01) {
    const double tail = norm_cdf(-x);
    const double phi = std::exp(-0.5 * x * x) / 2.5066282746310005024;
    if (tail > phi / x * (1.0 + 1e-12)) return {false, "upper tail bound at x=" + fmt(x)};
    if (tail < phi * (1.0 / x - 1.0 / (x * x * x)) * (1.0 - 1e-12))
      return {false, "lower tail bound at x=" + fmt(x)};
  }
  // Difference-quotient bound on a 200 x 200 grid.
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const double y = -6.0 + 12.0 * j / 199.0;
      const double x = y + 1e-3 + 6.0 * i / 199.0;
      const double lhs =
          std::abs((norm_cdf(x) * g_derivs(y).d1 - g_derivs(x).d1 * norm_cdf(y)) / (x - y));
      if (lhs > (1.0 + std::abs(x)) * std::exp(-0.5 * y * y) * (1.0 + 1e-12))
        return {false, "difference quotient bound"};
    }
  // First-derivative tensor norm envelope.
  CounterRng rng(808, "a8");
  for (int k : {2, 4, 16, 64, 256}) {
    const double cap = 3.0 * std::sqrt(std::log(double(k + 1)));
    std::vector<double> x(k);
    for (int point = 0; point < 10000; ++point) {
      for (double& v : x) v = 3.0 * rng.next_gaussian();
      if (bentkus_norm1(x, 1) > cap) return {false, "norm envelope at k=" + std::to_string(k)};
    }
  }
  return {true, "derivative identity, tail bracket, quotient bound, norm envelope"};
}

// A9: noise-sensitivity exponent on a log-log grid.
Outcome a9_noise_sensitivity() {
  InstanceParams p;
  p.n = 200;
  p.k = 4;
  p.tau = 0.1;
  p.m = 2.0;
  p.gamma = 1.0;
  const PositiveSpectrahedron s = random_regular_instance(p, 909);
  const BooleanFunction f = membership_function(s);
  std::vector<double> log_eps, log_ns;
  EstimatorConfig cfg;
  cfg.samples = 100000;
  for (int j = 3; j <= 9; ++j) {
    const double eps = std::pow(2.0, -j);
    cfg.master_seed = hash_label(909, "ns-" + std::to_string(j));
    const EstimatorReport rep = noise_sensitivity(f, eps, cfg);
    if (rep.estimate <= 0.0) return {false, "vanishing estimate at eps=" + fmt(eps)};
    log_eps.push_back(std::log(eps));
    log_ns.push_back(std::log(rep.estimate));
  }
  const double slope = fit_slope(log_eps, log_ns, nullptr);
  return {slope >= 0.35 && slope <= 0.65, "fitted exponent " + fmt(slope)};
}

// A10: average-sensitivity exponent across n.
Outcome a10_average_sensitivity() {
  std::vector<double> log_n, log_as;
  EstimatorConfig cfg;
  cfg.samples = 100000;
  for (int n : {64, 256, 1024}) {
    InstanceParams p;
    p.n = n;
    p.k = 4;
    p.tau = 1.5 / std::sqrt(double(n));
    p.m = 2.0;
    p.gamma = 1.0;
    const SpectrahedronPair raw = random_regular_pair(p, 1010 + n);
    const SpectrahedronPair pair(shift_offset(raw.s1, 1010 + n, 0.65, 0.0),
                                 shift_offset(raw.s2, 2010 + n, 0.65, 0.0));
    const BooleanFunction f = membership_function(pack_intersection(pair));
    cfg.master_seed = hash_label(1010, "as-" + std::to_string(n));
    const EstimatorReport rep = average_sensitivity(f, cfg);
    if (rep.estimate <= 0.0) return {false, "vanishing estimate at n=" + std::to_string(n)};
    log_n.push_back(std::log(double(n)));
    log_as.push_back(std::log(rep.estimate));
  }
  const double slope = fit_slope(log_n, log_as, nullptr);
  return {slope >= 0.35 && slope <= 0.65, "fitted exponent " + fmt(slope)};
}

// A11: shell probability grows linearly from a near-zero intercept.
Outcome a11_anti_concentration() {
  InstanceParams p;
  p.n = 20000;
  p.k = 2;
  p.tau = 0.01;
  p.m = 2.0;
  p.gamma = 1.0;
  const SpectrahedronPair raw = random_regular_pair(p, 1111);
  // Boundary-shell regime: the pencil's lambda_max rarely dips below the
  // grid, so the shell mass stays O(lambda) as the claim describes.
  const SpectrahedronPair pair(shift_offset(raw.s1, 1111, 0.15, 0.55),
                               shift_offset(raw.s2, 2222, 0.15, 0.55));
  // Grid spans [20 tau log2 k, 0.5].
  const double lo = 20.0 * p.tau * std::log2(double(p.k));
  std::vector<double> grid;
  for (int i = 0; i < 7; ++i) grid.push_back(lo + (0.5 - lo) * i / 6.0);
  EstimatorConfig cfg;
  cfg.samples = 50000;
  cfg.master_seed = 1111;
  const auto curve = anti_concentration_curve(pair, grid, SampleSource::kUniform, cfg);
  std::vector<double> est;
  for (const auto& rep : curve) est.push_back(rep.estimate);
  for (size_t i = 1; i < est.size(); ++i)
    if (est[i] < est[i - 1]) return {false, "estimate not monotone"};
  double intercept = 0.0;
  const double slope = fit_slope(grid, est, &intercept);
  const double radius = cfg.hoeffding_radius(cfg.samples);
  std::ostringstream os;
  os << "slope " << fmt(slope) << ", intercept " << fmt(intercept) << " vs 2r=" << fmt(2 * radius);
  return {std::isfinite(slope) && intercept <= 2.0 * radius, os.str()};
}

// A12: bucketing goodness in the prescribed regime.
Outcome a12_bucketing() {
  InstanceParams p;
  p.n = 500;
  p.k = 4;
  p.tau = 0.2;
  p.m = 2.0;
  p.gamma = 1.0;
  const PositiveSpectrahedron s = random_regular_instance(p, 1212);
  const int m =
      std::max(1, int(std::ceil(1.0 / (10.0 * p.tau * p.tau * std::log2(double(p.k))))));
  EstimatorConfig cfg;
  cfg.master_seed = 1212;
  const EstimatorReport rep = bucket_goodness(s, m, 1000, cfg);
  const double floor = 1.0 - std::exp(-m / 4.0) - 3.0 * rep.radius;
  std::ostringstream os;
  os << "m=" << m << ", fraction " << fmt(rep.estimate) << " vs floor " << fmt(floor);
  return {rep.estimate >= floor, os.str()};
}

// A13: moment, Rosenthal and Chernoff inequalities on random families.
Outcome a13_matrix_facts() {
  const std::array<int, 3> moments = {2, 4, 6};
  const std::array<int, 2> ps = {1, 2};
  const std::array<double, 2> deltas = {0.25, 0.5};
  InstanceParams p;
  p.n = 80;
  p.k = 3;
  p.tau = 0.125;
  p.m = 2.0;
  p.gamma = 1.0;
  for (int family = 0; family < 100; ++family) {
    const PositiveSpectrahedron s = random_regular_instance(p, 1300 + family);
    EstimatorConfig cfg;
    cfg.samples = 2000;
    cfg.master_seed = 1300 + family;
    for (const auto& r : check_norm_moment(s.coefficients(), moments, cfg))
      if (!r.pass) return {false, "norm moment " + r.config};
    for (const auto& r : check_rosenthal(s.coefficients(), ps, cfg))
      if (!r.pass) return {false, "rosenthal " + r.config};
    for (const auto& r : check_chernoff(s.coefficients(), deltas, cfg))
      if (!r.pass) return {false, "chernoff " + r.config};
  }
  return {true, "100 families x 7 configurations"};
}

// A14: eigenvalue membership equals the leading-minor route off the boundary.
Outcome a14_sylvester() {
  InstanceParams p;
  p.n = 12;
  p.k = 3;
  p.tau = 0.3;
  p.m = 2.0;
  p.gamma = 1.0;
  for (int inst = 0; inst < 20; ++inst) {
    const PositiveSpectrahedron s = random_regular_instance(p, 1400 + inst);
    bool ok = true;
    enumerate_gray(s, [&](std::span<const double> x, const SymMatrix& m) {
      const double lm = lambda_max(m);
      if (std::abs(lm) <= 1e-6) return;
      if ((lm <= 0.0) != sylvester_contains(s, x)) ok = false;
    });
    if (!ok) return {false, "disagreement on instance " + std::to_string(inst)};
  }
  return {true, "20 instances x 4096 points"};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*run)();
  };
  const std::array<Entry, 14> entries = {{
      {"A1 exact k-wise uniformity", a1_exact_wiseness},
      {"A2 degenerate PRG exactness", a2_degenerate_exactness},
      {"A3 desk-scale fooling", a3_desk_scale_fooling},
      {"A4 Frechet orders 1-2", a4_frechet_low_order},
      {"A5 third-order spectral derivative", a5_third_order},
      {"A6 derivative bound battery", a6_derivative_bound},
      {"A7 mollifier sandwich", a7_sandwich},
      {"A8 analytic identities", a8_identities},
      {"A9 noise-sensitivity exponent", a9_noise_sensitivity},
      {"A10 average-sensitivity exponent", a10_average_sensitivity},
      {"A11 anti-concentration slope", a11_anti_concentration},
      {"A12 bucketing goodness", a12_bucketing},
      {"A13 matrix inequality checks", a13_matrix_facts},
      {"A14 membership oracle equivalence", a14_sylvester},
  }};

  int failures = 0;
  for (const Entry& e : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s (%.1fs): %s\n", out.pass ? "PASS" : "FAIL", e.name, secs,
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
