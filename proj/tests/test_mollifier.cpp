#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "spectra/mollifier.hpp"
#include "spectra/rng.hpp"

using namespace spectra;

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;
}

TEST_CASE("normal CDF symmetry") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double x : {0.5, 1.0, 3.0})
    CHECK(norm_cdf(x) + norm_cdf(-x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gaussian tail bracket at x = 3") {
  const double phi3 = std::exp(-4.5) / kSqrt2Pi;
  const double tail = 1.0 - norm_cdf(3.0);
  CHECK(tail >= phi3 * (1.0 / 3.0 - 1.0 / 27.0));
  CHECK(tail <= phi3 / 3.0);
}

TEST_CASE("derivative closed forms at special points") {
  CHECK(g_derivs(0.0).d1 == doctest::Approx(1.0 / kSqrt2Pi).epsilon(1e-15));
  CHECK(g_derivs(0.0).d2 == 0.0);
  CHECK(g_derivs(1.0).d3 == 0.0);
}

TEST_CASE("log CDF matches high-precision tail references") {
  // Reference values computed with 40-digit arithmetic.
  const std::array<std::pair<double, double>, 5> refs = {{
      {-8.0, -35.0134371599145498955},
      {-10.0, -53.23128515051247057835},
      {-20.0, -203.9171553710972639368},
      {-35.0, -616.9751012619225134732},
      {-40.0, -804.6084420137537881666},
  }};
  for (const auto& pair : refs) {
    const double x = pair.first;
    const double ref = pair.second;
    CAPTURE(x);
    CHECK(std::abs(log_norm_cdf(x) - ref) <= 1e-12 * std::abs(ref));
  }
  CHECK(std::abs(norm_cdf(-3.0) - 0.001349898031630094526652) < 1e-17);
}

TEST_CASE("gbar value, monotonicity and envelope") {
  CHECK(gbar(0.0) == doctest::Approx(2.0 / kSqrt2Pi).epsilon(1e-14));
  CHECK(gbar(-5.0) > gbar(0.0));
  CHECK(gbar(0.0) > gbar(5.0));
  for (double delta : {1.0, 2.0, 5.0})
    for (double x = -delta; x <= delta + 1e-12; x += 0.01)
      CHECK(std::abs(gbar(x)) <= 2.0 * delta);
}

TEST_CASE("gbar satisfies its first-derivative identity") {
  const double h = 1e-5;
  for (double u = -6.0; u <= 6.0 + 1e-12; u += 0.05) {
    const double fd = (gbar(u + h) - gbar(u - h)) / (2.0 * h);
    CHECK(std::abs(fd + (u + gbar(u)) * gbar(u)) <= 1e-9);
  }
}

TEST_CASE("gbar second derivative matches finite differences of the first") {
  const double h = 1e-5;
  for (double u = -5.0; u <= 5.0 + 1e-12; u += 0.25) {
    const double fd = (gbar_d1(u + h) - gbar_d1(u - h)) / (2.0 * h);
    CHECK(gbar_d2(u) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("product mollifier basics") {
  const std::vector<double> zeros(5, 0.0);
  CHECK(G(zeros) == doctest::Approx(std::pow(2.0, -5.0)).epsilon(1e-14));
  CHECK(G(std::array{0.7}) == doctest::Approx(norm_cdf(0.7)).epsilon(1e-14));

  // Bit-identical under permutation thanks to the sorted log-sum.
  const std::vector<double> x = {0.3, -1.2, 2.5, -0.1};
  const std::vector<double> perm = {2.5, -0.1, 0.3, -1.2};
  CHECK(G(x) == G(perm));
}

TEST_CASE("log_G equals the sum of log CDFs deep in the tail") {
  const std::vector<double> x = {-35.0, -1.0, 2.0, -35.0};
  double expect = 0.0;
  for (double v : x) expect += log_norm_cdf(v);
  CHECK(std::abs(log_G(x) - expect) <= 1e-12 * std::abs(expect));
}

TEST_CASE("G_theta at the corners") {
  const std::vector<double> zeros(4, 0.0);
  CHECK(G_theta(zeros, 0.3) == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  const std::vector<double> deep(4, -10.0 * 0.3);
  CHECK(G_theta(deep, 0.3) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(G_theta(zeros, 0.0), std::invalid_argument);
}

TEST_CASE("G_theta matches the Monte-Carlo smoothing probability") {
  const double theta = 0.7;
  const std::vector<double> x = {0.4, -0.3, 0.1};
  CounterRng rng(31, "gtheta-mc");
  const int n = 1000000;
  int hits = 0;
  for (int s = 0; s < n; ++s) {
    bool inside = true;
    for (double xi : x)
      if (xi + theta * rng.next_gaussian() > 0.0) inside = false;
    hits += inside;
  }
  const double mc = double(hits) / n;
  const double p = G_theta(x, theta);
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(mc - p) <= 4.5 * sigma);
}

TEST_CASE("G_theta is non-increasing in every coordinate") {
  CounterRng rng(77, "monotone");
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(5);
    for (double& v : x) v = 2.0 * rng.next_gaussian();
    const double base = G_theta(x, 0.6);
    const int i = int(rng.next_below(5));
    std::vector<double> bumped = x;
    bumped[i] += 0.25 + rng.next_unit();
    CHECK(G_theta(bumped, 0.6) <= base);
  }
}

TEST_CASE("orthant indicator uses the closed orthant") {
  CHECK(psi(std::array{-1.0, -2.0}));
  CHECK_FALSE(psi(std::array{-1.0, 0.1}));
  CHECK(psi(std::array{0.0, 0.0}));
}

TEST_CASE("Psi_theta on matrices") {
  const double theta = 0.4;
  CHECK(Psi_theta(SymMatrix::identity(2, -10.0 * theta), theta) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(Psi_theta(SymMatrix(3), theta) == doctest::Approx(0.125).epsilon(1e-13));

  // Spectral function: invariant under orthogonal conjugation.
  CounterRng rng(3);
  SymMatrix m(4), g(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      m.set(i, j, rng.next_gaussian());
      g.set(i, j, rng.next_gaussian());
    }
  const Matrix u = eig_sym(g).eigenvectors;
  CHECK(Psi_theta(conjugate(u, m), theta) == doctest::Approx(Psi_theta(m, theta)).epsilon(1e-12));
}

namespace {

// Independent oracle: the l1 norm summed over all ordered index tuples, with
// each mixed partial assembled directly from g and its derivatives.
double norm1_brute(std::span<const double> x, int order) {
  const int k = static_cast<int>(x.size());
  std::vector<int> tuple(order, 0);
  double total = 0.0;
  for (;;) {
    std::vector<int> count(k, 0);
    for (int t : tuple) ++count[t];
    double term = 1.0;
    for (int i = 0; i < k; ++i) {
      const GDerivs d = g_derivs(x[i]);
      switch (count[i]) {
        case 0: term *= norm_cdf(x[i]); break;
        case 1: term *= d.d1; break;
        case 2: term *= d.d2; break;
        default: term *= d.d3; break;
      }
    }
    total += std::abs(term);
    int pos = order - 1;
    while (pos >= 0 && ++tuple[pos] == k) tuple[pos--] = 0;
    if (pos < 0) break;
  }
  return total;
}

}  // namespace

TEST_CASE("derivative tensor l1 norm against the brute-force oracle") {
  CHECK(bentkus_norm1(std::array{0.0}, 1) == doctest::Approx(1.0 / kSqrt2Pi).epsilon(1e-14));
  CounterRng rng(8, "norm1");
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(4);
    for (double& v : x) v = 3.0 * rng.next_gaussian();
    for (int order : {1, 2, 3}) {
      CAPTURE(order);
      CHECK(bentkus_norm1(x, order) == doctest::Approx(norm1_brute(x, order)).epsilon(1e-10));
    }
  }
}

TEST_CASE("the l1 norm collapses once many coordinates are non-positive") {
  // k = 8 with four coordinates at or below -3.
  const std::vector<double> x = {-3.0, -3.5, -4.0, -3.2, 0.5, 1.0, -0.2, 2.0};
  CHECK(bentkus_norm1(x, 1) < 0.7);
}

TEST_CASE("first-order norm stays within the sqrt-log envelope") {
  CounterRng rng(12, "norm-growth");
  for (int k : {2, 8, 64, 256}) {
    double worst = 0.0;
    std::vector<double> x(k);
    for (int trial = 0; trial < 300; ++trial) {
      for (double& v : x) v = 3.0 * rng.next_gaussian();
      worst = std::max(worst, bentkus_norm1(x, 1));
    }
    CHECK(worst <= 3.0 * std::sqrt(std::log(double(k + 1))));
  }
}

TEST_CASE("difference quotient bound from the CDF product rule") {
  // |(g(x)g'(y) - g'(x)g(y)) / (x - y)| <= (1 + |x|) exp(-y^2/2) for x > y.
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double y = -5.0 + 10.0 * j / 49.0;
      const double x = y + 1e-3 + 6.0 * i / 49.0;
      const double lhs =
          std::abs((norm_cdf(x) * g_derivs(y).d1 - g_derivs(x).d1 * norm_cdf(y)) / (x - y));
      CHECK(lhs <= (1.0 + std::abs(x)) * std::exp(-0.5 * y * y) * (1.0 + 1e-12));
    }
}

TEST_CASE("sandwich clauses hold at random points") {
  MollifierParams params;
  params.k = 8;
  params.theta = 0.5;
  params.delta = 0.01;
  CHECK(params.lambda() == doctest::Approx(2.0 * params.alpha()));

  CounterRng rng(55, "sandwich");
  std::vector<double> x(params.k);
  const double span = 2.0 * params.lambda();
  for (int trial = 0; trial < 2000; ++trial) {
    for (double& v : x) v = span * (2.0 * rng.next_unit() - 1.0);
    const SandwichReport rep = sandwich_check(params, x);
    CHECK(rep.pass);
  }
}

TEST_CASE("sandwich boundary regions engage the right clauses") {
  MollifierParams params;
  params.k = 4;
  params.theta = 0.3;
  params.delta = 0.01;
  const double lam = params.lambda();

  std::vector<double> inner(4, -lam * 1.0001);
  SandwichReport rep = sandwich_check(params, inner);
  CHECK(rep.region == -1);
  CHECK(rep.clause1_ok);
  CHECK(std::abs(rep.g_plus - 1.0) <= params.delta);

  std::vector<double> outer = {-1.0, 0.2, lam * 1.0001, -0.5};
  rep = sandwich_check(params, outer);
  CHECK(rep.region == 1);
  CHECK(rep.clause2_ok);
  CHECK(rep.g_minus <= params.delta);
}
