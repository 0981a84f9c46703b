#include <array>
#include <cmath>

#include "doctest.h"
#include "spectra/rng.hpp"
#include "spectra/sym_matrix.hpp"

using namespace spectra;

namespace {

SymMatrix random_sym(int k, CounterRng& rng) {
  SymMatrix m(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) m.set(i, j, rng.next_gaussian());
  return m;
}

}  // namespace

TEST_CASE("eig of a diagonal matrix sorts non-increasing") {
  const SymMatrix m = SymMatrix::diagonal(std::array{3.0, 1.0, 2.0});
  const EigDecomposition eig = eig_sym(m);
  CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("2x2 exchange matrix has eigenpairs (1, -1)") {
  SymMatrix m(2);
  m.set(0, 1, 1.0);
  const EigDecomposition eig = eig_sym(m);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Eigenvectors (1,1)/sqrt(2) and (1,-1)/sqrt(2) up to sign.
  CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(eig.eigenvectors(0, 0) * eig.eigenvectors(1, 0) > 0.0);
  CHECK(eig.eigenvectors(0, 1) * eig.eigenvectors(1, 1) < 0.0);
}

TEST_CASE("random 6x6 reconstruction residual below 1e-9") {
  CounterRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix m = random_sym(6, rng);
    const EigDecomposition eig = eig_sym(m);
    const SymMatrix rec = conjugate_diag(eig.eigenvectors, eig.eigenvalues);
    double resid = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) resid = std::max(resid, std::abs(rec(i, j) - m(i, j)));
    CHECK(resid <= 1e-9 * (1.0 + m.max_abs()));
  }
}

TEST_CASE("eig is deterministic for a fixed input") {
  CounterRng rng(3);
  const SymMatrix m = random_sym(5, rng);
  const EigDecomposition a = eig_sym(m);
  const EigDecomposition b = eig_sym(m);
  for (int i = 0; i < 5; ++i) {
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    for (int j = 0; j < 5; ++j) CHECK(a.eigenvectors(i, j) == b.eigenvectors(i, j));
  }
}

TEST_CASE("lambda_max basics") {
  CHECK(lambda_max(SymMatrix::diagonal(std::array{-1.0, -2.0})) == doctest::Approx(-1.0));
  CHECK(lambda_max(SymMatrix::identity(3)) == doctest::Approx(1.0));
}

TEST_CASE("lambda_max agrees with power iteration") {
  CounterRng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    SymMatrix m = random_sym(5, rng);
    // Shift to make the top eigenvalue dominant in magnitude.
    const double shift = 10.0;
    for (int i = 0; i < 5; ++i) m.set(i, i, m(i, i) + shift);
    std::array<double, 5> v{};
    for (double& x : v) x = rng.next_unit();
    double lam = 0.0;
    for (int it = 0; it < 20000; ++it) {
      std::array<double, 5> w{};
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) w[i] += m(i, j) * v[j];
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      lam = 0.0;
      for (int i = 0; i < 5; ++i) {
        v[i] = w[i] / norm;
        lam += v[i] * w[i];
      }
    }
    CHECK(lambda_max(m) == doctest::Approx(lam).epsilon(1e-8));
  }
}

TEST_CASE("block diagonal spectrum is the union of blocks") {
  CounterRng rng(5);
  const SymMatrix a = random_sym(3, rng);
  const SymMatrix b = random_sym(4, rng);
  SymMatrix packed(7);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) packed.set(i, j, a(i, j));
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) packed.set(3 + i, 3 + j, b(i, j));
  CHECK(lambda_max(packed) ==
        doctest::Approx(std::max(lambda_max(a), lambda_max(b))).epsilon(1e-12));
}

TEST_CASE("from_rows symmetrizes and validates") {
  const std::array<double, 4> ok = {1.0, 2.0, 2.0 + 5e-9, 3.0};
  const SymMatrix m = SymMatrix::from_rows(2, ok);
  CHECK(m(0, 1) == m(1, 0));
  const std::array<double, 4> skewed = {1.0, 2.0, 2.5, 3.0};
  CHECK_THROWS_AS(SymMatrix::from_rows(2, skewed), std::invalid_argument);
  const std::array<double, 4> bad = {1.0, std::nan(""), std::nan(""), 3.0};
  CHECK_THROWS_AS(SymMatrix::from_rows(2, bad), std::invalid_argument);
}

TEST_CASE("schatten norm at large p approaches the spectral norm") {
  CounterRng rng(11);
  const SymMatrix m = random_sym(4, rng);
  CHECK(schatten_norm(m, 2.0) == doctest::Approx(m.frobenius_norm()).epsilon(1e-12));
  CHECK(schatten_norm(m, 400.0) == doctest::Approx(spectral_norm(m)).epsilon(1e-2));
}
