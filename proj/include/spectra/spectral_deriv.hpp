// Divided differences, Frechet derivatives of matrix functions (orders 1-2),
// integral representations, and the third-order derivative of spectral
// functions F = f(lambda(X)).
//
// First and second order use the divided-difference kernels in the eigenbasis
// of X:
//   Df(X)[A]    = V ( f[l_i, l_j] .* A' ) V^T,              A' = V^T A V
//   D^2f(X)[A,B]= V ( sum_j f[l_i, l_j, l_l] (A'_{ij}B'_{jl} + B'_{ij}A'_{jl}) ) V^T
// (the second form symmetrized over the direction pair, matching the mixed
// derivative d^2/ds dt f(X + sA + tB)).
//
// Third order follows the spectral expansion in the eigenbasis: writing
// Q = V^T H V and x = lambda(X), D^3F(X)[H,H,H] is the sum of seven index
// families built from the gradient tensors of f and first/second difference
// quotients in x. The symmetry multiplicities (1,3,1,6,3,1,1) come from
// merging the coincident-index cases of the underlying permutation expansion;
// they are exercised by closed-form oracles in the tests (for k=2 and
// f = x1^2 x2 + x1 x2^2 the total equals 6 det(H) tr(H)).

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "spectra/scalar_function.hpp"
#include "spectra/sym_matrix.hpp"

namespace spectra {

// Divided difference f[x_1..x_m] of order m-1 <= 3. Points closer than
// 1e-7 * scale are treated as coincident and resolved by the confluent limit
// f^(r)/r!, which requires the analytic derivative of that order.
double divided_diff(const ScalarFunction& f, std::span<const double> xs);

// V f(Lambda) V^T.
SymMatrix matrix_function(const ScalarFunction& f, const SymMatrix& x);

SymMatrix frechet_d1(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a);
SymMatrix frechet_d2(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a,
                     const SymMatrix& b);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Dexp(X)[A] = int_0^1 e^{(1-u)X} A e^{uX} du by quadrature.
SymMatrix dyson_d1_exp(const SymMatrix& x, const SymMatrix& a, int quad_points = 64);

// D^2 f(X)[A,B] for f(x) = e^{-x^2/2} via its double-integral representation
// (two tensor-product double integrals plus a single integral); quad_points
// nodes per axis.
SymMatrix d2_gauss_integral(const SymMatrix& x, const SymMatrix& a, const SymMatrix& b,
                            int quad_points = 48);

// Gradients of a permutation-symmetric multivariate function, bound to a
// fixed evaluation point. The closures share whatever per-point state the
// implementation precomputed, so repeated index queries are cheap.
struct SymmetricDerivatives {
  double value = 0.0;
  std::function<double(int)> g1;
  std::function<double(int, int)> g2;
  std::function<double(int, int, int)> g3;
};

class SymmetricFunction {
 public:
  virtual ~SymmetricFunction() = default;
  virtual double value(std::span<const double> x) const = 0;
  virtual SymmetricDerivatives at(std::span<const double> x) const = 0;
};

// f(x) = prod_i g(scale * x_i + shift) with g the standard normal CDF.
// plain() is the bare product; smoothed(theta, alpha) is the profile of
// M -> G_theta(lambda(M) + alpha), i.e. scale = -1/theta, shift = -alpha/theta.
class BentkusProduct final : public SymmetricFunction {
 public:
  explicit BentkusProduct(double scale = 1.0, double shift = 0.0)
      : scale_(scale), shift_(shift) {}
  static BentkusProduct plain() { return BentkusProduct(1.0, 0.0); }
  static BentkusProduct smoothed(double theta, double alpha);

  double value(std::span<const double> x) const override;
  SymmetricDerivatives at(std::span<const double> x) const override;

 private:
  double scale_, shift_;
};

// f(x) = sum_i h(x_i); all cross partials vanish.
class SeparableSum final : public SymmetricFunction {
 public:
  explicit SeparableSum(ScalarFunction h) : h_(std::move(h)) {}
  double value(std::span<const double> x) const override;
  SymmetricDerivatives at(std::span<const double> x) const override;

 private:
  ScalarFunction h_;
};

// Adapter for ad-hoc symmetric functions given as callables.
class CallableSymmetric final : public SymmetricFunction {
 public:
  using Value = std::function<double(std::span<const double>)>;
  using Grad1 = std::function<double(std::span<const double>, int)>;
  using Grad2 = std::function<double(std::span<const double>, int, int)>;
  using Grad3 = std::function<double(std::span<const double>, int, int, int)>;
  CallableSymmetric(Value v, Grad1 g1, Grad2 g2, Grad3 g3)
      : v_(std::move(v)), g1_(std::move(g1)), g2_(std::move(g2)), g3_(std::move(g3)) {}
  double value(std::span<const double> x) const override { return v_(x); }
  SymmetricDerivatives at(std::span<const double> x) const override;

 private:
  Value v_;
  Grad1 g1_;
  Grad2 g2_;
  Grad3 g3_;
};

// The coefficient evaluators of the seven third-derivative index families,
// bound to the eigenvalue vector x. Quotient indices must be pairwise
// distinct; the eigenvalue gap precondition is checked on construction.
struct SendovCoefficients {
  std::function<double(int)> diag3;              // grad3_{iii}
  std::function<double(int, int)> two_index3;    // grad3_{iij}, i != j
  std::function<double(int, int, int)> distinct3;
  std::function<double(int, int)> quotient4;
  std::function<double(int, int, int)> quotient5;
  std::function<double(int, int, int)> quotient6;
  std::function<double(int, int, int)> quotient7;
};

SendovCoefficients sendov_tensors(const SymmetricFunction& f, std::vector<double> x,
                                  double gap_tol);

struct SpectralD3Options {
  double gap_tol_rel = 1e-5;  // of the eigenvalue spread
  bool allow_jitter = false;  // perturb degenerate spectra by a random diagonal
  uint64_t jitter_seed = 1;
};

// Per-family totals (multiplicities included); their sum is the derivative.
std::array<double, 7> sendov_term_values(const SendovCoefficients& c,
                                         std::span<const double> x, const SymMatrix& q);

double frechet_d3_spectral(const SymmetricFunction& f, const SymMatrix& x, const SymMatrix& h,
                           const SpectralD3Options& opts = {});

// Central finite difference of t -> F(X + tH) at t = 0 with one Richardson
// step; order 3 uses the antisymmetric 5-point stencil
// (-1/2, 1, -1, 1/2)/h^3 at offsets (-2h, -h, h, 2h). `trunc_estimate`
// receives the Richardson residual when non-null.
double fd_directional(const std::function<double(const SymMatrix&)>& f, const SymMatrix& x,
                      const SymMatrix& h, int order, double step,
                      double* trunc_estimate = nullptr);

// Entrywise finite differences of matrix functions (order-4 stencils).
SymMatrix fd_matrix_d1(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a,
                       double step = 1e-3);
SymMatrix fd_matrix_d2(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a,
                       double step = 1e-3);

struct DerivativeReport {
  double analytic_value = 0.0;
  double fd_value = 0.0;
  double rel_error = 0.0;  // |analytic - fd| / max(1, |fd|)
  double bound_value = 0.0;
  double ratio = 0.0;      // |analytic| / bound
};

// |D^3 Psi_theta(X + alpha I)[H,H,H]| against the reference envelope
// (Delta^2 + alpha^2)/theta^3 * ln(k)^3 * ||H||^3 with unit constant,
// where Delta = ||X||. The ratio across an instance battery serves as the
// empirical constant.
DerivativeReport bentkus_d3_bound_check(const SymMatrix& x, const SymMatrix& h, double theta,
                                        double alpha, const SpectralD3Options& opts = {});

}  // namespace spectra
