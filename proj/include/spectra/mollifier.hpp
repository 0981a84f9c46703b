// Smooth approximation of the orthant indicator psi(x) = [max_i x_i <= 0].
//
//   g(x)       standard normal CDF
//   G(x)       prod_i g(x_i)
//   G_theta(x) G(-x_1/theta, ..., -x_k/theta)
//              = Pr_{g ~ N(0,1)^k} [ x + theta*g <= 0 ]
//
// With shift alpha and shell radius Lambda both of scale
// theta*sqrt(log(k/delta)), G_theta(x+alpha) and G_theta(x-alpha) sandwich
// psi up to delta outside the shell |max_i x_i| < Lambda:
//
//   G_theta(x+alpha) - delta <= psi(x) <= G_theta(x-alpha) + delta.
//
// Lambda must exceed alpha for the outer clauses to hold at the shell
// boundary (at max_i x_i = -Lambda = -alpha the smoothed value is only
// g(0)^k); we use Lambda = 2*alpha with a single tunable c_shift.
//
// All products run in the log domain; the log-CDF stays accurate far into
// the left tail (a direct CDF underflows near x = -38).

#pragma once

#include <span>

#include "spectra/sym_matrix.hpp"

namespace spectra {

// Standard normal CDF, absolute error ~1e-16.
double norm_cdf(double x);

// log of the CDF; relative error of the log below 1e-12 down to x = -40 and
// beyond (continued-fraction tail for x < -8).
double log_norm_cdf(double x);

// Scaled complementary error function exp(z^2) erfc(z) for z >= 1.
double erfcx(double z);

struct GDerivs {
  double d1, d2, d3;
};

// Closed forms: g' = exp(-x^2/2)/sqrt(2pi), g'' = -x g', g''' = (x^2-1) g'.
GDerivs g_derivs(double x);

// gbar = g'/g, positive and decreasing; tail-stable via logs for x < -8.
double gbar(double x);
double gbar_d1(double x);  // -(x + gbar(x)) * gbar(x)
double gbar_d2(double x);  // (x^2-1) gbar + 3x gbar^2 + 2 gbar^3

// Sum of log g(x_i), addends sorted before accumulation so the value is
// bit-identical under permutation of x.
double log_G(std::span<const double> x);
double G(std::span<const double> x);
double G_theta(std::span<const double> x, double theta);

bool psi(std::span<const double> x);

// G_theta on the spectrum: Psi_theta(M) = G_theta(lambda(M)).
double Psi_theta(const SymMatrix& m, double theta);

// l1 norm of the order-t derivative tensor of G at x: the sum over ordered
// index tuples (p_1..p_t) of |d^t G / dx_{p_1}..dx_{p_t}|. The partials
// factor through g-derivative ratios, so the sum collapses to elementary
// symmetric combinations. Orders 1..3.
double bentkus_norm1(std::span<const double> x, int order);

struct MollifierParams {
  int k = 1;
  double theta = 1.0;
  double delta = 0.01;
  double c_shift = 2.0;

  double alpha() const;   // c_shift * theta * sqrt(ln(k/delta))
  double lambda() const;  // 2 * alpha
};

struct SandwichReport {
  int region = 0;          // -1: max <= -Lambda, +1: max >= Lambda, 0: shell
  double g_plus = 0.0;     // G_theta(x + alpha)
  double g_minus = 0.0;    // G_theta(x - alpha)
  bool clause1_ok = true;  // |g_plus - psi| <= delta when region == -1
  bool clause2_ok = true;  // |g_minus - psi| <= delta when region == +1
  bool clause3_ok = true;  // g_plus - delta <= psi <= g_minus + delta
  bool pass = true;
};

SandwichReport sandwich_check(const MollifierParams& params, std::span<const double> x);

}  // namespace spectra
