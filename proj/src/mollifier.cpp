#include "spectra/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spectra {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kTailCutoff = -8.0;

double phi(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double erfcx(double z) {
  if (z < 1.0) throw std::invalid_argument("erfcx: continued fraction needs z >= 1");
  // Backward evaluation of erfcx(z) = (1/sqrt(pi)) / (z + (1/2)/(z + (2/2)/(z + ...))).
  double cf = 0.0;
  for (int n = 64; n >= 1; --n) cf = (0.5 * n) / (z + cf);
  return (1.0 / std::sqrt(M_PI)) / (z + cf);
}

double log_norm_cdf(double x) {
  if (x >= kTailCutoff) return std::log(norm_cdf(x));
  const double z = -x * kInvSqrt2;
  return std::log(0.5 * erfcx(z)) - z * z;
}

GDerivs g_derivs(double x) {
  const double p = phi(x);
  return GDerivs{p, -x * p, (x * x - 1.0) * p};
}

double gbar(double x) {
  // The ratio phi/Phi through the scaled complement: the exponential factors
  // cancel algebraically, which keeps the value accurate to a few ulps where
  // separate exp/erfc evaluations would lose ~x^2 ulps to argument rounding.
  if (x >= -5.0) return phi(x) / norm_cdf(x);
  return std::sqrt(2.0 / M_PI) / erfcx(-x * kInvSqrt2);
}

double gbar_d1(double x) {
  const double gb = gbar(x);
  return -(x + gb) * gb;
}

double gbar_d2(double x) {
  const double gb = gbar(x);
  return (x * x - 1.0) * gb + 3.0 * x * gb * gb + 2.0 * gb * gb * gb;
}

double log_G(std::span<const double> x) {
  std::vector<double> logs(x.size());
  for (size_t i = 0; i < x.size(); ++i) logs[i] = log_norm_cdf(x[i]);
  std::sort(logs.begin(), logs.end());
  double s = 0.0;
  for (double v : logs) s += v;
  return s;
}

double G(std::span<const double> x) { return std::exp(log_G(x)); }

double G_theta(std::span<const double> x, double theta) {
  if (theta <= 0.0) throw std::invalid_argument("G_theta: theta must be positive");
  std::vector<double> scaled(x.size());
  for (size_t i = 0; i < x.size(); ++i) scaled[i] = -x[i] / theta;
  return G(scaled);
}

bool psi(std::span<const double> x) {
  for (double v : x)
    if (v > 0.0) return false;
  return true;
}

double Psi_theta(const SymMatrix& m, double theta) {
  return G_theta(eig_sym(m).eigenvalues, theta);
}

double bentkus_norm1(std::span<const double> x, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("bentkus_norm1: order in {1,2,3}");
  const size_t k = x.size();
  // Ratios of g-derivative magnitudes to g per coordinate; every mixed
  // partial of G is G times a product of these, and all terms in the l1 sum
  // are non-negative, so grouping by multiset is exact.
  double s1 = 0.0, s1_2 = 0.0, s1_3 = 0.0;  // power sums of r1
  double s2 = 0.0, s12 = 0.0;               // sum of r2, sum of r1*r2
  double s3 = 0.0;                          // sum of r3
  for (size_t i = 0; i < k; ++i) {
    const double u = x[i];
    const double r1 = gbar(u);
    const double r2 = std::abs(u) * r1;
    const double r3 = std::abs(u * u - 1.0) * r1;
    s1 += r1;
    s1_2 += r1 * r1;
    s1_3 += r1 * r1 * r1;
    s2 += r2;
    s12 += r1 * r2;
    s3 += r3;
  }
  const double g = G(x);
  switch (order) {
    case 1:
      return g * s1;
    case 2:
      return g * (s2 + s1 * s1 - s1_2);
    default: {
      const double distinct3 = s1 * s1 * s1 - 3.0 * s1 * s1_2 + 2.0 * s1_3;
      return g * (s3 + 3.0 * (s2 * s1 - s12) + distinct3);
    }
  }
}

double MollifierParams::alpha() const {
  if (k < 1 || theta <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("MollifierParams: need k >= 1, theta > 0, delta in (0,1)");
  return c_shift * theta * std::sqrt(std::log(double(k) / delta));
}

double MollifierParams::lambda() const { return 2.0 * alpha(); }

SandwichReport sandwich_check(const MollifierParams& params, std::span<const double> x) {
  SandwichReport rep;
  const double a = params.alpha();
  const double lam = params.lambda();
  double xmax = -std::numeric_limits<double>::infinity();
  for (double v : x) xmax = std::max(xmax, v);

  std::vector<double> shifted(x.size());
  for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + a;
  rep.g_plus = G_theta(shifted, params.theta);
  for (size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - a;
  rep.g_minus = G_theta(shifted, params.theta);

  const double ind = psi(x) ? 1.0 : 0.0;
  rep.region = xmax <= -lam ? -1 : (xmax >= lam ? 1 : 0);
  if (rep.region == -1) rep.clause1_ok = std::abs(rep.g_plus - ind) <= params.delta;
  if (rep.region == 1) rep.clause2_ok = std::abs(rep.g_minus - ind) <= params.delta;
  rep.clause3_ok =
      rep.g_plus - params.delta <= ind && ind <= rep.g_minus + params.delta;
  rep.pass = rep.clause1_ok && rep.clause2_ok && rep.clause3_ok;
  return rep;
}

}  // namespace spectra
