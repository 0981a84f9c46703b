#include "spectra/spectral_deriv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "spectra/mollifier.hpp"
#include "spectra/rng.hpp"

namespace spectra {

namespace {

constexpr double kCoincidenceRel = 1e-7;

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

SymMatrix axpy_matrix(const SymMatrix& x, double t, const SymMatrix& h) {
  SymMatrix m = x;
  m.axpy(t, h);
  return m;
}

}  // namespace

double divided_diff(const ScalarFunction& f, std::span<const double> xs) {
  const int m = static_cast<int>(xs.size());
  if (m < 1 || m > 4) throw std::invalid_argument("divided_diff: order must be 0..3");
  std::vector<double> z(xs.begin(), xs.end());
  std::sort(z.begin(), z.end());

  double scale = 1.0;
  for (double v : z) scale = std::max(scale, std::abs(v));
  const double tol = kCoincidenceRel * scale;
  // Snap near-coincident points onto their cluster head so the confluent
  // branch below sees exact equality.
  for (int i = 1; i < m; ++i)
    if (z[i] - z[i - 1] < tol) z[i] = z[i - 1];

  std::vector<double> table(m);
  for (int i = 0; i < m; ++i) table[i] = f.f(z[i]);
  for (int level = 1; level < m; ++level) {
    for (int i = 0; i + level < m; ++i) {
      if (z[i + level] == z[i]) {
        if (!f.has_derivative(level))
          throw std::invalid_argument("divided_diff: confluent point needs derivative order " +
                                      std::to_string(level));
        table[i] = f.derivative(level, z[i]) / factorial(level);
      } else {
        table[i] = (table[i + 1] - table[i]) / (z[i + level] - z[i]);
      }
    }
  }
  return table[0];
}

SymMatrix matrix_function(const ScalarFunction& f, const SymMatrix& x) {
  return spectral_map(eig_sym(x), [&](double l) { return f.f(l); });
}

SymMatrix frechet_d1(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a) {
  const EigDecomposition eig = eig_sym(x);
  const int k = x.dim();
  const SymMatrix ap = rotate_into_basis(eig.eigenvectors, a);
  SymMatrix out(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double dd = divided_diff(f, std::array{eig.eigenvalues[i], eig.eigenvalues[j]});
      out.set(i, j, dd * ap(i, j));
    }
  return conjugate(eig.eigenvectors, out);
}

SymMatrix frechet_d2(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a,
                     const SymMatrix& b) {
  const EigDecomposition eig = eig_sym(x);
  const int k = x.dim();
  const SymMatrix ap = rotate_into_basis(eig.eigenvectors, a);
  const SymMatrix bp = rotate_into_basis(eig.eigenvectors, b);
  const auto& l = eig.eigenvalues;
  SymMatrix out(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      for (int r = 0; r < k; ++r) {
        const double dd = divided_diff(f, std::array{l[i], l[r], l[j]});
        s += dd * (ap(i, r) * bp(r, j) + bp(i, r) * ap(r, j));
      }
      out.set(i, j, s);
    }
  return conjugate(eig.eigenvectors, out);
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    const double w = 1.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

SymMatrix dyson_d1_exp(const SymMatrix& x, const SymMatrix& a, int quad_points) {
  if (quad_points < 16) throw std::invalid_argument("dyson_d1_exp: need at least 16 nodes");
  const EigDecomposition eig = eig_sym(x);
  auto exp_scaled = [&](double s) {
    return spectral_map(eig, [s](double l) { return std::exp(s * l); }).to_matrix();
  };
  std::vector<double> u, w;
  gauss_legendre_01(quad_points, u, w);
  const Matrix am = a.to_matrix();
  Matrix acc(x.dim(), x.dim());
  for (int q = 0; q < quad_points; ++q) {
    const Matrix term = exp_scaled(1.0 - u[q]) * am * exp_scaled(u[q]);
    for (int i = 0; i < x.dim(); ++i)
      for (int j = 0; j < x.dim(); ++j) acc(i, j) += w[q] * term(i, j);
  }
  return SymMatrix::symmetric_part(acc);
}

SymMatrix d2_gauss_integral(const SymMatrix& x, const SymMatrix& a, const SymMatrix& b,
                            int quad_points) {
  if (quad_points < 16) throw std::invalid_argument("d2_gauss_integral: need at least 16 nodes");
  const int k = x.dim();
  const EigDecomposition eig = eig_sym(x);
  // e^{-s X^2 / 2} through the eigenbasis of X.
  auto kernel = [&](double s) {
    return spectral_map(eig, [s](double l) { return std::exp(-0.5 * s * l * l); }).to_matrix();
  };
  const Matrix xm = x.to_matrix(), am = a.to_matrix(), bm = b.to_matrix();
  auto anticommutator = [](const Matrix& p, const Matrix& q) {
    const Matrix pq = p * q, qp = q * p;
    Matrix out(p.rows(), p.cols());
    for (int i = 0; i < p.rows(); ++i)
      for (int j = 0; j < p.cols(); ++j) out(i, j) = pq(i, j) + qp(i, j);
    return out;
  };
  const Matrix xa = anticommutator(xm, am);
  const Matrix xb = anticommutator(xm, bm);
  const Matrix ab = anticommutator(am, bm);

  std::vector<double> u, w;
  gauss_legendre_01(quad_points, u, w);

  Matrix acc(k, k);
  auto add = [&](double c, const Matrix& m) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) acc(i, j) += c * m(i, j);
  };
  for (int p = 0; p < quad_points; ++p) {
    const double up = u[p];
    for (int q = 0; q < quad_points; ++q) {
      const double vq = u[q];
      add(0.25 * w[p] * w[q] * (1.0 - up),
          kernel((1.0 - up) * (1.0 - vq)) * xb * kernel((1.0 - up) * vq) * xa * kernel(up));
      add(0.25 * w[p] * w[q] * up,
          kernel(1.0 - up) * xa * kernel(up * (1.0 - vq)) * xb * kernel(up * vq));
    }
    add(-0.5 * w[p], kernel(1.0 - up) * ab * kernel(up));
  }
  return SymMatrix::symmetric_part(acc);
}

BentkusProduct BentkusProduct::smoothed(double theta, double alpha) {
  if (theta <= 0.0) throw std::invalid_argument("BentkusProduct: theta must be positive");
  return BentkusProduct(-1.0 / theta, -alpha / theta);
}

double BentkusProduct::value(std::span<const double> x) const {
  std::vector<double> u(x.size());
  for (size_t i = 0; i < x.size(); ++i) u[i] = scale_ * x[i] + shift_;
  return G(u);
}

SymmetricDerivatives BentkusProduct::at(std::span<const double> x) const {
  struct State {
    double f;
    double s;
    std::vector<double> r1, r2, r3;  // g'/g, g''/g, g'''/g at the scaled points
  };
  auto st = std::make_shared<State>();
  const size_t k = x.size();
  st->s = scale_;
  st->r1.resize(k);
  st->r2.resize(k);
  st->r3.resize(k);
  std::vector<double> u(k);
  for (size_t i = 0; i < k; ++i) {
    u[i] = scale_ * x[i] + shift_;
    const double r1 = gbar(u[i]);
    st->r1[i] = r1;
    st->r2[i] = -u[i] * r1;
    st->r3[i] = (u[i] * u[i] - 1.0) * r1;
  }
  st->f = G(u);

  SymmetricDerivatives d;
  d.value = st->f;
  d.g1 = [st](int i) { return st->s * st->r1[i] * st->f; };
  // Indices are put in canonical order so the symmetry of the partials holds
  // bitwise, not merely up to rounding.
  d.g2 = [st](int i, int j) {
    if (i > j) std::swap(i, j);
    const double s2 = st->s * st->s;
    return i == j ? s2 * st->r2[i] * st->f : s2 * st->r1[i] * st->r1[j] * st->f;
  };
  d.g3 = [st](int i, int j, int l) {
    if (i > j) std::swap(i, j);
    if (j > l) std::swap(j, l);
    if (i > j) std::swap(i, j);
    const double s3 = st->s * st->s * st->s;
    if (i == j && j == l) return s3 * st->r3[i] * st->f;
    if (i == j) return s3 * st->r2[i] * st->r1[l] * st->f;
    if (j == l) return s3 * st->r2[j] * st->r1[i] * st->f;
    return s3 * st->r1[i] * st->r1[j] * st->r1[l] * st->f;
  };
  return d;
}

double SeparableSum::value(std::span<const double> x) const {
  double s = 0.0;
  for (double v : x) s += h_.f(v);
  return s;
}

SymmetricDerivatives SeparableSum::at(std::span<const double> x) const {
  struct State {
    std::vector<double> d1, d2, d3;
  };
  auto st = std::make_shared<State>();
  const size_t k = x.size();
  st->d1.resize(k);
  st->d2.resize(k);
  st->d3.resize(k);
  for (size_t i = 0; i < k; ++i) {
    st->d1[i] = h_.derivative(1, x[i]);
    st->d2[i] = h_.derivative(2, x[i]);
    st->d3[i] = h_.derivative(3, x[i]);
  }
  SymmetricDerivatives d;
  d.value = value(x);
  d.g1 = [st](int i) { return st->d1[i]; };
  d.g2 = [st](int i, int j) { return i == j ? st->d2[i] : 0.0; };
  d.g3 = [st](int i, int j, int l) { return (i == j && j == l) ? st->d3[i] : 0.0; };
  return d;
}

SymmetricDerivatives CallableSymmetric::at(std::span<const double> x) const {
  std::vector<double> copy(x.begin(), x.end());
  SymmetricDerivatives d;
  d.value = v_(copy);
  d.g1 = [this, copy](int i) { return g1_(copy, i); };
  d.g2 = [this, copy](int i, int j) { return g2_(copy, i, j); };
  d.g3 = [this, copy](int i, int j, int l) { return g3_(copy, i, j, l); };
  return d;
}

SendovCoefficients sendov_tensors(const SymmetricFunction& f, std::vector<double> x,
                                  double gap_tol) {
  const int k = static_cast<int>(x.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(x[i] - x[j]) < gap_tol)
        throw NumericalError("sendov_tensors: degenerate spectrum", std::abs(x[i] - x[j]));

  auto xs = std::make_shared<std::vector<double>>(std::move(x));
  auto d = std::make_shared<SymmetricDerivatives>(f.at(*xs));

  SendovCoefficients c;
  c.diag3 = [d](int i) { return d->g3(i, i, i); };
  c.two_index3 = [d](int i, int j) { return d->g3(i, i, j); };
  c.distinct3 = [d](int i, int j, int l) { return d->g3(i, j, l); };
  c.quotient4 = [d, xs](int i1, int i2) {
    const double dx = (*xs)[i2] - (*xs)[i1];
    return (d->g2(i2, i2) - d->g2(i1, i2)) / dx - (d->g1(i2) - d->g1(i1)) / (dx * dx);
  };
  c.quotient5 = [d, xs](int i1, int i2, int i3) {
    return (d->g2(i2, i3) - d->g2(i1, i3)) / ((*xs)[i2] - (*xs)[i1]);
  };
  c.quotient6 = [d, xs](int i1, int i2, int i3) {
    const double x1 = (*xs)[i1], x2 = (*xs)[i2], x3 = (*xs)[i3];
    return (d->g1(i3) - d->g1(i1)) / ((x3 - x2) * (x3 - x1)) -
           (d->g1(i2) - d->g1(i1)) / ((x3 - x2) * (x2 - x1));
  };
  c.quotient7 = [d, xs](int i1, int i2, int i3) {
    const double x1 = (*xs)[i1], x2 = (*xs)[i2], x3 = (*xs)[i3];
    return (d->g1(i2) - d->g1(i3)) / ((x3 - x1) * (x2 - x3)) -
           (d->g1(i2) - d->g1(i1)) / ((x3 - x1) * (x2 - x1));
  };
  return c;
}

std::array<double, 7> sendov_term_values(const SendovCoefficients& c,
                                         std::span<const double> x, const SymMatrix& q) {
  const int k = static_cast<int>(x.size());
  std::array<double, 7> t{};
  for (int i = 0; i < k; ++i) {
    const double qii = q(i, i);
    t[0] += c.diag3(i) * qii * qii * qii;
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      t[1] += 3.0 * c.two_index3(i, j) * q(i, i) * q(i, i) * q(j, j);
      t[3] += 6.0 * c.quotient4(i, j) * q(j, j) * q(j, i) * q(j, i);
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      for (int l = 0; l < k; ++l) {
        if (l == i || l == j) continue;
        t[2] += c.distinct3(i, j, l) * q(i, i) * q(j, j) * q(l, l);
        t[4] += 3.0 * c.quotient5(i, j, l) * q(i, j) * q(i, j) * q(l, l);
        t[5] += c.quotient6(i, j, l) * q(i, j) * q(j, l) * q(l, i);
        t[6] += c.quotient7(i, j, l) * q(i, l) * q(j, i) * q(l, j);
      }
    }
  return t;
}

double frechet_d3_spectral(const SymmetricFunction& f, const SymMatrix& x, const SymMatrix& h,
                           const SpectralD3Options& opts) {
  SymMatrix xw = x;
  EigDecomposition eig = eig_sym(xw);
  auto spread_of = [](const std::vector<double>& l) { return l.front() - l.back(); };
  auto min_gap = [](const std::vector<double>& l) {
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < l.size(); ++i) g = std::min(g, l[i - 1] - l[i]);
    return g;
  };

  double spread = spread_of(eig.eigenvalues);
  double tol = opts.gap_tol_rel * (spread > 0.0 ? spread : 1.0);
  if (x.dim() > 1 && min_gap(eig.eigenvalues) < tol) {
    if (!opts.allow_jitter)
      throw NumericalError("frechet_d3_spectral: degenerate spectrum (jitter disabled)",
                           min_gap(eig.eigenvalues));
    CounterRng rng(opts.jitter_seed, "spectrum-jitter");
    double mag = 1e-6 * std::max(spread, 1.0);
    for (int attempt = 0; attempt < 12; ++attempt) {
      xw = x;
      for (int i = 0; i < x.dim(); ++i)
        xw.set(i, i, xw(i, i) + mag * (i + 1) * (0.5 + rng.next_unit()));
      eig = eig_sym(xw);
      spread = spread_of(eig.eigenvalues);
      tol = opts.gap_tol_rel * (spread > 0.0 ? spread : 1.0);
      if (min_gap(eig.eigenvalues) >= tol) break;
      mag *= 4.0;
    }
    if (min_gap(eig.eigenvalues) < tol)
      throw NumericalError("frechet_d3_spectral: spectrum still degenerate after jitter",
                           min_gap(eig.eigenvalues));
  }

  const SymMatrix q = rotate_into_basis(eig.eigenvectors, h);
  const SendovCoefficients c = sendov_tensors(f, eig.eigenvalues, 0.0);
  const std::array<double, 7> t = sendov_term_values(c, eig.eigenvalues, q);
  double sum = 0.0;
  for (double v : t) sum += v;
  return sum;
}

double fd_directional(const std::function<double(const SymMatrix&)>& f, const SymMatrix& x,
                      const SymMatrix& h, int order, double step, double* trunc_estimate) {
  if (step <= 0.0) throw std::invalid_argument("fd_directional: step must be positive");
  const double f0 = order == 2 ? f(x) : 0.0;
  auto stencil = [&](double s) {
    switch (order) {
      case 1:
        return (f(axpy_matrix(x, s, h)) - f(axpy_matrix(x, -s, h))) / (2.0 * s);
      case 2:
        return (f(axpy_matrix(x, s, h)) - 2.0 * f0 + f(axpy_matrix(x, -s, h))) / (s * s);
      case 3:
        return (-0.5 * f(axpy_matrix(x, -2.0 * s, h)) + f(axpy_matrix(x, -s, h)) -
                f(axpy_matrix(x, s, h)) + 0.5 * f(axpy_matrix(x, 2.0 * s, h))) /
               (s * s * s);
      default:
        throw std::invalid_argument("fd_directional: order must be 1..3");
    }
  };
  const double coarse = stencil(step);
  const double fine = stencil(0.5 * step);
  if (trunc_estimate) *trunc_estimate = std::abs(fine - coarse) / 3.0;
  return (4.0 * fine - coarse) / 3.0;
}

SymMatrix fd_matrix_d1(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a,
                       double step) {
  auto fx = [&](double t) { return matrix_function(f, axpy_matrix(x, t, a)); };
  SymMatrix out = fx(-2.0 * step);
  out.axpy(-8.0, fx(-step));
  out.axpy(8.0, fx(step));
  out.axpy(-1.0, fx(2.0 * step));
  out.scale(1.0 / (12.0 * step));
  return out;
}

SymMatrix fd_matrix_d2(const ScalarFunction& f, const SymMatrix& x, const SymMatrix& a,
                       double step) {
  auto fx = [&](double t) { return matrix_function(f, axpy_matrix(x, t, a)); };
  SymMatrix out = -1.0 * fx(-2.0 * step);
  out.axpy(16.0, fx(-step));
  out.axpy(-30.0, fx(0.0));
  out.axpy(16.0, fx(step));
  out.axpy(-1.0, fx(2.0 * step));
  out.scale(1.0 / (12.0 * step * step));
  return out;
}

DerivativeReport bentkus_d3_bound_check(const SymMatrix& x, const SymMatrix& h, double theta,
                                        double alpha, const SpectralD3Options& opts) {
  const int k = x.dim();
  SpectralD3Options o = opts;
  o.allow_jitter = true;
  const BentkusProduct f = BentkusProduct::smoothed(theta, alpha);

  DerivativeReport rep;
  rep.analytic_value = frechet_d3_spectral(f, x, h, o);

  const double hnorm = spectral_norm(h);
  const double delta = spectral_norm(x);
  if (hnorm > 0.0) {
    auto big_f = [&](const SymMatrix& m) {
      std::vector<double> l = eig_sym(m).eigenvalues;
      for (double& v : l) v += alpha;
      return G_theta(l, theta);
    };
    const double step = 5e-3 * (1.0 + delta) / hnorm;
    rep.fd_value = fd_directional(big_f, x, h, 3, step);
  }
  rep.rel_error = std::abs(rep.analytic_value - rep.fd_value) / std::max(1.0, std::abs(rep.fd_value));

  const double logk = std::log(double(k));
  rep.bound_value = (delta * delta + alpha * alpha) / (theta * theta * theta) * logk * logk *
                    logk * hnorm * hnorm * hnorm;
  if (rep.bound_value > 0.0) {
    rep.ratio = std::abs(rep.analytic_value) / rep.bound_value;
  } else {
    rep.ratio = rep.analytic_value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace spectra
