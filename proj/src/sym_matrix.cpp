#include "spectra/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spectra {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

SymMatrix SymMatrix::from_rows(int dim, std::span<const double> row_major) {
  if (dim <= 0 || row_major.size() != size_t(dim) * dim)
    throw std::invalid_argument("SymMatrix::from_rows: bad shape");
  double asym = 0.0;
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double a = row_major[size_t(i) * dim + j];
      const double b = row_major[size_t(j) * dim + i];
      if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("SymMatrix::from_rows: non-finite entry");
      asym = std::max(asym, std::abs(a - b));
      m.set(i, j, 0.5 * (a + b));
    }
  if (asym > 1e-8) throw std::invalid_argument("SymMatrix::from_rows: asymmetry exceeds 1e-8");
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> entries) {
  SymMatrix m(static_cast<int>(entries.size()));
  for (size_t i = 0; i < entries.size(); ++i) m.set(int(i), int(i), entries[i]);
  return m;
}

SymMatrix SymMatrix::identity(int dim, double scale) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, scale);
  return m;
}

SymMatrix SymMatrix::symmetric_part(const Matrix& src) {
  SymMatrix m(src.rows());
  for (int i = 0; i < src.rows(); ++i)
    for (int j = i; j < src.cols(); ++j) m.set(i, j, 0.5 * (src(i, j) + src(j, i)));
  return m;
}

bool SymMatrix::is_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

void SymMatrix::axpy(double a, const SymMatrix& x) {
  if (x.dim_ != dim_) throw std::invalid_argument("SymMatrix::axpy: dimension mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

void SymMatrix::scale(double a) {
  for (double& v : data_) v *= a;
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { a += b; return a; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { a -= b; return a; }
SymMatrix operator*(double a, SymMatrix m) { m.scale(a); return m; }

namespace {

double off_diag_frobenius(const SymMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigDecomposition eig_sym(const SymMatrix& m) {
  if (!m.is_finite()) throw std::invalid_argument("eig_sym: non-finite entries");
  const int k = m.dim();
  SymMatrix a = m;
  Matrix v = Matrix::identity(k);

  const double norm = m.frobenius_norm();
  const double threshold = 1e-12 * norm;
  const int max_sweeps = 100;

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diag_frobenius(a) <= threshold) break;
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double diff = a(q, q) - a(p, p);
        double t;
        if (std::abs(apq) < 1e-300 * std::abs(diff)) {
          t = apq / diff;
        } else {
          const double theta = diff / (2.0 * apq);
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a.set(p, p, app - t * apq);
        a.set(q, q, aqq + t * apq);
        a.set(p, q, 0.0);
        for (int r = 0; r < k; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          a.set(r, p, arp - s * (arq + tau * arp));
          a.set(r, q, arq + s * (arp - tau * arq));
        }
        for (int r = 0; r < k; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  const double resid = off_diag_frobenius(a);
  if (resid > threshold && resid > 1e-300)
    throw NumericalError("eig_sym: Jacobi failed to converge in 100 sweeps", resid);

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EigDecomposition eig;
  eig.eigenvalues.resize(k);
  eig.eigenvectors = Matrix(k, k);
  for (int c = 0; c < k; ++c) {
    eig.eigenvalues[c] = a(order[c], order[c]);
    for (int r = 0; r < k; ++r) eig.eigenvectors(r, c) = v(r, order[c]);
  }

  // Postcondition checks: orthogonality and reconstruction.
  double ortho = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double dot = 0.0;
      for (int r = 0; r < k; ++r) dot += eig.eigenvectors(r, i) * eig.eigenvectors(r, j);
      ortho = std::max(ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  if (ortho > 1e-10) throw NumericalError("eig_sym: eigenvectors not orthonormal", ortho);

  const SymMatrix rec = conjugate_diag(eig.eigenvectors, eig.eigenvalues);
  double recon = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) recon = std::max(recon, std::abs(rec(i, j) - m(i, j)));
  if (recon > 1e-9 * (1.0 + m.max_abs()))
    throw NumericalError("eig_sym: reconstruction residual too large", recon);

  return eig;
}

double lambda_max(const SymMatrix& m) { return eig_sym(m).eigenvalues.front(); }

double lambda_min(const SymMatrix& m) { return eig_sym(m).eigenvalues.back(); }

double spectral_norm(const SymMatrix& m) {
  const EigDecomposition eig = eig_sym(m);
  return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
}

double schatten_norm(const SymMatrix& m, double p) {
  const EigDecomposition eig = eig_sym(m);
  double s = 0.0;
  for (double l : eig.eigenvalues) s += std::pow(std::abs(l), p);
  return std::pow(s, 1.0 / p);
}

SymMatrix conjugate_diag(const Matrix& v, std::span<const double> d) {
  const int k = v.rows();
  SymMatrix out(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += v(i, l) * d[l] * v(j, l);
      out.set(i, j, s);
    }
  return out;
}

SymMatrix rotate_into_basis(const Matrix& v, const SymMatrix& h) {
  return SymMatrix::symmetric_part(v.transposed() * h.to_matrix() * v);
}

SymMatrix conjugate(const Matrix& u, const SymMatrix& h) {
  return SymMatrix::symmetric_part(u * h.to_matrix() * u.transposed());
}

}  // namespace spectra
