// Dense real matrices, symmetric matrices and a cyclic-Jacobi eigensolver.

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra {

// Numerical failure that carries the offending residual.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// General dense matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }
  double& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  std::span<const double> data() const { return data_; }

  Matrix transposed() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// Symmetric k x k matrix. Stored as a full square; both mirror entries are
// written on every update, so the invariant entries[i][j] == entries[j][i]
// holds exactly at all times.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim) : dim_(dim), data_(size_t(dim) * dim, 0.0) {}

  // Builds from a row-major square array: symmetrizes (M + M^T)/2, rejects
  // input whose asymmetry exceeds 1e-8 or that contains non-finite entries.
  static SymMatrix from_rows(int dim, std::span<const double> row_major);
  static SymMatrix diagonal(std::span<const double> entries);
  static SymMatrix identity(int dim, double scale = 1.0);
  // Symmetrizes an arbitrary square matrix (no asymmetry check).
  static SymMatrix symmetric_part(const Matrix& m);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return data_[size_t(i) * dim_ + j]; }
  void set(int i, int j, double v) {
    data_[size_t(i) * dim_ + j] = v;
    data_[size_t(j) * dim_ + i] = v;
  }
  std::span<const double> data() const { return data_; }

  bool is_finite() const;
  double max_abs() const;
  double frobenius_norm() const;
  double trace() const;

  // this += a * x
  void axpy(double a, const SymMatrix& x);
  void scale(double a);

  Matrix to_matrix() const;

  SymMatrix& operator+=(const SymMatrix& o) { axpy(1.0, o); return *this; }
  SymMatrix& operator-=(const SymMatrix& o) { axpy(-1.0, o); return *this; }

 private:
  int dim_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double a, SymMatrix m);

// Eigenvalues sorted non-increasing; eigenvector i is column i of
// `eigenvectors`, matching eigenvalues[i].
struct EigDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// Cyclic Jacobi. Converges when the off-diagonal Frobenius norm drops below
// 1e-12 * ||M||_F; capped at 100 sweeps, after which a NumericalError carrying
// the remaining off-diagonal residual is thrown. The result is checked against
// the orthogonality and reconstruction tolerances before being returned.
EigDecomposition eig_sym(const SymMatrix& m);

double lambda_max(const SymMatrix& m);
double lambda_min(const SymMatrix& m);
double spectral_norm(const SymMatrix& m);      // max |eigenvalue|
double schatten_norm(const SymMatrix& m, double p);

// V * diag(d) * V^T as a symmetric matrix.
SymMatrix conjugate_diag(const Matrix& v, std::span<const double> d);
// V^T * H * V (V orthogonal), symmetrized.
SymMatrix rotate_into_basis(const Matrix& v, const SymMatrix& h);
// U * H * U^T, symmetrized (U orthogonal).
SymMatrix conjugate(const Matrix& u, const SymMatrix& h);

// f applied through the spectrum: V diag(f(lambda_i)) V^T.
template <class F>
SymMatrix spectral_map(const EigDecomposition& eig, F&& f) {
  std::vector<double> d(eig.eigenvalues.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = f(eig.eigenvalues[i]);
  return conjugate_diag(eig.eigenvectors, d);
}

}  // namespace spectra
