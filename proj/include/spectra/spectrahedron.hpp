// The positive-spectrahedron data model: membership evaluation, regularity
// checking, block-diagonal packing of PSD/NSD pairs, random test instances
// and JSON round-tripping.
//
// A positive spectrahedron is the set {x : sum_i x_i A^i <= B} where all
// coefficient matrices A^i share a semidefiniteness sign. Membership uses the
// closed condition lambda_max(sum_i x_i A^i - B) <= tol with tol = 0 by
// default.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spectra/sym_matrix.hpp"

namespace spectra {

enum class MatrixSign { kPsd, kNsd };

struct RegularityReport {
  double tau_actual = 0.0;      // max_i lambda_max(+-A^i)
  double lambda_min_sum = 0.0;  // lambda_min of sum_i (A^i)^2
  double lambda_max_sum = 0.0;  // lambda_max of sum_i (A^i)^2
  double gamma_actual = 0.0;    // spectral norm of B
  bool sign_ok = false;
  bool pass = false;
};

class PositiveSpectrahedron {
 public:
  // Validates dimensions and the common semidefiniteness of the A^i
  // (lambda_min >= -1e-9 for PSD, mirrored for NSD).
  PositiveSpectrahedron(std::vector<SymMatrix> a, SymMatrix b, MatrixSign sign,
                        double declared_tau, double declared_m, double declared_gamma);

  int n() const { return static_cast<int>(a_.size()); }
  int k() const { return b_.dim(); }
  MatrixSign sign() const { return sign_; }
  const SymMatrix& a(int i) const { return a_[i]; }
  const std::vector<SymMatrix>& coefficients() const { return a_; }
  const SymMatrix& b() const { return b_; }
  double declared_tau() const { return declared_tau_; }
  double declared_m() const { return declared_m_; }
  double declared_gamma() const { return declared_gamma_; }

  // sum_i x_i A^i - B
  SymMatrix evaluate(std::span<const double> x) const;
  double lambda_max_at(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = 0.0) const;

 private:
  std::vector<SymMatrix> a_;
  SymMatrix b_;
  MatrixSign sign_;
  double declared_tau_;
  double declared_m_;
  double declared_gamma_;
};

RegularityReport check_regularity(const PositiveSpectrahedron& s);

// Independent membership route: Sylvester's criterion on B - sum x_i A^i,
// requiring every leading principal minor to be strictly positive. Agrees
// with `contains` away from the measure-zero boundary.
bool sylvester_contains(const PositiveSpectrahedron& s, std::span<const double> x);

struct SpectrahedronPair {
  // s1 carries PSD coefficients, s2 NSD; both share n.
  SpectrahedronPair(PositiveSpectrahedron psd, PositiveSpectrahedron nsd);
  PositiveSpectrahedron s1;
  PositiveSpectrahedron s2;
};

// Block-diagonal packing diag(A^i_1, A^i_2), diag(B_1, B_2). The packed
// coefficients are neither PSD nor NSD, so this is its own type with the
// same membership semantics; membership equals the conjunction of the pair.
class PackedSpectrahedron {
 public:
  PackedSpectrahedron(std::vector<SymMatrix> a, SymMatrix b, int block_dim);

  int n() const { return static_cast<int>(a_.size()); }
  int k() const { return b_.dim(); }
  int block_dim() const { return block_dim_; }
  const SymMatrix& a(int i) const { return a_[i]; }
  const SymMatrix& b() const { return b_; }

  SymMatrix evaluate(std::span<const double> x) const;
  double lambda_max_at(std::span<const double> x) const;
  // lambda_max of block j in {0,1} of sum x_i A^i - B.
  double block_lambda_max_at(int block, std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = 0.0) const;

 private:
  std::vector<SymMatrix> a_;
  SymMatrix b_;
  int block_dim_;
};

PackedSpectrahedron pack_intersection(const SpectrahedronPair& pair);

struct InstanceParams {
  int n = 0;
  int k = 0;
  double tau = 0.0;
  double m = 1.0;
  double gamma = 0.0;
  MatrixSign sign = MatrixSign::kPsd;
};

// Random (tau, M)-regular instance, deterministic in `seed`. Requires
// n * tau^2 >= 1; throws std::invalid_argument otherwise. The returned
// instance always passes check_regularity against its declared parameters.
PositiveSpectrahedron random_regular_instance(const InstanceParams& params, uint64_t seed);

// Matched PSD/NSD pair sharing n (independent coefficient draws).
SpectrahedronPair random_regular_pair(const InstanceParams& params, uint64_t seed);

// JSON serialization; binary64 entries survive a round trip bit-exactly.
std::string instance_to_json(const PositiveSpectrahedron& s);
PositiveSpectrahedron instance_from_json(const std::string& text);
void save_instance(const std::string& path, const PositiveSpectrahedron& s);
PositiveSpectrahedron load_instance(const std::string& path);

}  // namespace spectra
