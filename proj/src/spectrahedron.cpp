#include "spectra/spectrahedron.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spectra/rng.hpp"

namespace spectra {

namespace {

constexpr double kSignTol = 1e-9;
constexpr double kRegularityTol = 1e-8;

SymMatrix weighted_sum_minus(const std::vector<SymMatrix>& a, const SymMatrix& b,
                             std::span<const double> x) {
  if (x.size() != a.size()) throw std::invalid_argument("membership: dimension mismatch");
  SymMatrix m = -1.0 * SymMatrix(b);
  for (size_t i = 0; i < a.size(); ++i) m.axpy(x[i], a[i]);
  return m;
}

}  // namespace

PositiveSpectrahedron::PositiveSpectrahedron(std::vector<SymMatrix> a, SymMatrix b,
                                             MatrixSign sign, double declared_tau,
                                             double declared_m, double declared_gamma)
    : a_(std::move(a)),
      b_(std::move(b)),
      sign_(sign),
      declared_tau_(declared_tau),
      declared_m_(declared_m),
      declared_gamma_(declared_gamma) {
  if (a_.empty()) throw std::invalid_argument("PositiveSpectrahedron: no coefficients");
  const int k = b_.dim();
  for (const SymMatrix& ai : a_) {
    if (ai.dim() != k)
      throw std::invalid_argument("PositiveSpectrahedron: coefficient dimension mismatch");
    const EigDecomposition eig = eig_sym(ai);
    if (sign_ == MatrixSign::kPsd && eig.eigenvalues.back() < -kSignTol)
      throw std::invalid_argument("PositiveSpectrahedron: coefficient not PSD");
    if (sign_ == MatrixSign::kNsd && eig.eigenvalues.front() > kSignTol)
      throw std::invalid_argument("PositiveSpectrahedron: coefficient not NSD");
  }
}

SymMatrix PositiveSpectrahedron::evaluate(std::span<const double> x) const {
  return weighted_sum_minus(a_, b_, x);
}

double PositiveSpectrahedron::lambda_max_at(std::span<const double> x) const {
  return lambda_max(evaluate(x));
}

bool PositiveSpectrahedron::contains(std::span<const double> x, double tol) const {
  return lambda_max_at(x) <= tol;
}

RegularityReport check_regularity(const PositiveSpectrahedron& s) {
  RegularityReport rep;
  const double flip = s.sign() == MatrixSign::kPsd ? 1.0 : -1.0;
  SymMatrix squares(s.k());
  rep.sign_ok = true;
  for (int i = 0; i < s.n(); ++i) {
    const EigDecomposition eig = eig_sym(s.a(i));
    const double lo = flip > 0 ? eig.eigenvalues.back() : -eig.eigenvalues.front();
    const double hi = flip > 0 ? eig.eigenvalues.front() : -eig.eigenvalues.back();
    if (lo < -kSignTol) rep.sign_ok = false;
    rep.tau_actual = std::max(rep.tau_actual, hi);
    // (A^i)^2 through the same decomposition.
    std::vector<double> sq(eig.eigenvalues);
    for (double& v : sq) v *= v;
    squares += conjugate_diag(eig.eigenvectors, sq);
  }
  const EigDecomposition sq_eig = eig_sym(squares);
  rep.lambda_min_sum = sq_eig.eigenvalues.back();
  rep.lambda_max_sum = sq_eig.eigenvalues.front();
  rep.gamma_actual = spectral_norm(s.b());
  rep.pass = rep.sign_ok && rep.tau_actual <= s.declared_tau() + kRegularityTol &&
             rep.lambda_min_sum >= 1.0 - kRegularityTol &&
             rep.lambda_max_sum <= s.declared_m() + kRegularityTol &&
             rep.gamma_actual <= s.declared_gamma() + kRegularityTol;
  return rep;
}

bool sylvester_contains(const PositiveSpectrahedron& s, std::span<const double> x) {
  // Slack matrix B - sum x_i A^i; membership iff it is PSD, which away from
  // the boundary is equivalent to all leading principal minors positive.
  const int k = s.k();
  SymMatrix slack = s.evaluate(x);
  slack.scale(-1.0);
  // Gaussian elimination without pivoting tracks every leading minor at once:
  // after eliminating column j, the product of pivots 0..j equals the
  // (j+1)x(j+1) leading minor.
  Matrix m = slack.to_matrix();
  double minor = 1.0;
  for (int j = 0; j < k; ++j) {
    minor *= m(j, j);
    if (!(minor > 0.0)) return false;
    for (int r = j + 1; r < k; ++r) {
      const double f = m(r, j) / m(j, j);
      for (int c = j; c < k; ++c) m(r, c) -= f * m(j, c);
    }
  }
  return true;
}

SpectrahedronPair::SpectrahedronPair(PositiveSpectrahedron psd, PositiveSpectrahedron nsd)
    : s1(std::move(psd)), s2(std::move(nsd)) {
  if (s1.sign() != MatrixSign::kPsd || s2.sign() != MatrixSign::kNsd)
    throw std::invalid_argument("SpectrahedronPair: expected (PSD, NSD) order");
  if (s1.n() != s2.n()) throw std::invalid_argument("SpectrahedronPair: n mismatch");
}

PackedSpectrahedron::PackedSpectrahedron(std::vector<SymMatrix> a, SymMatrix b, int block_dim)
    : a_(std::move(a)), b_(std::move(b)), block_dim_(block_dim) {
  for (const SymMatrix& ai : a_)
    if (ai.dim() != b_.dim())
      throw std::invalid_argument("PackedSpectrahedron: dimension mismatch");
}

SymMatrix PackedSpectrahedron::evaluate(std::span<const double> x) const {
  return weighted_sum_minus(a_, b_, x);
}

double PackedSpectrahedron::lambda_max_at(std::span<const double> x) const {
  // Block-diagonal spectrum: the maximum over the two blocks.
  return std::max(block_lambda_max_at(0, x), block_lambda_max_at(1, x));
}

double PackedSpectrahedron::block_lambda_max_at(int block, std::span<const double> x) const {
  if (x.size() != a_.size()) throw std::invalid_argument("membership: dimension mismatch");
  const int off = block * block_dim_;
  SymMatrix m(block_dim_);
  for (int i = 0; i < block_dim_; ++i)
    for (int j = i; j < block_dim_; ++j) m.set(i, j, -b_(off + i, off + j));
  for (size_t l = 0; l < a_.size(); ++l) {
    const double xl = x[l];
    for (int i = 0; i < block_dim_; ++i)
      for (int j = i; j < block_dim_; ++j)
        m.set(i, j, m(i, j) + xl * a_[l](off + i, off + j));
  }
  return lambda_max(m);
}

bool PackedSpectrahedron::contains(std::span<const double> x, double tol) const {
  return lambda_max_at(x) <= tol;
}

PackedSpectrahedron pack_intersection(const SpectrahedronPair& pair) {
  const int k1 = pair.s1.k();
  const int k2 = pair.s2.k();
  if (k1 != k2) throw std::invalid_argument("pack_intersection: block dimension mismatch");
  const int k = k1;
  auto pack = [k](const SymMatrix& top, const SymMatrix& bottom) {
    SymMatrix m(2 * k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        m.set(i, j, top(i, j));
        m.set(k + i, k + j, bottom(i, j));
      }
    return m;
  };
  std::vector<SymMatrix> a;
  a.reserve(pair.s1.n());
  for (int i = 0; i < pair.s1.n(); ++i) a.push_back(pack(pair.s1.a(i), pair.s2.a(i)));
  return PackedSpectrahedron(std::move(a), pack(pair.s1.b(), pair.s2.b()), k);
}

namespace {

Matrix random_gaussian_matrix(int k, CounterRng& rng) {
  Matrix w(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) w(i, j) = rng.next_gaussian();
  return w;
}

SymMatrix clip_spectrum(const SymMatrix& m, double lo, double hi) {
  return spectral_map(eig_sym(m), [lo, hi](double l) { return std::clamp(l, lo, hi); });
}

SymMatrix sum_of_squares(const std::vector<SymMatrix>& a) {
  SymMatrix s(a.front().dim());
  for (const SymMatrix& ai : a) {
    const EigDecomposition eig = eig_sym(ai);
    std::vector<double> sq(eig.eigenvalues);
    for (double& v : sq) v *= v;
    s += conjugate_diag(eig.eigenvectors, sq);
  }
  return s;
}

// Blend each coefficient toward tau*I. At blend = 1 the family is exactly
// {tau*I}, for which lambda_min(sum squares) = n*tau^2 >= 1 by precondition.
std::vector<SymMatrix> blend_family(const std::vector<SymMatrix>& a, double tau, double blend) {
  std::vector<SymMatrix> out(a);
  const SymMatrix eye = SymMatrix::identity(a.front().dim(), tau);
  for (SymMatrix& m : out) {
    m.scale(1.0 - blend);
    m.axpy(blend, eye);
  }
  return out;
}

}  // namespace

PositiveSpectrahedron random_regular_instance(const InstanceParams& params, uint64_t seed) {
  if (params.n < 1 || params.k < 1) throw std::invalid_argument("instance: n, k must be positive");
  if (params.tau <= 0.0 || params.m < 1.0 || params.gamma < 0.0)
    throw std::invalid_argument("instance: need tau > 0, M >= 1, gamma >= 0");
  if (double(params.n) * params.tau * params.tau < 1.0)
    throw std::invalid_argument("instance: infeasible, requires n * tau^2 >= 1");

  CounterRng rng(seed, "regular-instance");
  const int max_attempts = 64;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<SymMatrix> a;
    a.reserve(params.n);
    for (int i = 0; i < params.n; ++i) {
      const Matrix w = random_gaussian_matrix(params.k, rng);
      SymMatrix wishart = SymMatrix::symmetric_part(w * w.transposed());
      a.push_back(clip_spectrum(wishart, 0.0, params.tau));
    }

    double smin = lambda_min(sum_of_squares(a));
    if (smin < 1.0) {
      // Rescaling up would push some coefficient past tau*I, so blend the
      // family toward tau*I just enough to restore the lower bound.
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lambda_min(sum_of_squares(blend_family(a, params.tau, mid))) >= 1.0)
          hi = mid;
        else
          lo = mid;
      }
      if (hi > 1.0 - 1e-9) hi = 1.0;
      a = blend_family(a, params.tau, hi);
      smin = lambda_min(sum_of_squares(a));
      if (smin < 1.0) continue;
    }

    const double c = 1.0 / std::sqrt(smin);
    if (c < 1.0)
      for (SymMatrix& m : a) m.scale(c);

    const SymMatrix squares = sum_of_squares(a);
    if (lambda_max(squares) > params.m || lambda_min(squares) < 1.0 - kRegularityTol) continue;

    SymMatrix b(params.k);
    if (params.gamma > 0.0) {
      b = SymMatrix::symmetric_part(random_gaussian_matrix(params.k, rng));
      const double target = params.gamma * (0.25 + 0.5 * rng.next_unit());
      b.scale(target / spectral_norm(b));
    }

    if (params.sign == MatrixSign::kNsd)
      for (SymMatrix& m : a) m.scale(-1.0);

    PositiveSpectrahedron s(std::move(a), std::move(b), params.sign, params.tau, params.m,
                            params.gamma);
    if (check_regularity(s).pass) return s;
  }
  throw NumericalError("random_regular_instance: no admissible draw found", 0.0);
}

SpectrahedronPair random_regular_pair(const InstanceParams& params, uint64_t seed) {
  InstanceParams p = params;
  p.sign = MatrixSign::kPsd;
  PositiveSpectrahedron s1 = random_regular_instance(p, mix64(seed ^ 0x517cc1b727220a95ull));
  p.sign = MatrixSign::kNsd;
  PositiveSpectrahedron s2 = random_regular_instance(p, mix64(seed ^ 0x2545f4914f6cdd1dull));
  return SpectrahedronPair(std::move(s1), std::move(s2));
}

std::string instance_to_json(const PositiveSpectrahedron& s) {
  nlohmann::json j;
  j["n"] = s.n();
  j["k"] = s.k();
  j["sign"] = s.sign() == MatrixSign::kPsd ? "psd" : "nsd";
  j["tau"] = s.declared_tau();
  j["M"] = s.declared_m();
  j["gamma"] = s.declared_gamma();
  auto rows = [](const SymMatrix& m) {
    return std::vector<double>(m.data().begin(), m.data().end());
  };
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < s.n(); ++i) arr.push_back(rows(s.a(i)));
  j["A"] = std::move(arr);
  j["B"] = rows(s.b());
  return j.dump();
}

PositiveSpectrahedron instance_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  const std::string sign_str = j.at("sign").get<std::string>();
  if (sign_str != "psd" && sign_str != "nsd")
    throw std::invalid_argument("instance json: sign must be psd or nsd");
  const MatrixSign sign = sign_str == "psd" ? MatrixSign::kPsd : MatrixSign::kNsd;
  auto mat = [k](const std::vector<double>& v) { return SymMatrix::from_rows(k, v); };
  const auto& arr = j.at("A");
  if (static_cast<int>(arr.size()) != n)
    throw std::invalid_argument("instance json: wrong number of coefficient matrices");
  std::vector<SymMatrix> a;
  a.reserve(n);
  for (const auto& rows : arr) a.push_back(mat(rows.get<std::vector<double>>()));
  SymMatrix b = mat(j.at("B").get<std::vector<double>>());
  return PositiveSpectrahedron(std::move(a), std::move(b), sign, j.at("tau").get<double>(),
                               j.at("M").get<double>(), j.at("gamma").get<double>());
}

void save_instance(const std::string& path, const PositiveSpectrahedron& s) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_instance: cannot open " + path);
  out << instance_to_json(s) << "\n";
}

PositiveSpectrahedron load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_instance: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

}  // namespace spectra
