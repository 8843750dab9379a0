#pragma once

// 2-forms as skew-symmetric matrices: eigenvalue moduli, Pfaffian, and the
// elementary symmetric invariants s_{2i} of the squared moduli.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sdforms/errors.hpp"
#include "sdforms/exterior.hpp"

namespace sdforms {

/// A 2-form sum_{i<j} w_ij e_i ^ e_j held as its 2n x 2n skew matrix.
class SkewForm {
 public:
  /// The input is antisymmetrized: (m - m^T) / 2.
  explicit SkewForm(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw input_error("skew form: matrix must be square");
    require_valid_dim(static_cast<int>(m.rows()));
    matrix_ = 0.5 * (m - m.transpose());
  }

  static SkewForm zero(int dim) {
    require_valid_dim(dim);
    return SkewForm(Eigen::MatrixXd::Zero(dim, dim));
  }

  /// e_12 + e_34 + ... + e_{2n-1,2n}.
  static SkewForm standard(int dim) { return block_diagonal(std::vector<double>(static_cast<std::size_t>(dim / 2), 1.0)); }

  /// sum_k blocks[k] e_{2k+1,2k+2}.
  static SkewForm block_diagonal(const std::vector<double>& blocks) {
    const int dim = 2 * static_cast<int>(blocks.size());
    require_valid_dim(dim);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim / 2; ++k) {
      m(2 * k, 2 * k + 1) = blocks[static_cast<std::size_t>(k)];
      m(2 * k + 1, 2 * k) = -blocks[static_cast<std::size_t>(k)];
    }
    return SkewForm(m);
  }

  static SkewForm from_kform(const KForm& f) {
    if (f.degree() != 2) throw input_error("skew form: expected a 2-form, got degree " + std::to_string(f.degree()));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(f.dim(), f.dim());
    for (std::size_t p = 0; p < f.size(); ++p) {
      const MultiIndex mi = f.basis_index(p);
      const auto idx = mi.indices();
      const int i = idx[0] - 1;
      const int j = idx[1] - 1;
      m(i, j) = f.coeffs()[p];
      m(j, i) = -f.coeffs()[p];
    }
    return SkewForm(m);
  }

  KForm to_kform() const {
    KForm f(dim(), 2);
    for (std::size_t p = 0; p < f.size(); ++p) {
      const MultiIndex mi = f.basis_index(p);
      const auto idx = mi.indices();
      f.coeffs()[p] = matrix_(idx[0] - 1, idx[1] - 1);
    }
    return f;
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int half_dim() const { return dim() / 2; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// 1-based component w_ij.
  double operator()(int i, int j) const { return matrix_(i - 1, j - 1); }
  double max_abs() const { return matrix_.cwiseAbs().maxCoeff(); }
  bool is_zero() const { return (matrix_.array() == 0.0).all(); }

  friend SkewForm operator+(const SkewForm& a, const SkewForm& b) { return SkewForm(a.matrix_ + b.matrix_); }
  friend SkewForm operator-(const SkewForm& a, const SkewForm& b) { return SkewForm(a.matrix_ - b.matrix_); }
  friend SkewForm operator*(double s, const SkewForm& a) { return SkewForm(s * a.matrix_); }

 private:
  Eigen::MatrixXd matrix_;
};

/// Q^T w Q for an orthogonal Q.
inline SkewForm conjugate(const SkewForm& w, const Eigen::MatrixXd& q) {
  return SkewForm(q.transpose() * w.matrix() * q);
}

/// Eigenvalue moduli (eigenvalues of the matrix are +-i lambda_k) and the signed Pfaffian.
struct Spectrum {
  std::vector<double> lambdas;  // n values, descending, nonnegative
  double pfaffian = 0.0;
};

/// s[i-1] = s_{2i} = e_i(lambda_1^2, ..., lambda_n^2); q[i-1] = s_{2i} / C(n, i).
struct InvariantSet {
  std::vector<double> s;
  std::vector<double> q;

  int half_dim() const { return static_cast<int>(s.size()); }
  double s2i(int i) const { return s[static_cast<std::size_t>(i - 1)]; }
  double qi(int i) const { return q[static_cast<std::size_t>(i - 1)]; }
};

/// Pfaffian by skew Gaussian elimination with partial pivoting (Parlett-Reid
/// style). Pf(e_12 + e_34 + ...) = +1.
inline double pfaffian(const SkewForm& w) {
  Eigen::MatrixXd a = w.matrix();
  const Eigen::Index n = a.rows();
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      const Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

/// Moduli from the singular values of w (each lambda appears twice), Pfaffian
/// from the independent elimination route.
///
/// Singular values carry absolute error ~eps * lambda_max on lambda itself,
/// whereas eigenvalues of -w^2 carry it on lambda^2, which costs a factor
/// lambda_max / lambda_min in relative accuracy for the small moduli.
inline Spectrum spectrum(const SkewForm& w) {
  const int n = w.half_dim();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w.matrix());
  if (svd.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "spectrum: singular value decomposition failed (dim " << w.dim() << ", max |w_ij| " << w.max_abs() << ")";
    throw numerical_error(msg.str());
  }
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  const double scale = std::max(sv(0), 1.0);
  Spectrum out;
  out.lambdas.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = sv(2 * k);
    const double b = sv(2 * k + 1);
    if (!std::isfinite(a) || std::abs(a - b) > 1e-7 * scale) {
      std::ostringstream msg;
      msg << "spectrum: singular values not paired at position " << k << " (" << a << " vs " << b << ")";
      throw numerical_error(msg.str());
    }
    out.lambdas.push_back(0.5 * (a + b));
  }
  out.pfaffian = pfaffian(w);
  return out;
}

/// Elementary symmetric functions of the lambda_k^2, via the ascending
/// recurrence e_i <- e_i + x e_{i-1}.
inline InvariantSet invariants(const Spectrum& sp) {
  const int n = static_cast<int>(sp.lambdas.size());
  std::vector<double> e(static_cast<std::size_t>(n + 1), 0.0);
  e[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    const double x = sp.lambdas[static_cast<std::size_t>(k)] * sp.lambdas[static_cast<std::size_t>(k)];
    for (int i = k + 1; i >= 1; --i) e[static_cast<std::size_t>(i)] += x * e[static_cast<std::size_t>(i - 1)];
  }
  InvariantSet out;
  for (int i = 1; i <= n; ++i) {
    out.s.push_back(e[static_cast<std::size_t>(i)]);
    out.q.push_back(e[static_cast<std::size_t>(i)] / static_cast<double>(binomial(n, i)));
  }
  return out;
}

inline InvariantSet invariants(const SkewForm& w) { return invariants(spectrum(w)); }

/// |(w^i, w^i) / (i!)^2 - s_{2i}| / max(1, s_{2i}) for i = 1..n: the exterior
/// algebra route against the spectral route.
inline std::vector<double> eq21_residuals(const SkewForm& w) {
  const InvariantSet inv = invariants(w);
  const KForm form = w.to_kform();
  std::vector<double> out;
  KForm power = KForm::scalar(w.dim(), 1.0);
  for (int i = 1; i <= w.half_dim(); ++i) {
    power = wedge(power, form);
    const double lhs = inner(power, power) / (factorial(i) * factorial(i));
    const double s = inv.s2i(i);
    out.push_back(std::abs(lhs - s) / std::max(1.0, s));
  }
  return out;
}

/// Gaps of the weighted-mean chain, each divided by q_1 (chain) or q_r^2
/// (Newton) so they are scale free. Nonnegative up to rounding; all zero iff
/// the lambdas coincide.
struct MaclaurinGaps {
  std::vector<double> chain;   // q_r^{1/r} - q_{r+1}^{1/(r+1)}, r = 1..n-1
  double total = 0.0;          // q_1 - q_n^{1/n}
  std::vector<double> newton;  // q_r^2 - q_{r-1} q_{r+1}, r = 1..n-1 (q_0 = 1)

  double min_gap() const {
    double m = total;
    for (double g : chain) m = std::min(m, g);
    for (double g : newton) m = std::min(m, g);
    return m;
  }
  double max_gap() const {
    double m = total;
    for (double g : chain) m = std::max(m, g);
    for (double g : newton) m = std::max(m, g);
    return m;
  }
};

inline MaclaurinGaps maclaurin_gaps(const InvariantSet& inv) {
  MaclaurinGaps out;
  const int n = inv.half_dim();
  const double q1 = inv.qi(1);
  if (q1 <= 0.0) {
    out.chain.assign(static_cast<std::size_t>(n - 1), 0.0);
    out.newton.assign(static_cast<std::size_t>(n - 1), 0.0);
    return out;
  }
  auto mean = [&](int r) { return std::pow(std::max(inv.qi(r), 0.0), 1.0 / r); };
  for (int r = 1; r < n; ++r) out.chain.push_back((mean(r) - mean(r + 1)) / q1);
  out.total = (q1 - mean(n)) / q1;
  for (int r = 1; r < n; ++r) {
    const double prev = r == 1 ? 1.0 : inv.qi(r - 1);
    const double qr = inv.qi(r);
    // q_r^2 is homogeneous of degree 4r in lambda; normalize by q_1^{2r}.
    out.newton.push_back((qr * qr - prev * inv.qi(r + 1)) / std::pow(q1, 2 * r));
  }
  return out;
}

}  // namespace sdforms
