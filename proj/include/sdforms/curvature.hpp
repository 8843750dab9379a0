#pragma once

// SO(N) curvature at a point: an N x N skew matrix of 2-forms F_ab, its
// invariant forms sigma_2 and sigma_4, and the pointwise bounds relating
// *sigma_2^2 and *sigma_4 to <F,F>, (sigma_2, sigma_2) and Phi.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sdforms/errors.hpp"
#include "sdforms/exterior.hpp"
#include "sdforms/random.hpp"
#include "sdforms/skew.hpp"

namespace sdforms {

/// Entries F_ab for 1 <= a < b <= N; F_ba = -F_ab and F_aa = 0 are implied.
class CurvatureMatrix {
 public:
  CurvatureMatrix(int dim, int fiber) : dim_(dim), fiber_(fiber) {
    require_valid_dim(dim);
    if (fiber < 2) throw input_error("curvature: fiber size N must be at least 2, got " + std::to_string(fiber));
    upper_.assign(binomial(fiber, 2), KForm(dim, 2));
  }

  int dim() const { return dim_; }
  int fiber() const { return fiber_; }

  /// F_ab with 1-based fiber indices.
  KForm entry(int a, int b) const {
    check(a, b);
    if (a == b) return KForm(dim_, 2);
    if (a < b) return upper_[slot(a, b)];
    return -upper_[slot(b, a)];
  }

  /// Stored entry F_ab for a < b.
  const KForm& upper(int a, int b) const {
    check(a, b);
    if (a >= b) throw input_error("curvature: upper() needs a < b");
    return upper_[slot(a, b)];
  }

  /// Sets F_ab (and hence F_ba = -F_ab).
  void set(int a, int b, const KForm& f) {
    check(a, b);
    if (a == b) throw input_error("curvature: diagonal entries are zero");
    if (f.dim() != dim_ || f.degree() != 2) {
      throw input_error("curvature: entries must be 2-forms in dimension " + std::to_string(dim_));
    }
    if (a < b) upper_[slot(a, b)] = f;
    else upper_[slot(b, a)] = -f;
  }

  /// Stored pairs (a, b), a < b, in lexicographic order.
  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 1; a <= fiber_; ++a)
      for (int b = a + 1; b <= fiber_; ++b) out.emplace_back(a, b);
    return out;
  }

  CurvatureMatrix scaled(double c) const {
    CurvatureMatrix out = *this;
    for (auto& f : out.upper_) f *= c;
    return out;
  }

 private:
  void check(int a, int b) const {
    if (a < 1 || b < 1 || a > fiber_ || b > fiber_) {
      throw input_error("curvature: fiber index (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") outside [1, " + std::to_string(fiber_) + "]");
    }
  }
  std::size_t slot(int a, int b) const {
    // rows 1..a-1 hold (N - r) entries each
    const int before = (a - 1) * fiber_ - (a - 1) * a / 2;
    return static_cast<std::size_t>(before + (b - a - 1));
  }

  int dim_;
  int fiber_;
  std::vector<KForm> upper_;
};

/// F' = R^T F R for a constant R in O(N).
inline CurvatureMatrix conjugate(const CurvatureMatrix& f, const Eigen::MatrixXd& r) {
  const int n = f.fiber();
  if (r.rows() != n || r.cols() != n) throw input_error("curvature: rotation must be N x N");
  CurvatureMatrix out(f.dim(), n);
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      KForm acc(f.dim(), 2);
      for (int c = 1; c <= n; ++c) {
        for (int d = c + 1; d <= n; ++d) {
          // F_cd and F_dc = -F_cd both contribute.
          const double w = r(c - 1, a - 1) * r(d - 1, b - 1) - r(d - 1, a - 1) * r(c - 1, b - 1);
          if (w != 0.0) acc += w * f.upper(c, d);
        }
      }
      out.set(a, b, acc);
    }
  }
  return out;
}

struct CurvatureInvariants {
  double f_norm_sq = 0.0;  // <F,F> = 2 sum_{a<b} (F_ab, F_ab)
  KForm sigma2;            // sum_{a<b} F_ab ^ F_ab
  KForm sigma4;            // sum_{a<b<c<d} (F_ab F_cd - F_ac F_bd + F_ad F_bc)^2
  double sigma2_norm_sq = 0.0;         // (sigma_2, sigma_2)
  std::optional<double> sigma2_sq_top{};  // *(sigma_2 ^ sigma_2), dim 8 only
  std::optional<double> sigma4_top{};   // *sigma_4, dim 8 only
  double phi = 0.0;             // sum over disjoint pairs {i,j},{k,l} of (F_ij, F_kl)^2
  double ortho_residual = 0.0;  // max |(F_ij, F_kl) - delta_ik delta_jl|
};

inline CurvatureInvariants invariants(const CurvatureMatrix& f) {
  const int dim = f.dim();
  const int n = f.fiber();
  const auto pairs = f.pairs();

  CurvatureInvariants r{.sigma2 = KForm(dim, 4), .sigma4 = KForm(dim, std::min(8, dim + 1))};
  for (const auto& [a, b] : pairs) {
    const KForm& e = f.upper(a, b);
    r.f_norm_sq += 2.0 * inner(e, e);
    r.sigma2 += wedge(e, e);
  }
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int d = c + 1; d <= n; ++d) {
          const KForm minor = wedge(f.upper(a, b), f.upper(c, d)) - wedge(f.upper(a, c), f.upper(b, d)) +
                              wedge(f.upper(a, d), f.upper(b, c));
          r.sigma4 += wedge(minor, minor);
        }
  r.sigma2_norm_sq = inner(r.sigma2, r.sigma2);
  if (dim == 8) {
    r.sigma2_sq_top = top_scalar(wedge(r.sigma2, r.sigma2)).value;
    r.sigma4_top = top_scalar(r.sigma4).value;
  }

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = p; q < pairs.size(); ++q) {
      const auto [i, j] = pairs[p];
      const auto [k, l] = pairs[q];
      const double ip = inner(f.upper(i, j), f.upper(k, l));
      r.ortho_residual = std::max(r.ortho_residual, std::abs(ip - (p == q ? 1.0 : 0.0)));
      if (i != k && i != l && j != k && j != l) r.phi += ip * ip;
    }
  }
  return r;
}

/// t^4 coefficient of det(I + tF), expanded over all permutations of the fiber
/// indices with form-valued products. Exponential cost; N <= 6.
inline KForm sigma4_oracle(const CurvatureMatrix& f) {
  const int n = f.fiber();
  if (n > 6) throw capability_error("sigma4_oracle: N = " + std::to_string(n) + " exceeds the brute-force limit 6");
  const int dim = f.dim();
  KForm out(dim, std::min(8, dim + 1));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int moved = 0;
    for (int i = 0; i < n; ++i) moved += perm[static_cast<std::size_t>(i)] != i;
    if (moved != 4) continue;
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
    KForm term = KForm::scalar(dim, (inversions & 1) ? -1.0 : 1.0);
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      if (j != i) term = wedge(term, f.entry(i + 1, j + 1));
    }
    out += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs; >= 0 when the bound holds
  bool saturated = false;
  bool applicable = true;

  double scale() const { return std::max(std::abs(lhs), std::abs(rhs)); }
  bool holds(double tol = 1e-9) const { return !applicable || slack >= -tol * scale(); }
};

inline BoundReport make_bound_report(std::string name, double lhs, double rhs, double tol) {
  BoundReport r{.name = std::move(name), .lhs = lhs, .rhs = rhs, .slack = rhs - lhs};
  r.saturated = std::abs(r.slack) <= tol * std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return r;
}

inline BoundReport not_applicable_report(std::string name) {
  BoundReport r{.name = std::move(name)};
  r.applicable = false;
  return r;
}

/// <F,F>^2 >= (1/4)(2(n-1)/n)(sigma_2, sigma_2) >= (1/4)(2(n-1)/n) *sigma_2^2.
/// The second report compares (sigma_2, sigma_2) with *sigma_2^2 directly and
/// exists only in dimension 8, where sigma_2^2 is a top form.
inline std::pair<BoundReport, BoundReport> bound_eq32(const CurvatureMatrix& f, const CurvatureInvariants& inv,
                                                      double tol = 1e-9) {
  const int n = f.dim() / 2;
  const double c = 0.25 * 2.0 * (n - 1) / n;
  BoundReport first = make_bound_report("eq32_first", c * inv.sigma2_norm_sq, inv.f_norm_sq * inv.f_norm_sq, tol);
  BoundReport second = inv.sigma2_sq_top
                           ? make_bound_report("eq32_second", *inv.sigma2_sq_top, inv.sigma2_norm_sq, tol)
                           : not_applicable_report("eq32_second");
  return {first, second};
}

inline std::pair<BoundReport, BoundReport> bound_eq32(const CurvatureMatrix& f, double tol = 1e-9) {
  return bound_eq32(f, invariants(f), tol);
}

/// (3/4)[6 Phi + (3/8) C <F,F>^2 - C (sigma_2, sigma_2)] with C = C(N-2, 2).
/// Shared by the N = 4 and general-N bounds so that they agree exactly at N = 4.
inline double sigma4_bound_rhs(double phi, double f_norm_sq, double sigma2_norm_sq, double c) {
  return 0.75 * (6.0 * phi + 0.375 * c * f_norm_sq * f_norm_sq - c * sigma2_norm_sq);
}

/// |*sigma_4| <= (9/2) Phi + (9/32) <F,F>^2 - (3/4)(sigma_2, sigma_2) for N = 4, dim 8.
inline BoundReport bound_eq33(const CurvatureMatrix& f, const CurvatureInvariants& inv, double tol = 1e-9) {
  if (f.dim() != 8 || f.fiber() != 4) {
    throw input_error("bound_eq33 needs dim 8 and N = 4, got dim " + std::to_string(f.dim()) + ", N = " +
                      std::to_string(f.fiber()));
  }
  return make_bound_report("eq33", std::abs(*inv.sigma4_top),
                           sigma4_bound_rhs(inv.phi, inv.f_norm_sq, inv.sigma2_norm_sq, 1.0), tol);
}

inline BoundReport bound_eq33(const CurvatureMatrix& f, double tol = 1e-9) { return bound_eq33(f, invariants(f), tol); }

/// |*sigma_4| <= (3/4)[6 Phi + (3/8) C(N-2,2) <F,F>^2 - C(N-2,2)(sigma_2, sigma_2)], dim 8.
inline BoundReport bound_eq35(const CurvatureMatrix& f, const CurvatureInvariants& inv, double tol = 1e-9) {
  if (f.dim() != 8) throw input_error("bound_eq35 needs dim 8, got " + std::to_string(f.dim()));
  const double c = static_cast<double>(binomial(f.fiber() - 2, 2));
  return make_bound_report("eq35", std::abs(*inv.sigma4_top),
                           sigma4_bound_rhs(inv.phi, inv.f_norm_sq, inv.sigma2_norm_sq, c), tol);
}

inline BoundReport bound_eq35(const CurvatureMatrix& f, double tol = 1e-9) { return bound_eq35(f, invariants(f), tol); }

/// Every bound that applies to f, in the order eq32_first, eq32_second, eq33, eq35.
inline std::vector<BoundReport> all_bounds(const CurvatureMatrix& f, const CurvatureInvariants& inv,
                                           double tol = 1e-9) {
  auto [first, second] = bound_eq32(f, inv, tol);
  std::vector<BoundReport> out{first, second};
  out.push_back(f.dim() == 8 && f.fiber() == 4 ? bound_eq33(f, inv, tol) : not_applicable_report("eq33"));
  out.push_back(f.dim() == 8 ? bound_eq35(f, inv, tol) : not_applicable_report("eq35"));
  return out;
}

/// F_ab = (F0)_ab w.
inline CurvatureMatrix product_config(const SkewForm& w, const Eigen::MatrixXd& f0) {
  if (f0.rows() != f0.cols()) throw input_error("product_config: F0 must be square");
  const double tol = 1e-14 * std::max(1.0, f0.cwiseAbs().maxCoeff());
  if ((f0 + f0.transpose()).cwiseAbs().maxCoeff() > tol) throw input_error("product_config: F0 must be skew-symmetric");
  CurvatureMatrix out(w.dim(), static_cast<int>(f0.rows()));
  const KForm form = w.to_kform();
  for (const auto& [a, b] : out.pairs()) out.set(a, b, f0(a - 1, b - 1) * form);
  return out;
}

/// N = 4 with F_12 = F_34 = w, F_13 = -F_24 = w, F_14 = F_23 = w. Saturates the
/// N = 4 sigma_4 bound when w is strongly self-dual in dimension 8.
inline CurvatureMatrix so4_saturating(const SkewForm& w) {
  CurvatureMatrix out(w.dim(), 4);
  const KForm form = w.to_kform();
  out.set(1, 2, form);
  out.set(3, 4, form);
  out.set(1, 3, form);
  out.set(2, 4, -form);
  out.set(1, 4, form);
  out.set(2, 3, form);
  return out;
}

enum class CurvatureKind { dense, sparse, product };

/// Random curvature sample: dense has N(0,1) coefficients everywhere; sparse
/// fills at most three randomly chosen entries; product is w F0 with Gaussian w
/// and F0.
inline CurvatureMatrix random_curvature(int dim, int fiber, CurvatureKind kind, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CurvatureMatrix out(dim, fiber);
  auto gaussian_form = [&] {
    KForm f(dim, 2);
    for (double& c : f.coeffs()) c = normal(rng);
    return f;
  };
  auto pairs = out.pairs();
  switch (kind) {
    case CurvatureKind::dense:
      for (const auto& [a, b] : pairs) out.set(a, b, gaussian_form());
      break;
    case CurvatureKind::sparse: {
      std::shuffle(pairs.begin(), pairs.end(), rng);
      const std::size_t count = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, pairs.size()))(rng);
      for (std::size_t i = 0; i < count; ++i) out.set(pairs[i].first, pairs[i].second, gaussian_form());
      break;
    }
    case CurvatureKind::product: {
      const KForm w = gaussian_form();
      for (const auto& [a, b] : pairs) out.set(a, b, normal(rng) * w);
      break;
    }
  }
  return out;
}

}  // namespace sdforms
