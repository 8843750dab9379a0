#pragma once

// Strong self-duality of 2-forms and the equivalent characterizations:
// equal eigenvalue moduli with a signed Pfaffian, the matrix equation
// w^2 + lambda^2 I = 0, Hodge self-duality of w^{n/2}, and w^{n-1} = k *w.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sdforms/errors.hpp"
#include "sdforms/exterior.hpp"
#include "sdforms/random.hpp"
#include "sdforms/skew.hpp"

namespace sdforms {

inline constexpr double kDefaultTol = 1e-9;

enum class Classification { strongly_self_dual, strongly_anti_self_dual, generic, zero };

constexpr std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::strongly_self_dual: return "strongly_self_dual";
    case Classification::strongly_anti_self_dual: return "strongly_anti_self_dual";
    case Classification::generic: return "generic";
    case Classification::zero: return "zero";
  }
  return "unknown";
}

struct SelfDualityReport {
  Classification classification = Classification::zero;
  double lambda_spread = 0.0;    // (max - min) / max(lambda_max, 1)
  double lambda_mean_sq = 0.0;   // s_2 / n, the lambda^2 of w^2 + lambda^2 I = 0
  double matrix_residual = 0.0;  // |w^2 + lambda^2 I|_max / max(lambda^2, 1)
  double pfaffian = 0.0;
  std::vector<double> lambdas;
};

inline SelfDualityReport classify(const SkewForm& w, double tol = kDefaultTol) {
  SelfDualityReport r;
  const Spectrum sp = spectrum(w);
  r.lambdas = sp.lambdas;
  r.pfaffian = sp.pfaffian;
  if (w.is_zero()) return r;

  const double lmax = sp.lambdas.front();
  const double lmin = sp.lambdas.back();
  r.lambda_spread = (lmax - lmin) / std::max(lmax, 1.0);
  r.lambda_mean_sq = invariants(sp).s2i(1) / w.half_dim();

  const Eigen::MatrixXd m =
      w.matrix() * w.matrix() + r.lambda_mean_sq * Eigen::MatrixXd::Identity(w.dim(), w.dim());
  r.matrix_residual = m.cwiseAbs().maxCoeff() / std::max(r.lambda_mean_sq, 1.0);

  if (r.lambda_spread <= tol && sp.pfaffian > 0.0) r.classification = Classification::strongly_self_dual;
  else if (r.lambda_spread <= tol && sp.pfaffian < 0.0) r.classification = Classification::strongly_anti_self_dual;
  else r.classification = Classification::generic;
  return r;
}

/// g1 = (n-1)(w,w)^2 - (n/2)(w^2,w^2) and, for even n,
/// g2 = (w^{n/2}, w^{n/2}) - *w^n. Both are nonnegative; g1_scale and
/// g2_scale are matching powers of (w,w) for relative comparisons.
struct GapReport {
  double g1 = 0.0;
  std::optional<double> g2;
  double g1_scale = 0.0;
  double g2_scale = 0.0;
};

inline GapReport lemma22_gaps(const SkewForm& w) {
  const int n = w.half_dim();
  const KForm form = w.to_kform();
  const KForm sq = wedge(form, form);
  const double norm_sq = inner(form, form);

  GapReport r;
  r.g1 = (n - 1) * norm_sq * norm_sq - 0.5 * n * inner(sq, sq);
  r.g1_scale = norm_sq * norm_sq;
  if (n % 2 == 0) {
    const KForm half = wedge_power(form, n / 2);
    const KForm top = wedge(half, half);
    r.g2 = inner(half, half) - top_scalar(top).value;
    r.g2_scale = std::pow(norm_sq, n / 2);
  }
  return r;
}

/// True iff w^{n/2} equals its Hodge dual to relative accuracy tol. A vanishing
/// w^{n/2} is reported as not self-dual.
inline bool grossman_check(const SkewForm& w, double tol = kDefaultTol) {
  const int n = w.half_dim();
  if (n % 2 != 0) {
    throw not_applicable_error("grossman_check: n = " + std::to_string(n) + " is odd, w^{n/2} is undefined");
  }
  const KForm half = wedge_power(w.to_kform(), n / 2);
  const double norm = half.norm();
  if (norm == 0.0) return false;
  return (half - hodge(half)).norm() <= tol * norm;
}

struct TrautmanReport {
  double k_fit = 0.0;     // least squares k in w^{n-1} = k *w
  double residual = 0.0;  // |w^{n-1} - k_fit *w| / |w^{n-1}|, 1 when w^{n-1} = 0
  double k_theory = 0.0;  // n! / n^{n/2} (w,w)^{n/2 - 1}
  bool holds = false;
  bool anti_branch = false;  // k_fit < 0: the anti-self-dual counterpart
};

inline TrautmanReport trautman_check(const SkewForm& w, double tol = kDefaultTol) {
  if (w.is_zero()) throw input_error("trautman_check: the zero form has no Hodge-proportionality constant");
  const int n = w.half_dim();
  const KForm form = w.to_kform();
  const KForm dual = hodge(form);
  const KForm power = wedge_power(form, n - 1);

  TrautmanReport r;
  r.k_fit = inner(power, dual) / inner(dual, dual);
  const double power_norm = power.norm();
  r.residual = power_norm == 0.0 ? 1.0 : (power - r.k_fit * dual).norm() / power_norm;
  r.k_theory = factorial(n) / std::pow(n, 0.5 * n) * std::pow(inner(form, form), 0.5 * n - 1.0);
  r.holds = r.residual <= tol;
  r.anti_branch = r.k_fit < 0.0;
  return r;
}

/// Both sides of the pair inequality
///   4(wh, wh) <= 4c(w,h)^2 + [c(w,w)^2 - (w^2,w^2)] + [c(h,h)^2 - (h^2,h^2)]
///                + 2[c(w,w)(h,h) - (w^2,h^2)],    c = 2(n-1)/n,
/// plus the same gap obtained as (g1(w+h) + g1(w-h)) / n.
struct PairGapReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double pair_gap = 0.0;      // rhs - lhs
  double derived_gap = 0.0;   // (g1(w+h) + g1(w-h)) / n
  double scale = 0.0;         // ((w,w) + (h,h))^2
};

inline PairGapReport pair_bound(const SkewForm& w, const SkewForm& h) {
  if (w.dim() != h.dim()) {
    throw input_error("pair_bound: dimension mismatch " + std::to_string(w.dim()) + " vs " + std::to_string(h.dim()));
  }
  const int n = w.half_dim();
  const double c = 2.0 * (n - 1) / n;
  const KForm a = w.to_kform();
  const KForm b = h.to_kform();
  const KForm a2 = wedge(a, a);
  const KForm b2 = wedge(b, b);
  const KForm ab = wedge(a, b);
  const double aa = inner(a, a);
  const double bb = inner(b, b);
  const double ab1 = inner(a, b);

  PairGapReport r;
  r.lhs = 4.0 * inner(ab, ab);
  r.rhs = 4.0 * c * ab1 * ab1 + (c * aa * aa - inner(a2, a2)) + (c * bb * bb - inner(b2, b2)) +
          2.0 * (c * aa * bb - inner(a2, b2));
  r.pair_gap = r.rhs - r.lhs;
  r.derived_gap = (lemma22_gaps(w + h).g1 + lemma22_gaps(w - h).g1) / n;
  r.scale = (aa + bb) * (aa + bb);
  return r;
}

/// lambda * Q J Q^T with J = e_12 + e_34 + ... and Q Haar in SO(2n).
inline SkewForm random_ssd(int dim, double lambda, std::uint64_t seed) {
  require_valid_dim(dim);
  if (!(lambda > 0.0)) throw input_error("random_ssd: lambda must be positive");
  Rng rng(seed);
  const Eigen::MatrixXd q = haar_orthogonal(dim, rng);
  return SkewForm(lambda * q * SkewForm::standard(dim).matrix() * q.transpose());
}

/// Mirror image of random_ssd under the reflection x_1 -> -x_1 (Pfaffian < 0).
inline SkewForm random_asd(int dim, double lambda, std::uint64_t seed) {
  Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(dim, dim);
  reflect(0, 0) = -1.0;
  return conjugate(random_ssd(dim, lambda, seed), reflect);
}

/// Independent N(0,1) entries above the diagonal.
inline SkewForm random_generic(int dim, std::uint64_t seed) {
  require_valid_dim(dim);
  Rng rng(seed);
  const Eigen::MatrixXd g = gaussian_matrix(dim, dim, rng);
  Eigen::MatrixXd m = g.triangularView<Eigen::StrictlyUpper>();
  return SkewForm(m - m.transpose());
}

/// random_ssd plus a Gaussian perturbation of relative size eps.
inline SkewForm random_near_ssd(int dim, double lambda, double eps, std::uint64_t seed) {
  const SkewForm base = random_ssd(dim, lambda, seed);
  const SkewForm noise = random_generic(dim, mix64(seed));
  return base + (eps * lambda) * noise;
}

}  // namespace sdforms
