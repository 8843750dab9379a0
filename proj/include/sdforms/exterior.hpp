#pragma once

// Dense exterior algebra over oriented Euclidean R^{2n}, 4 <= 2n <= 12.
//
// A k-form is stored as one coefficient per strictly increasing multi-index
// of length k, enumerated in lexicographic order. The basis e_1,...,e_{2n} is
// orthonormal and e_1 ^ ... ^ e_{2n} is the positive volume form. Axis labels
// are 1-based throughout the public interface.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdforms/errors.hpp"

namespace sdforms {

inline constexpr int kMinDim = 4;
inline constexpr int kMaxDim = 12;

inline bool is_valid_dim(int dim) { return dim >= kMinDim && dim <= kMaxDim && dim % 2 == 0; }

inline void require_valid_dim(int dim) {
  if (!is_valid_dim(dim)) {
    throw input_error("dimension must be even and in [" + std::to_string(kMinDim) + ", " +
                      std::to_string(kMaxDim) + "], got " + std::to_string(dim));
  }
}

/// C(n, k); zero outside 0 <= k <= n.
constexpr std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

constexpr double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Strictly increasing list of 1-based axis labels.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> indices) : MultiIndex(std::vector<int>(indices)) {}
  explicit MultiIndex(std::vector<int> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] < 1 || indices_[i] > kMaxDim) {
        throw input_error("axis label " + std::to_string(indices_[i]) + " out of range");
      }
      if (i > 0 && indices_[i] <= indices_[i - 1]) {
        throw input_error("multi-index must be strictly increasing");
      }
    }
  }

  static MultiIndex from_mask(std::uint32_t mask) {
    MultiIndex m;
    for (int axis = 0; mask != 0; ++axis, mask >>= 1) {
      if (mask & 1u) m.indices_.push_back(axis + 1);
    }
    return m;
  }

  /// Bit (label - 1) set for every label.
  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (int i : indices_) m |= 1u << (i - 1);
    return m;
  }

  int degree() const { return static_cast<int>(indices_.size()); }
  std::span<const int> indices() const { return indices_; }
  bool fits(int dim) const { return indices_.empty() || indices_.back() <= dim; }

  auto operator<=>(const MultiIndex&) const = default;

  std::string str() const {
    std::string s = "e";
    for (int i : indices_) {
      if (i >= 10) s += '(' + std::to_string(i) + ')';
      else s += std::to_string(i);
    }
    return s;
  }

 private:
  std::vector<int> indices_;
};

namespace detail {

struct BasisTable {
  // masks[k] lists the degree-k multi-indices (as bitmasks) in lexicographic order.
  std::array<std::vector<std::uint32_t>, kMaxDim + 2> masks;
  // rank[mask] is the position of mask within masks[popcount(mask)].
  std::vector<std::uint32_t> rank;
};

inline BasisTable build_basis_table(int dim) {
  BasisTable t;
  const std::uint32_t count = 1u << dim;
  t.rank.assign(count, 0);
  std::vector<std::pair<MultiIndex, std::uint32_t>> all;
  all.reserve(count);
  for (std::uint32_t m = 0; m < count; ++m) all.emplace_back(MultiIndex::from_mask(m), m);
  std::sort(all.begin(), all.end());
  for (const auto& [mi, m] : all) {
    auto& bucket = t.masks[static_cast<std::size_t>(std::popcount(m))];
    t.rank[m] = static_cast<std::uint32_t>(bucket.size());
    bucket.push_back(m);
  }
  return t;
}

inline const BasisTable& basis_table(int dim) {
  static const std::array<BasisTable, kMaxDim / 2 + 1> tables = [] {
    std::array<BasisTable, kMaxDim / 2 + 1> out;
    for (int d = kMinDim; d <= kMaxDim; d += 2) out[static_cast<std::size_t>(d / 2)] = build_basis_table(d);
    return out;
  }();
  return tables[static_cast<std::size_t>(dim / 2)];
}

/// Sign of the permutation that sorts the concatenation (first, second) of two
/// disjoint increasing index sets.
inline double merge_sign(std::uint32_t first, std::uint32_t second) {
  int inversions = 0;
  while (second != 0) {
    const int j = std::countr_zero(second);
    second &= second - 1;
    const std::uint32_t above = ~((2u << j) - 1u);
    inversions += std::popcount(first & above);
  }
  return (inversions & 1) ? -1.0 : 1.0;
}

}  // namespace detail

/// Degree-k alternating form in dimension 2n with dense coefficients.
///
/// Degree dim + 1 is admitted as the canonical "overflow" zero form: it is what
/// a wedge product of total degree above dim collapses to, and it has no
/// coefficients.
class KForm {
 public:
  KForm(int dim, int degree) : dim_(dim), degree_(degree) {
    require_valid_dim(dim);
    if (degree < 0 || degree > dim + 1) {
      throw input_error("degree " + std::to_string(degree) + " outside [0, " + std::to_string(dim) + "]");
    }
    coeffs_.assign(binomial(dim, degree), 0.0);
  }

  KForm(int dim, int degree, std::vector<double> coeffs) : KForm(dim, degree) {
    if (coeffs.size() != coeffs_.size()) {
      throw input_error("coefficient vector has length " + std::to_string(coeffs.size()) + ", expected " +
                        std::to_string(coeffs_.size()));
    }
    coeffs_ = std::move(coeffs);
  }

  static KForm scalar(int dim, double value) {
    KForm f(dim, 0);
    f.coeffs_[0] = value;
    return f;
  }

  static KForm basis(int dim, const MultiIndex& index, double c = 1.0) {
    KForm f(dim, index.degree());
    f.add(index, c);
    return f;
  }

  static KForm volume(int dim) { return basis(dim, MultiIndex::from_mask((1u << dim) - 1u)); }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Basis multi-index at position i of the coefficient vector.
  MultiIndex basis_index(std::size_t i) const { return MultiIndex::from_mask(basis_mask(i)); }
  std::uint32_t basis_mask(std::size_t i) const {
    return detail::basis_table(dim_).masks[static_cast<std::size_t>(degree_)][i];
  }

  double coeff(const MultiIndex& index) const { return coeffs_[position(index)]; }
  void set(const MultiIndex& index, double c) { coeffs_[position(index)] = c; }
  void add(const MultiIndex& index, double c) { coeffs_[position(index)] += c; }

  double max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }
  double norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
  }
  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
  }

  KForm& operator+=(const KForm& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
  }
  KForm& operator-=(const KForm& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
  }
  KForm& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }

  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(double s, KForm a) { return a *= s; }
  friend KForm operator*(KForm a, double s) { return a *= s; }
  friend KForm operator-(KForm a) { return a *= -1.0; }
  friend bool operator==(const KForm&, const KForm&) = default;

 private:
  std::size_t position(const MultiIndex& index) const {
    if (index.degree() != degree_) {
      throw input_error("multi-index " + index.str() + " has degree " + std::to_string(index.degree()) +
                        ", form has degree " + std::to_string(degree_));
    }
    if (!index.fits(dim_)) throw input_error("multi-index " + index.str() + " exceeds dimension " + std::to_string(dim_));
    return detail::basis_table(dim_).rank[index.mask()];
  }

  void require_same_shape(const KForm& other) const {
    if (other.dim_ != dim_ || other.degree_ != degree_) {
      throw input_error("form shape mismatch: (dim " + std::to_string(dim_) + ", degree " + std::to_string(degree_) +
                        ") vs (dim " + std::to_string(other.dim_) + ", degree " + std::to_string(other.degree_) + ")");
    }
  }

  int dim_;
  int degree_;
  std::vector<double> coeffs_;
};

/// Coefficient of e_1 ^ ... ^ e_{2n} in a top-degree form.
struct TopScalar {
  double value = 0.0;
};

/// Alternating product. Products of total degree above dim are the zero form of
/// degree dim + 1.
inline KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) {
    throw input_error("wedge: dimension mismatch " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const int dim = a.dim();
  const int degree = a.degree() + b.degree();
  if (degree > dim) return KForm(dim, dim + 1);

  KForm out(dim, degree);
  const auto& table = detail::basis_table(dim);
  const auto& ma = table.masks[static_cast<std::size_t>(a.degree())];
  const auto& mb = table.masks[static_cast<std::size_t>(b.degree())];
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  auto co = out.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] == 0.0) continue;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (cb[j] == 0.0 || (ma[i] & mb[j]) != 0) continue;
      co[table.rank[ma[i] | mb[j]]] += detail::merge_sign(ma[i], mb[j]) * ca[i] * cb[j];
    }
  }
  return out;
}

/// *(e_I) = sign(I, I^c) e_{I^c}, so that a ^ *b = (a, b) vol.
inline KForm hodge(const KForm& a) {
  const int dim = a.dim();
  if (a.degree() > dim) return a;
  KForm out(dim, dim - a.degree());
  const auto& table = detail::basis_table(dim);
  const std::uint32_t full = (1u << dim) - 1u;
  auto ca = a.coeffs();
  auto co = out.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] == 0.0) continue;
    const std::uint32_t m = a.basis_mask(i);
    co[table.rank[full & ~m]] += detail::merge_sign(m, full & ~m) * ca[i];
  }
  return out;
}

inline double inner(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) {
    throw input_error("inner: forms must share dimension and degree (dim " + std::to_string(a.dim()) + "/" +
                      std::to_string(b.dim()) + ", degree " + std::to_string(a.degree()) + "/" +
                      std::to_string(b.degree()) + ")");
  }
  double s = 0.0;
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
  return s;
}

/// a^0 = 1, a^i = a^{i-1} ^ a.
inline KForm wedge_power(const KForm& a, int i) {
  if (i < 0) throw input_error("wedge_power: negative exponent");
  KForm out = KForm::scalar(a.dim(), 1.0);
  for (int k = 0; k < i; ++k) {
    out = wedge(out, a);
    if (out.degree() > out.dim()) break;
  }
  return out;
}

inline TopScalar top_scalar(const KForm& a) {
  if (a.degree() != a.dim()) {
    throw input_error("top_scalar: degree " + std::to_string(a.degree()) + " is not the top degree " +
                      std::to_string(a.dim()));
  }
  return TopScalar{a.coeffs()[0]};
}

}  // namespace sdforms
