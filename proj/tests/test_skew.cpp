#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "sdforms/random.hpp"
#include "sdforms/selfdual.hpp"
#include "sdforms/skew.hpp"

using namespace sdforms;
using Catch::Approx;

namespace {

SkewForm blocks(std::vector<double> b) { return SkewForm::block_diagonal(b); }

}  // namespace

TEST_CASE("skew form construction and round trip", "[skew]") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(6, 6);
  const SkewForm w(m);
  CHECK((w.matrix() + w.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(SkewForm::from_kform(w.to_kform()).matrix() == w.matrix());
  CHECK(w(1, 2) == w.matrix()(0, 1));

  const KForm f = KForm::basis(4, MultiIndex{1, 3}, 2.5);
  const SkewForm g = SkewForm::from_kform(f);
  CHECK(g(1, 3) == 2.5);
  CHECK(g(3, 1) == -2.5);
  CHECK(g.to_kform() == f);

  CHECK_THROWS_AS(SkewForm(Eigen::MatrixXd::Zero(5, 5)), input_error);
  CHECK_THROWS_AS(SkewForm(Eigen::MatrixXd::Zero(4, 6)), input_error);
  CHECK_THROWS_AS(SkewForm::from_kform(KForm(4, 3)), input_error);
}

TEST_CASE("spectrum examples", "[skew][spectrum]") {
  const Spectrum a = spectrum(blocks({1, 1}));
  CHECK(a.lambdas[0] == Approx(1.0));
  CHECK(a.lambdas[1] == Approx(1.0));
  CHECK(a.pfaffian == 1.0);

  const Spectrum b = spectrum(blocks({2, 1}));
  CHECK(b.lambdas[0] == Approx(2.0));
  CHECK(b.lambdas[1] == Approx(1.0));
  CHECK(b.pfaffian == 2.0);

  const Spectrum c = spectrum(blocks({1, -1}));
  CHECK(c.lambdas[0] == Approx(1.0));
  CHECK(c.lambdas[1] == Approx(1.0));
  CHECK(c.pfaffian == -1.0);

  const Spectrum z = spectrum(SkewForm::zero(6));
  for (double l : z.lambdas) CHECK(l == 0.0);
  CHECK(z.pfaffian == 0.0);
}

TEST_CASE("pfaffian sign convention and determinant", "[skew][pfaffian]") {
  CHECK(pfaffian(SkewForm::standard(8)) == 1.0);
  CHECK(pfaffian(blocks({1, -1})) == -1.0);
  // e_13 + e_24: the matching (13)(24) is odd relative to (12)(34)
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 2) = 1;
  m(1, 3) = 1;
  CHECK(pfaffian(SkewForm(m - m.transpose())) == -1.0);

  std::mt19937_64 rng(5);
  for (int dim = 4; dim <= 12; dim += 2) {
    for (int t = 0; t < 20; ++t) {
      const SkewForm w = random_generic(dim, rng());
      const double pf = pfaffian(w);
      const double det = w.matrix().determinant();
      INFO("dim " << dim);
      CHECK(std::abs(pf * pf - det) <= 1e-8 * std::max(std::abs(det), 1e-300));
      if (dim <= 8) CHECK(pf == Approx(oracle::pfaffian(w.matrix())).epsilon(1e-10));
    }
  }
}

TEST_CASE("invariant polynomial examples", "[skew][invariants]") {
  const InvariantSet a = invariants(blocks({2, 1}));
  CHECK(a.s2i(1) == Approx(5.0));
  CHECK(a.s2i(2) == Approx(4.0));
  CHECK(a.qi(1) == Approx(2.5));
  CHECK(a.qi(2) == Approx(4.0));

  for (int dim = 4; dim <= 12; dim += 2) {
    const InvariantSet s = invariants(SkewForm::standard(dim));
    const int n = dim / 2;
    for (int i = 1; i <= n; ++i) {
      CHECK(s.s2i(i) == Approx(static_cast<double>(binomial(n, i))));
      CHECK(s.qi(i) == Approx(1.0));
    }
  }

  const InvariantSet z = invariants(SkewForm::zero(8));
  for (double v : z.s) CHECK(v == 0.0);
}

TEST_CASE("invariants match the principal-minor oracle", "[skew][invariants][oracle]") {
  std::mt19937_64 rng(17);
  for (int dim = 4; dim <= 10; dim += 2) {
    const SkewForm w = random_generic(dim, rng());
    const InvariantSet s = invariants(w);
    for (int i = 1; i <= dim / 2; ++i) {
      CHECK(s.s2i(i) == Approx(oracle::principal_minor_sum(w.matrix(), 2 * i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("exterior route reproduces the invariant polynomials", "[skew][eq21]") {
  for (const auto& w : {blocks({1, 1}), blocks({2, 1}), blocks({1, -1}), SkewForm::standard(8)}) {
    for (double r : eq21_residuals(w)) CHECK(r < 1e-9);
  }
  for (double r : eq21_residuals(SkewForm::zero(8))) CHECK(r == 0.0);

  const SkewForm big = 1e3 * random_generic(12, 99);
  for (double r : eq21_residuals(big)) CHECK(r < 1e-8);
}

TEST_CASE("eq21 residuals on random samples", "[skew][eq21][property]") {
  for (int dim = 4; dim <= 12; dim += 2) {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      for (double r : eq21_residuals(random_generic(dim, derive_seed(dim, t)))) worst = std::max(worst, r);
    }
    INFO("dim " << dim);
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("spectrum is orthogonally invariant and homogeneous", "[skew][property]") {
  Rng rng(23);
  for (int dim = 4; dim <= 12; dim += 2) {
    for (int t = 0; t < 20; ++t) {
      const SkewForm w = random_generic(dim, rng());
      const Spectrum sp = spectrum(w);
      const Eigen::MatrixXd q = haar_orthogonal(dim, rng, false);
      const Spectrum rot = spectrum(conjugate(w, q));
      for (std::size_t k = 0; k < sp.lambdas.size(); ++k) {
        CHECK(rot.lambdas[k] == Approx(sp.lambdas[k]).epsilon(1e-9));
      }
      CHECK(rot.pfaffian == Approx(q.determinant() * sp.pfaffian).epsilon(1e-9));

      const double c = -1.7;
      const Spectrum scaled = spectrum(c * w);
      for (std::size_t k = 0; k < sp.lambdas.size(); ++k) {
        CHECK(scaled.lambdas[k] == Approx(std::abs(c) * sp.lambdas[k]).epsilon(1e-10));
      }
      CHECK(scaled.pfaffian == Approx(std::pow(c, dim / 2) * sp.pfaffian).epsilon(1e-10));

      double product = 1.0;
      for (double l : sp.lambdas) product *= l;
      CHECK(product == Approx(std::abs(sp.pfaffian)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Maclaurin chain holds and is tight exactly on equal moduli", "[skew][maclaurin]") {
  std::mt19937_64 rng(29);
  for (int dim = 4; dim <= 12; dim += 2) {
    for (int t = 0; t < 100; ++t) {
      const MaclaurinGaps g = maclaurin_gaps(invariants(random_generic(dim, rng())));
      CHECK(g.min_gap() >= -1e-10);
    }
    const MaclaurinGaps ssd = maclaurin_gaps(invariants(random_ssd(dim, 1.3, rng())));
    CHECK(ssd.max_gap() <= 1e-10);
    CHECK(ssd.min_gap() >= -1e-10);

    // One modulus 10% below the others.
    std::vector<double> b(static_cast<std::size_t>(dim / 2), 1.0);
    b.back() = 0.9;
    const MaclaurinGaps spread = maclaurin_gaps(invariants(blocks(b)));
    CHECK(spread.max_gap() > 1e-3);
  }
}
