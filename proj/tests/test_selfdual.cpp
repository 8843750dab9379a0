#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "sdforms/selfdual.hpp"

using namespace sdforms;
using Catch::Approx;

namespace {

SkewForm blocks(std::vector<double> b) { return SkewForm::block_diagonal(b); }

// Sample i of a mixed family: 0 generic, 1 ssd, 2 asd.
SkewForm mixed_sample(int dim, std::uint64_t i, int& family) {
  const std::uint64_t seed = derive_seed(static_cast<std::uint64_t>(dim) * 1000 + 7, i);
  family = static_cast<int>(i % 3);
  const double lambda = 0.5 + 1.5 * static_cast<double>(mix64(seed) >> 11) * 0x1.0p-53;
  if (family == 1) return random_ssd(dim, lambda, seed);
  if (family == 2) return random_asd(dim, lambda, seed);
  return random_generic(dim, seed);
}

}  // namespace

TEST_CASE("classification examples", "[selfdual][classify]") {
  CHECK(classify(SkewForm::standard(8)).classification == Classification::strongly_self_dual);
  CHECK(classify(blocks({1, -1})).classification == Classification::strongly_anti_self_dual);
  CHECK(classify(blocks({2, 1})).classification == Classification::generic);
  CHECK(classify(SkewForm::zero(6)).classification == Classification::zero);

  const SelfDualityReport r = classify(blocks({3, 3, 3}));
  CHECK(r.lambda_spread == Approx(0.0).margin(1e-15));
  CHECK(r.lambda_mean_sq == Approx(9.0));
  CHECK(r.matrix_residual < 1e-12);
  CHECK(r.pfaffian == Approx(27.0));

  const SelfDualityReport g = classify(blocks({2, 1}));
  CHECK(g.lambda_spread == Approx(0.5));
  CHECK(g.matrix_residual > 0.1);

  CHECK(to_string(Classification::strongly_anti_self_dual) == "strongly_anti_self_dual");
}

TEST_CASE("spectral gap examples", "[selfdual][gaps]") {
  const GapReport a = lemma22_gaps(blocks({2, 1}));
  CHECK(a.g1 == Approx(9.0));

  const GapReport b = lemma22_gaps(blocks({1, 1}));
  CHECK(b.g1 == Approx(0.0).margin(1e-12));
  REQUIRE(b.g2);
  CHECK(*b.g2 == Approx(0.0).margin(1e-12));

  const GapReport c = lemma22_gaps(blocks({1, -1}));
  REQUIRE(c.g2);
  CHECK(*c.g2 == Approx(4.0));

  CHECK_FALSE(lemma22_gaps(SkewForm::standard(6)).g2);

  // dim 8 ASD mirror: g2 = 2 |*w^4|, and *w^4 = 4! for unit blocks
  const GapReport d = lemma22_gaps(blocks({1, 1, 1, -1}));
  REQUIRE(d.g2);
  CHECK(*d.g2 == Approx(48.0));
}

TEST_CASE("grossman check examples", "[selfdual][grossman]") {
  CHECK(grossman_check(SkewForm::standard(8)));
  CHECK_FALSE(grossman_check(blocks({1, 1, 1, -1})));
  CHECK_FALSE(grossman_check(blocks({1, -1})));
  CHECK_THROWS_AS(grossman_check(SkewForm::standard(6)), not_applicable_error);
  CHECK_THROWS_AS(grossman_check(SkewForm::standard(10)), not_applicable_error);
  // rank-deficient: w^{n/2} vanishes
  CHECK_FALSE(grossman_check(blocks({1, 0, 0, 0})));
}

TEST_CASE("grossman check agrees with the permutation-sum oracle", "[selfdual][grossman][oracle]") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const SkewForm w = (t % 2 == 0) ? random_ssd(8, 1.2, rng()) : random_generic(8, rng());
    const KForm f = w.to_kform();
    const KForm sq = oracle::wedge(f, f);
    const bool expected = (sq - oracle::hodge(sq)).norm() <= 1e-9 * sq.norm();
    CHECK(grossman_check(w) == expected);
    CHECK(expected == (t % 2 == 0));
  }
}

TEST_CASE("trautman check examples", "[selfdual][trautman]") {
  const TrautmanReport a = trautman_check(SkewForm::standard(8));
  CHECK(a.k_fit == Approx(6.0).epsilon(1e-12));
  CHECK(a.k_theory == Approx(6.0).epsilon(1e-12));
  CHECK(a.residual < 1e-12);
  CHECK(a.holds);
  CHECK_FALSE(a.anti_branch);

  const TrautmanReport b = trautman_check(blocks({1, -1}));
  CHECK(b.k_fit == Approx(-1.0));
  CHECK(b.residual < 1e-12);
  CHECK(b.holds);
  CHECK(b.anti_branch);
  CHECK(classify(blocks({1, -1})).classification == Classification::strongly_anti_self_dual);

  const TrautmanReport c = trautman_check(blocks({2, 1}));
  CHECK(c.residual > 0.1);
  CHECK_FALSE(c.holds);

  // dim 6 ASD: w^2 = -2 *w for e12 + e34 - e56
  const TrautmanReport d = trautman_check(blocks({1, 1, -1}));
  CHECK(d.k_fit == Approx(-2.0));
  CHECK(d.holds);

  // w^{n-1} = 0 cannot be proportional to a nonzero *w
  const TrautmanReport e = trautman_check(blocks({1, 0, 0, 0}));
  CHECK(e.residual == 1.0);
  CHECK_FALSE(e.holds);

  CHECK_THROWS_AS(trautman_check(SkewForm::zero(8)), input_error);
}

TEST_CASE("pair bound examples", "[selfdual][pair]") {
  // w = h = e12 + e34: w^h = 2 e1234 so LHS = 4 * 4 = 16; c = 1, (w,h) = 2,
  // every bracket vanishes, RHS = 4 * 1 * 4 = 16.
  const SkewForm w = blocks({1, 1});
  const PairGapReport a = pair_bound(w, w);
  CHECK(a.lhs == Approx(16.0));
  CHECK(a.rhs == Approx(16.0));
  CHECK(a.pair_gap == Approx(0.0).margin(1e-12));
  CHECK(a.derived_gap == Approx(0.0).margin(1e-12));

  const PairGapReport b = pair_bound(blocks({2, 1}), SkewForm::zero(4));
  CHECK(b.lhs == 0.0);
  CHECK(b.rhs == Approx(9.0));
  CHECK(b.derived_gap == Approx(9.0));

  CHECK_THROWS_AS(pair_bound(SkewForm::zero(4), SkewForm::zero(6)), input_error);
}

TEST_CASE("random_ssd samples", "[selfdual][sampler]") {
  for (int dim = 4; dim <= 12; dim += 2) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const double lambda = 0.7 + 0.1 * static_cast<double>(seed);
      const SkewForm w = random_ssd(dim, lambda, seed);
      const SelfDualityReport r = classify(w);
      CHECK(r.classification == Classification::strongly_self_dual);
      CHECK(r.lambda_spread < 1e-10);
      CHECK(r.pfaffian == Approx(std::pow(lambda, dim / 2)).epsilon(1e-10));
      const TrautmanReport t = trautman_check(w);
      CHECK(t.holds);
      CHECK(t.k_fit == Approx(t.k_theory).epsilon(1e-9));
    }
  }
  CHECK(random_ssd(8, 1.0, 3).matrix() == random_ssd(8, 1.0, 3).matrix());
  CHECK_THROWS_AS(random_ssd(8, 0.0, 1), input_error);
  CHECK_THROWS_AS(random_ssd(7, 1.0, 1), input_error);
}

TEST_CASE("equivalence triangle on mixed samples", "[selfdual][property]") {
  const double tol = 1e-7;
  for (int dim : {4, 8, 12}) {
    int counts[3] = {0, 0, 0};
    for (std::uint64_t i = 0; i < 500; ++i) {
      int family = 0;
      const SkewForm w = mixed_sample(dim, i, family);
      ++counts[family];
      const Classification c = classify(w, tol).classification;
      const bool gross = grossman_check(w, tol);
      const TrautmanReport t = trautman_check(w, tol);
      INFO("dim " << dim << " sample " << i << " family " << family);

      const bool ssd = c == Classification::strongly_self_dual;
      const bool asd = c == Classification::strongly_anti_self_dual;
      CHECK(ssd == (family == 1));
      CHECK(asd == (family == 2));
      CHECK(ssd == gross);
      CHECK(ssd == (t.holds && t.k_fit > 0.0));
      CHECK(asd == (t.holds && t.anti_branch));
      if (ssd) CHECK(std::abs(t.k_fit - t.k_theory) <= 1e-9 * t.k_theory);
      if (family == 0 && classify(w).lambda_spread > 0.1) CHECK(t.residual > 1e-3);
    }
    CHECK(counts[0] > 100);
  }
}

TEST_CASE("small trautman residual forces small lambda spread", "[selfdual][property]") {
  for (int dim : {4, 6, 8}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      double prev_residual = 0.0;
      double prev_spread = 0.0;
      for (double eps : {1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
        const SkewForm w = random_near_ssd(dim, 1.0, eps, seed);
        const TrautmanReport t = trautman_check(w);
        const double spread = classify(w).lambda_spread;
        if (t.residual < 1e-9) CHECK(spread < 1e-6);
        if (eps >= 1e-6) {
          CHECK(t.residual > prev_residual);
          CHECK(spread > prev_spread);
        }
        prev_residual = t.residual;
        prev_spread = spread;
      }
      CHECK(prev_residual > 1e-4);
    }
  }
}

TEST_CASE("classification under scaling", "[selfdual][property]") {
  for (int dim : {6, 8}) {
    const bool odd = (dim / 2) % 2 == 1;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (const SkewForm& w : {random_ssd(dim, 1.1, seed), random_asd(dim, 0.8, seed), random_generic(dim, seed)}) {
        const Classification base = classify(w).classification;
        CHECK(classify(2.5 * w).classification == base);
        CHECK(classify(0.3 * w).classification == base);
        Classification flipped = base;
        if (odd && base == Classification::strongly_self_dual) flipped = Classification::strongly_anti_self_dual;
        if (odd && base == Classification::strongly_anti_self_dual) flipped = Classification::strongly_self_dual;
        CHECK(classify(-1.5 * w).classification == flipped);
      }
    }
  }
}

TEST_CASE("pair bound two routes agree", "[selfdual][pair][property]") {
  std::mt19937_64 rng(53);
  for (int dim : {4, 6, 8}) {
    for (int t = 0; t < 200; ++t) {
      const SkewForm w = random_generic(dim, rng());
      const SkewForm h = (t % 4 == 0) ? random_ssd(dim, 1.0, rng()) : random_generic(dim, rng());
      const PairGapReport r = pair_bound(w, h);
      CHECK(r.pair_gap >= -1e-10 * r.scale);
      CHECK(std::abs(r.pair_gap - r.derived_gap) <= 1e-10 * r.scale);
    }
    for (int t = 0; t < 20; ++t) {
      const SkewForm w = random_ssd(dim, 1.3, rng());
      const PairGapReport r = pair_bound(w, w);
      CHECK(std::abs(r.pair_gap) <= 1e-9 * r.scale);
    }
  }
}
