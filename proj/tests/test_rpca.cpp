#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlam/error.hpp"
#include "rlam/rpca.hpp"

using namespace rlam;

namespace {

PcaOptions exact(bool center = true, bool scale = false) {
  PcaOptions o;
  o.center = center;
  o.scale = scale;
  o.rand = false;
  return o;
}

}  // namespace

TEST(CenterScale, HandArithmetic) {
  const auto r = center_scale(DenseMatrix::from_rows({{1}, {3}}), true, false);
  EXPECT_EQ(r.x, DenseMatrix::from_rows({{-1}, {1}}));
  EXPECT_EQ(r.center->front(), 2.0);
  EXPECT_FALSE(r.scale.has_value());
}

TEST(CenterScale, ZeroMeanUnchanged) {
  const auto x = DenseMatrix::from_rows({{1, -2}, {-1, 2}});
  EXPECT_EQ(center_scale(x, true, false).x, x);
}

TEST(CenterScale, StandardizedColumns) {
  const auto r = center_scale(oracle::gaussian(40, 3, 1), true, true);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0, ss = 0;
    for (std::size_t i = 0; i < 40; ++i) mean += r.x(i, j) / 40;
    for (std::size_t i = 0; i < 40; ++i) ss += (r.x(i, j) - mean) * (r.x(i, j) - mean);
    EXPECT_NEAR(mean, 0, 1e-14);
    EXPECT_NEAR(ss / 39, 1, 1e-12);
  }
}

TEST(CenterScale, ConstantColumnRejected) {
  const auto x = DenseMatrix::from_rows({{1, 5}, {2, 5}, {3, 5}});
  try {
    center_scale(x, true, true);
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
  EXPECT_THROW(center_scale(DenseMatrix::from_rows({{1, 2}}), true, false), ArgumentError);
}

TEST(Rpca, DominantDirection) {
  auto noise = oracle::gaussian(500, 2, 3);
  DenseMatrix x(500, 2);
  for (std::size_t i = 0; i < 500; ++i) {
    const double t = noise(i, 0);
    x(i, 0) = 2 * t + 1e-3 * noise(i, 1);
    x(i, 1) = t - 1e-3 * noise(i, 1);
  }
  const auto m = rpca(x, 2, exact());
  EXPECT_GE(m.eigvals[0] / (m.eigvals[0] + m.eigvals[1]), 0.99);
}

TEST(Rpca, EigvalsMatchCovarianceEigenvalues) {
  const auto x = oracle::gaussian(30, 3, 4);
  const auto ev = oracle::eig_sym3(oracle::covariance(x));
  const auto m = rpca(x, 3, exact());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m.eigvals[i], ev[i], 1e-8);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m.sdev[i], std::sqrt(m.eigvals[i]), 1e-15);
}

TEST(Rpca, RandomizedMatchesExactOnLowRankData) {
  const auto x = oracle::rank_r(200, 40, 5, 5);
  PcaOptions r;
  r.scale = false;
  const auto a = rpca(x, 5, r);
  const auto b = rpca(x, 5, exact());
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(a.eigvals[i], b.eigvals[i], 1e-8 * b.eigvals[0]);
}

TEST(Rpca, RankRange) {
  const auto x = oracle::gaussian(5, 8, 6);
  EXPECT_THROW(rpca(x, 0, exact()), ArgumentError);
  EXPECT_THROW(rpca(x, 5, exact()), ArgumentError);
  EXPECT_NO_THROW(rpca(x, 4, exact()));
}

TEST(PcaTransform, ReproducesScores) {
  const auto x = oracle::gaussian(25, 4, 7);
  const auto m = rpca(x, 3, exact(true, true));
  EXPECT_LE(max_abs_diff(pca_transform(m, x), *m.scores), 1e-10);
}

TEST(PcaTransform, CenterMapsToZero) {
  const auto x = oracle::gaussian(25, 4, 8);
  const auto m = rpca(x, 2, exact());
  const auto row = DenseMatrix::from_entries(1, 4, *m.center);
  const auto p = pca_transform(m, row);
  for (double s : p.entries()) EXPECT_NEAR(s, 0, 1e-12);
}

TEST(PcaTransform, HandRotation) {
  // Points along the direction (cos 30, sin 30) with a little spread across it.
  const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
  DenseMatrix x(4, 2);
  const double along[] = {-3, -1, 1, 3}, across[] = {0.1, -0.1, -0.1, 0.1};
  for (int i = 0; i < 4; ++i) {
    x(i, 0) = along[i] * c - across[i] * s;
    x(i, 1) = along[i] * s + across[i] * c;
  }
  const auto m = rpca(x, 2, exact());
  const auto p = pca_transform(m, DenseMatrix::from_rows({{2 * c, 2 * s}}));
  EXPECT_NEAR(std::abs(p(0, 0)), 2.0, 1e-12);
  EXPECT_NEAR(p(0, 1), 0.0, 1e-12);
  EXPECT_THROW(pca_transform(m, DenseMatrix(1, 3)), ShapeError);
}

TEST(Whiten, UnitCovarianceAndLoadings) {
  const auto x = oracle::gaussian(60, 4, 9);
  const auto m = rpca(x, 4, exact());
  const auto w = whiten(m);
  const auto cov = oracle::covariance(*w.scores_white);
  EXPECT_LE(max_abs_diff(cov, DenseMatrix::identity(4)), 1e-6);
  for (std::size_t j = 0; j < 4; ++j) {
    double ss = 0;
    for (std::size_t i = 0; i < 4; ++i) ss += w.loadings(i, j) * w.loadings(i, j);
    EXPECT_NEAR(ss, m.eigvals[j], 1e-10);
  }
  const auto llt = oracle::naive_matmul(w.loadings, oracle::naive_transpose(w.loadings));
  EXPECT_LE(max_abs_diff(llt, oracle::covariance(x)), 1e-8);
}

TEST(ExplainedVariance, Proportions) {
  const auto x = oracle::gaussian(30, 1, 10);
  const auto one = explained_variance(rpca(x, 1, exact()));
  EXPECT_NEAR(one.proportions[0], 1.0, 1e-12);
  PcaModel m;
  m.eigvals = {3, 1};
  m.total_variance = 4;
  const auto ev = explained_variance(m);
  EXPECT_NEAR(ev.proportions[0], 0.75, 1e-15);
  EXPECT_NEAR(ev.proportions[1], 0.25, 1e-15);
  EXPECT_NEAR(ev.cumulative[1], 1.0, 1e-15);
  EXPECT_FALSE(ev.partial_denominator);
}
