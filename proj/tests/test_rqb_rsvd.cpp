#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlam/error.hpp"
#include "rlam/rqb.hpp"
#include "rlam/rsvd.hpp"

using namespace rlam;

TEST(PowerDirect, Trivial) {
  const auto a = oracle::gaussian(6, 4, 1);
  const auto y = oracle::gaussian(6, 2, 2);
  EXPECT_EQ(power_direct(a, y, 0), y);
  const auto i4 = DenseMatrix::identity(4);
  const auto y4 = oracle::gaussian(4, 2, 3);
  EXPECT_LE(oracle::frob_diff(power_direct(i4, y4, 3), y4), 1e-15);
}

TEST(PowerDirect, HandDiagonal) {
  const std::vector<double> d{2, 1};
  const auto out = power_direct(DenseMatrix::diagonal(d), DenseMatrix::identity(2), 1);
  EXPECT_EQ(out, DenseMatrix::diagonal(std::vector<double>{4, 1}));
}

TEST(PowerSubspace, SpanMatchesDirect) {
  const auto a = oracle::gaussian(20, 10, 4);
  const auto y = oracle::naive_matmul(a, oracle::gaussian(10, 5, 5));
  EXPECT_EQ(power_subspace(a, y, 0), y);
  const auto sub = power_subspace(a, y, 2);
  const auto dir = power_direct(a, y, 2);
  EXPECT_LE(oracle::subspace_sine(sub, dir), 1e-6);
  EXPECT_LE(orthonormality_defect(qr_economy(sub).q), 1e-9);
}

TEST(PowerNormalized, SpanCloseToSubspace) {
  const auto a = oracle::gaussian(20, 10, 6);
  const auto y = oracle::naive_matmul(a, oracle::gaussian(10, 5, 7));
  EXPECT_EQ(power_normalized(a, y, 0), y);
  EXPECT_LE(oracle::subspace_sine(power_normalized(a, y, 2), power_subspace(a, y, 2)), 1e-4);
}

TEST(PowerNormalized, FiniteForManyIterations) {
  std::vector<double> s;
  for (int j = 1; j <= 30; ++j) s.push_back(std::pow(j, -3.0));
  const auto a = oracle::planted(60, 40, s, 8);
  const auto y = oracle::naive_matmul(a, oracle::gaussian(40, 8, 9));
  for (std::size_t q = 0; q <= 10; ++q) EXPECT_TRUE(power_normalized(a, y, q).all_finite());
}

TEST(Rqb, ExactRankCapture) {
  const auto a = oracle::rank_r(8, 6, 5, 10);
  SketchSpec s;
  s.p = 1;
  s.q = 0;
  const auto f = rqb(a, 5, s);
  EXPECT_LE(oracle::frob_diff(oracle::naive_matmul(f.q, f.b), a) / oracle::frob(a), 1e-10);
  EXPECT_LE(orthonormality_defect(f.q), 1e-12);
}

TEST(Rqb, IdentityFullWidth) {
  SketchSpec s;
  s.p = 0;
  const auto f = rqb(DenseMatrix::identity(6), 6, s);
  EXPECT_LE(oracle::frob_diff(oracle::naive_matmul(f.q, f.b), DenseMatrix::identity(6)), 1e-10);
}

TEST(Rqb, SketchWidthClampsAndRangeChecks) {
  EXPECT_EQ(sketch_width(100, 50, 10, 10), 20u);
  EXPECT_EQ(sketch_width(100, 15, 10, 10), 15u);
  const auto a = oracle::gaussian(5, 4, 1);
  EXPECT_THROW(rqb(a, 0), ArgumentError);
  EXPECT_THROW(rqb(a, 5), ArgumentError);
}

TEST(Rqb, AllSchemesAndDistributionsCaptureExactRank) {
  const auto a = oracle::rank_r(40, 30, 6, 12);
  for (auto sc : {PowerScheme::direct, PowerScheme::subspace, PowerScheme::normalized})
    for (auto d : {Distribution::normal, Distribution::uniform, Distribution::rademacher}) {
      SketchSpec s;
      s.scheme = sc;
      s.distribution = d;
      s.q = 1;
      const auto f = rqb(a, 6, s);
      EXPECT_LE(oracle::frob_diff(oracle::naive_matmul(f.q, f.b), a) / oracle::frob(a), 1e-10);
    }
}

TEST(Rsvd, DiagonalSpectrum) {
  const std::vector<double> d{5, 3, 1};
  SketchSpec s;
  s.p = 1;
  s.q = 1;
  const auto t = rsvd(DenseMatrix::diagonal(d), 2, s);
  ASSERT_EQ(t.d().size(), 2u);
  EXPECT_NEAR(t.d()[0], 5, 1e-8);
  EXPECT_NEAR(t.d()[1], 3, 1e-8);
}

TEST(Rsvd, ExactRankTen) {
  const auto a = oracle::rank_r(200, 150, 10, 13);
  const auto t = rsvd(a, 10);
  EXPECT_LE(oracle::frob_diff(reconstruct(t.factors), a) / oracle::frob(a), 1e-8);
  EXPECT_LE(orthonormality_defect(t.u()), 1e-10);
  EXPECT_LE(orthonormality_defect(t.v()), 1e-10);
}

TEST(Rsvd, WideInputMatchesTransposedRun) {
  const auto a = oracle::rank_r(30, 70, 4, 14);
  const auto t = rsvd(a, 4);
  EXPECT_EQ(t.u().rows(), 30u);
  EXPECT_EQ(t.v().rows(), 70u);
  EXPECT_LE(oracle::frob_diff(reconstruct(t.factors), a) / oracle::frob(a), 1e-10);
}

TEST(Rsvd, SameSeedSameFactors) {
  const auto a = oracle::gaussian(50, 40, 15);
  SketchSpec s;
  s.seed = 99;
  const auto t1 = rsvd(a, 5, s), t2 = rsvd(a, 5, s);
  EXPECT_EQ(t1.u(), t2.u());
  EXPECT_EQ(t1.d(), t2.d());
}

TEST(Rsvd, NuNvClampedWithNote) {
  const auto a = oracle::gaussian(30, 20, 16);
  const auto t = rsvd(a, 3, {}, 1, 7);
  EXPECT_EQ(t.u().cols(), 1u);
  EXPECT_EQ(t.v().cols(), 3u);
  EXPECT_FALSE(t.notes.empty());
}

TEST(SvdTruncated, FullRankIsDense) {
  const auto a = oracle::gaussian(9, 6, 17);
  const auto t = svd_truncated(a, 6);
  const auto f = svd_dense(a);
  EXPECT_EQ(t.d(), f.d);
  const std::vector<double> d{3, 2, 1};
  const auto one = svd_truncated(DenseMatrix::diagonal(d), 1);
  ASSERT_EQ(one.d().size(), 1u);
  EXPECT_NEAR(one.d()[0], 3, 1e-14);
}

TEST(SvdTruncated, EckartYoung) {
  const auto a = oracle::gaussian(12, 9, 18);
  const auto full = svd_dense(a);
  for (std::size_t k = 1; k < 9; ++k) {
    const auto t = svd_truncated(a, k);
    const auto err = combine(1, a, -1, reconstruct(t.factors));
    EXPECT_NEAR(norm(err, NormKind::spectral), full.d[k], 1e-9);
    double tail = 0;
    for (std::size_t j = k; j < full.d.size(); ++j) tail += full.d[j] * full.d[j];
    EXPECT_NEAR(oracle::frob(err), std::sqrt(tail), 1e-9);
  }
}

TEST(ExpectedErrorBound, ClosedForm) {
  EXPECT_EQ(expected_error_bound(5, 5, 1, 50, 40, 0.0), 0.0);
  double prev = INFINITY;
  for (std::size_t q = 0; q < 8; ++q) {
    const double b = expected_error_bound(5, 5, q, 50, 40, 1.0);
    EXPECT_LT(b, prev);
    EXPECT_GT(b, 1.0);
    prev = b;
  }
  // 1 + sqrt(20/9) + e sqrt(30)/10 sqrt(480), then the fifth root.
  const double bracket = 1 + std::sqrt(20.0 / 9.0) + std::exp(1.0) * std::sqrt(30.0) / 10.0 * std::sqrt(480.0);
  EXPECT_NEAR(expected_error_bound(20, 10, 2, 1000, 500, 1.0), std::pow(bracket, 0.2), 1e-12);
  EXPECT_THROW(expected_error_bound(5, 1, 0, 50, 40, 1.0), ArgumentError);
}

TEST(Nrmse, Definition) {
  const auto a = DenseMatrix::from_rows({{3, 4}});
  const auto b = DenseMatrix::from_rows({{3, 0}});
  EXPECT_NEAR(nrmse(a, b), 0.8, 1e-15);
}
