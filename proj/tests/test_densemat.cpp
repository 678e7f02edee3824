#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlam/densemat.hpp"
#include "rlam/error.hpp"

using namespace rlam;

TEST(DenseMatrix, IdentityProduct) {
  const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(a, DenseMatrix::identity(2)), a);
}

TEST(DenseMatrix, HandProduct) {
  const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  const auto b = DenseMatrix::from_rows({{5, 6}, {7, 8}});
  EXPECT_EQ(matmul(a, b), DenseMatrix::from_rows({{19, 22}, {43, 50}}));
}

TEST(DenseMatrix, ZeroAnnihilates) {
  const auto a = oracle::gaussian(4, 3, 1);
  EXPECT_EQ(matmul(a, DenseMatrix(3, 5)), DenseMatrix(4, 5));
}

TEST(DenseMatrix, MatmulAgreesWithNaiveAcrossBlockEdges) {
  for (auto [m, k, n] : {std::tuple{1, 1, 1}, {70, 300, 33}, {129, 257, 1030}}) {
    const auto a = oracle::gaussian(m, k, 11);
    const auto b = oracle::gaussian(k, n, 12);
    const auto ref = oracle::naive_matmul(a, b);
    EXPECT_LE(oracle::frob_diff(matmul(a, b), ref), 1e-12 * oracle::frob(ref) + 1e-14);
    EXPECT_LE(oracle::frob_diff(matmul_tn(oracle::naive_transpose(a), b), ref),
              1e-12 * oracle::frob(ref) + 1e-14);
    EXPECT_LE(oracle::frob_diff(matmul_nt(a, oracle::naive_transpose(b)), ref),
              1e-12 * oracle::frob(ref) + 1e-14);
  }
}

TEST(DenseMatrix, MatmulShapeMismatchNamesShapes) {
  try {
    matmul(DenseMatrix(2, 3), DenseMatrix(2, 3));
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("2x3"), std::string::npos);
  }
}

TEST(DenseMatrix, Transpose) {
  const auto a = oracle::gaussian(37, 65, 3);
  EXPECT_EQ(transpose(transpose(a)), a);
  EXPECT_EQ(transpose(a), oracle::naive_transpose(a));
  EXPECT_EQ(transpose(DenseMatrix::identity(4)), DenseMatrix::identity(4));
  EXPECT_EQ(transpose(DenseMatrix::from_rows({{1, 2, 3}})), DenseMatrix::from_rows({{1}, {2}, {3}}));
}

TEST(DenseMatrix, Norms) {
  EXPECT_NEAR(norm(DenseMatrix::identity(3), NormKind::frobenius), std::sqrt(3.0), 1e-15);
  const std::vector<double> d{3, 1};
  EXPECT_NEAR(norm(DenseMatrix::diagonal(d), NormKind::spectral), 3.0, 1e-13);
  const auto a = DenseMatrix::from_rows({{1, -2}, {0, 4}});
  EXPECT_EQ(norm(a, NormKind::l1elem), 7.0);
  EXPECT_EQ(norm(a, NormKind::maxabs), 4.0);
}

TEST(DenseMatrix, FrobeniusDoesNotOverflow) {
  const auto a = DenseMatrix::from_rows({{1e200, 1e200}});
  EXPECT_NEAR(norm(a, NormKind::frobenius) / 1e200, std::sqrt(2.0), 1e-14);
}

TEST(DenseMatrix, Select) {
  EXPECT_EQ(select(DenseMatrix::identity(3), IndexSet({0, 1, 2}, 3), Axis::columns),
            DenseMatrix::identity(3));
  const auto a = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(select(a, IndexSet({2, 0}, 3), Axis::columns), DenseMatrix::from_rows({{3, 1}, {6, 4}}));
  EXPECT_EQ(select(a, IndexSet({0}, 2), Axis::rows), DenseMatrix::from_rows({{1, 2, 3}}));
  EXPECT_THROW(select(a, IndexSet({0}, 2), Axis::columns), ShapeError);
}

TEST(DenseMatrix, Combine) {
  const auto a = oracle::gaussian(3, 4, 5);
  const auto b = oracle::gaussian(3, 4, 6);
  EXPECT_EQ(combine(1, a, -1, a), DenseMatrix(3, 4));
  EXPECT_EQ(combine(1, a, 0, b), a);
  EXPECT_EQ(combine(2, DenseMatrix::from_rows({{1}}), 3, DenseMatrix::from_rows({{2}})),
            DenseMatrix::from_rows({{8}}));
  EXPECT_THROW(combine(1, a, 1, DenseMatrix(4, 3)), ShapeError);
}

TEST(DenseMatrix, RejectsNonFiniteAndBadSize) {
  EXPECT_THROW(DenseMatrix::from_entries(1, 2, {1.0, NAN}), ArgumentError);
  EXPECT_THROW(DenseMatrix::from_entries(2, 2, {1.0}), ShapeError);
}

TEST(IndexSet, ValidatesAndComplements) {
  EXPECT_THROW(IndexSet({0, 3}, 3), ArgumentError);
  EXPECT_THROW(IndexSet({1, 1}, 3), ArgumentError);
  const IndexSet s({4, 1}, 6);
  EXPECT_EQ(s.complement().indices(), (std::vector<std::size_t>{0, 2, 3, 5}));
  EXPECT_EQ(s.prefix(1).indices(), (std::vector<std::size_t>{4}));
}

TEST(DenseMatrix, RelativeErrorAndDefect) {
  const auto a = DenseMatrix::from_rows({{3, 4}});
  EXPECT_NEAR(relative_error(a, DenseMatrix(1, 2)), 1.0, 1e-15);
  EXPECT_NEAR(orthonormality_defect(DenseMatrix::identity(5)), 0.0, 0.0);
  EXPECT_NEAR(orthonormality_defect(scaled(DenseMatrix::identity(2), 2.0)), 3.0, 1e-15);
}
