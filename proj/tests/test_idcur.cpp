#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlam/error.hpp"
#include "rlam/idcur.hpp"
#include "rlam/synth.hpp"

using namespace rlam;

namespace {

void expect_identity_block(const IdFactors& f) {
  const std::size_t k = f.idx.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const double z = f.mode == IdMode::col ? f.z(a, f.idx[b]) : f.z(f.idx[b], a);
      EXPECT_EQ(z, a == b ? 1.0 : 0.0);
    }
}

}  // namespace

TEST(Id, DuplicatedColumn) {
  const auto cd = oracle::gaussian(10, 2, 1);
  DenseMatrix a(10, 3);
  for (std::size_t i = 0; i < 10; ++i) {
    a(i, 0) = cd(i, 0);
    a(i, 1) = 2 * cd(i, 0);
    a(i, 2) = cd(i, 1);
  }
  const auto f = id_deterministic(a, 2);
  std::vector<std::size_t> idx = f.idx.indices();
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(idx.back(), 2u);
  EXPECT_LT(idx.front(), 2u);
  EXPECT_LE(oracle::frob_diff(reconstruct(f), a), 1e-10);
}

TEST(Id, IdentityIsPermutation) {
  const auto f = id_deterministic(DenseMatrix::identity(3), 3);
  EXPECT_EQ(reconstruct(f), DenseMatrix::identity(3));
  expect_identity_block(f);
}

TEST(Id, ExactRank) {
  const auto a = oracle::rank_r(20, 15, 4, 2);
  for (auto mode : {IdMode::col, IdMode::row}) {
    const auto f = id_deterministic(a, 4, mode);
    EXPECT_LE(oracle::frob_diff(reconstruct(f), a) / oracle::frob(a), 1e-9);
    expect_identity_block(f);
    const auto sk = select(a, f.idx, mode == IdMode::col ? Axis::columns : Axis::rows);
    EXPECT_EQ(f.skeleton, sk);
  }
}

TEST(Id, IdxOnlyAndRange) {
  const auto a = oracle::gaussian(6, 5, 3);
  const auto f = id_deterministic(a, 2, IdMode::col, true);
  EXPECT_EQ(f.idx.size(), 2u);
  EXPECT_TRUE(f.z.empty());
  EXPECT_THROW(id_deterministic(a, 0), ArgumentError);
  EXPECT_THROW(id_deterministic(a, 6), ArgumentError);
}

TEST(Rid, ExactRankAndInvariantAcrossSeeds) {
  const auto a = oracle::rank_r(40, 30, 6, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SketchSpec s;
    s.seed = seed;
    for (auto mode : {IdMode::col, IdMode::row}) {
      const auto f = rid(a, 6, mode, s);
      EXPECT_LE(oracle::frob_diff(reconstruct(f), a) / oracle::frob(a), 1e-8);
      expect_identity_block(f);
    }
  }
}

TEST(Rid, PowerIterationsHelpOnSlowDecay) {
  SpectrumProfile prof;
  prof.rate = 1.0;
  const auto a = gen_decaying(80, 60, prof, 5);
  double e0 = 0, e2 = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SketchSpec s;
    s.seed = seed;
    s.p = 5;
    s.q = 0;
    e0 += oracle::frob_diff(reconstruct(rid(a, 10, IdMode::col, s)), a);
    s.q = 2;
    e2 += oracle::frob_diff(reconstruct(rid(a, 10, IdMode::col, s)), a);
  }
  EXPECT_LE(e2, e0);
}

TEST(Rcur, ExactRank) {
  const auto a = oracle::rank_r(30, 20, 5, 6);
  for (bool rand : {true, false}) {
    const auto f = rcur(a, 5, {}, rand);
    EXPECT_LE(oracle::frob_diff(reconstruct(f), a) / oracle::frob(a), 1e-8);
    EXPECT_EQ(f.c, select(a, f.col_idx, Axis::columns));
    EXPECT_EQ(f.r, select(a, f.row_idx, Axis::rows));
  }
}

TEST(Rcur, Identity) {
  const auto f = rcur(DenseMatrix::identity(4), 4);
  EXPECT_LE(max_abs_diff(reconstruct(f), DenseMatrix::identity(4)), 1e-15);
}

TEST(Rcur, IdxOnly) {
  const auto f = rcur(oracle::gaussian(12, 10, 7), 3, {}, true, true);
  EXPECT_EQ(f.col_idx.size(), 3u);
  EXPECT_EQ(f.row_idx.size(), 3u);
  EXPECT_TRUE(f.u.empty());
}
