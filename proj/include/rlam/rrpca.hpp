#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rlam/densemat.hpp"
#include "rlam/sketch.hpp"

namespace rlam {

/// Inexact augmented Lagrange multiplier settings for robust PCA.
struct IalmParams {
  std::optional<double> lambda;  // default max(m, n)^(-1/2)
  std::size_t maxiter = 50;
  double tol = 1e-5;
  bool rand = true;
  SketchSpec spec{};
  double rho = 1.5;             // growth factor of mu
  double mu_cap_factor = 1e7;   // mu never exceeds this times its initial value
  double rank_growth = 0.05;    // fraction of min(m, n) added when the rank saturates
};

struct IalmIteration {
  std::size_t iteration = 0;  // 1-based
  double residual = 0.0;      // ||A - L - S||_F / ||A||_F
  std::size_t k = 0;          // target rank requested for the next SVD
  std::size_t l = 0;          // singular values kept after thresholding
  double mu = 0.0;            // mu used in this iteration
  bool randomized = false;    // whether this iteration used rsvd
};

struct RpcaResult {
  DenseMatrix low_rank;  // L
  DenseMatrix sparse;    // S
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<IalmIteration> trace;
};

/// Entrywise sign(x) max(|x| - tau, 0).
DenseMatrix soft_threshold(const DenseMatrix& m, double tau);

struct RankPrediction {
  std::size_t k_next = 0;
  std::size_t l = 0;
};

/// l counts singular values above mu_inv (at least 1). If l < k the next
/// target rank is l + 1, otherwise it grows by ceil(growth * minmn), capped
/// at minmn.
RankPrediction predict_rank(const std::vector<double>& d, double mu_inv, std::size_t k,
                            std::size_t minmn, double growth = 0.05);

/// max(||A||_2, ||A||_maxabs / lambda). The spectral norm is computed with a
/// dense SVD unless supplied.
double dual_norm(const DenseMatrix& a, double lambda,
                 std::optional<double> spectral = std::nullopt);

/// Spectral norm estimate from `steps` power iterations on A^T A.
double spectral_norm_estimate(const DenseMatrix& a, std::size_t steps = 30,
                              std::uint64_t seed = 0);

/// Robust PCA A = L + S by inexact ALM. Throws ArgumentError on a zero
/// input and NumericalError if an iterate becomes non-finite.
RpcaResult rrpca(const DenseMatrix& a, const IalmParams& params = {});

}  // namespace rlam
