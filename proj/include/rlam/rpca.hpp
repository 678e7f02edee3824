#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rlam/densemat.hpp"
#include "rlam/sketch.hpp"

namespace rlam {

struct CenterScaleResult {
  DenseMatrix x;
  std::optional<std::vector<double>> center;  // column means, when centered
  std::optional<std::vector<double>> scale;   // column sample sds, when scaled
};

/// Column centering and unit-variance scaling (sample sd, denominator m-1,
/// computed after centering). Throws ArgumentError for a zero-variance
/// column when scaling, or when m < 2.
CenterScaleResult center_scale(const DenseMatrix& x, bool center, bool scale);

struct PcaOptions {
  bool center = true;
  bool scale = true;
  bool retx = true;
  bool rand = true;  // false: deterministic truncated SVD
  SketchSpec spec{};
};

/// Fitted principal components.
struct PcaModel {
  DenseMatrix rotation;               // n x k eigenvectors
  std::vector<double> eigvals;        // k, descending
  std::vector<double> sdev;           // sqrt(eigvals)
  std::optional<DenseMatrix> scores;  // m x k
  std::optional<std::vector<double>> center;
  std::optional<std::vector<double>> scale;
  /// Trace of the sample covariance of the processed data. Zero when unknown,
  /// in which case explained_variance falls back to the retained eigenvalues.
  double total_variance = 0.0;
  std::size_t n_obs = 0;
};

/// Randomized PCA with target rank 1 <= k <= min(m-1, n).
PcaModel rpca(const DenseMatrix& x, std::size_t k, const PcaOptions& opts = {});

/// Applies the stored centering/scaling, then the rotation.
DenseMatrix pca_transform(const PcaModel& model, const DenseMatrix& xnew);

struct Whitened {
  DenseMatrix loadings;                     // W diag(sqrt(eigvals))
  std::optional<DenseMatrix> scores_white;  // scores with unit-variance columns
};

/// Throws ArgumentError if a retained eigenvalue is zero.
Whitened whiten(const PcaModel& model);

struct ExplainedVariance {
  std::vector<double> proportions;
  std::vector<double> cumulative;
  bool partial_denominator = false;  // denominator is the retained eigenvalue sum
};

ExplainedVariance explained_variance(const PcaModel& model);

}  // namespace rlam
