#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rlam/densemat.hpp"
#include "rlam/detfact.hpp"
#include "rlam/sketch.hpp"

namespace rlam {

/// Rank-k SVD. `factors.d` holds k values; U and V hold nu and nv columns.
struct TruncatedSvd {
  SvdFactors factors;
  std::size_t nu = 0;
  std::size_t nv = 0;
  std::vector<std::string> notes;  // non-fatal diagnostics (clamping, rank advice)

  const DenseMatrix& u() const { return factors.u; }
  const std::vector<double>& d() const { return factors.d; }
  const DenseMatrix& v() const { return factors.v; }
};

/// Randomized SVD: rqb, then a dense SVD of the small factor B.
/// Wide inputs are transposed internally.
TruncatedSvd rsvd(const DenseMatrix& a, std::size_t k, const SketchSpec& spec = {},
                  std::optional<std::size_t> nu = std::nullopt,
                  std::optional<std::size_t> nv = std::nullopt);

/// Full dense SVD truncated to k components.
TruncatedSvd svd_truncated(const DenseMatrix& a, std::size_t k);

/// Expected spectral error bound of the randomized rank-k approximation
/// with Gaussian sketches. Requires p >= 2.
double expected_error_bound(std::size_t k, std::size_t p, std::size_t q, std::size_t m,
                            std::size_t n, double sigma_k_plus_1);

/// sqrt(sum (A - B)^2 / sum A^2).
double nrmse(const DenseMatrix& a, const DenseMatrix& approx);

}  // namespace rlam
