#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rlam/densemat.hpp"

namespace rlam {

/// A = Q R (economy), or A(:, pivots) = Q R for the pivoted variant.
struct QrFactors {
  DenseMatrix q;  // m x r, orthonormal columns
  DenseMatrix r;  // r x n, upper triangular
  std::optional<IndexSet> pivots;
};

/// Economy Householder QR with r = min(m, n). The diagonal of R is made
/// nonnegative. Rank deficiency shows up as zeros on that diagonal.
QrFactors qr_economy(const DenseMatrix& a);

/// Orthonormal basis Q of qr_economy(a), without forming R.
DenseMatrix orthonormal_basis(const DenseMatrix& a);

/// Householder QR with greedy max-norm column pivoting (Businger-Golub).
/// With `steps`, stops after that many reflections: Q is m x steps and R is
/// steps x n, and the returned pivots are the full permutation whose first
/// `steps` entries are the selected columns.
QrFactors qr_pivoted(const DenseMatrix& a, std::optional<std::size_t> steps = std::nullopt);

/// Row-pivoted LU, P A = L U. `lower` is P^T L, so a = lower * upper.
struct LuFactors {
  DenseMatrix lower;  // m x r, a row permutation of a unit lower trapezoid
  DenseMatrix upper;  // r x n
  std::vector<std::size_t> row_perm;
};

LuFactors lu_partial(const DenseMatrix& a);

struct SvdFactors {
  DenseMatrix u;          // m x r
  std::vector<double> d;  // descending, nonnegative
  DenseMatrix v;          // n x r
};

struct SvdOptions {
  std::size_t max_sweeps = 30;
  double tol = 1e-12;  // bound on off-diagonal cosines
};

/// Economy SVD, r = min(m, n), by one-sided Jacobi on the triangular factor
/// of a column-pivoted QR. The entry of largest magnitude in each column of
/// V is nonnegative. Throws NumericalError if the sweep cap is hit.
SvdFactors svd_dense(const DenseMatrix& a, const SvdOptions& opts = {});

/// Singular values only (descending).
std::vector<double> singular_values(const DenseMatrix& a);

/// U diag(d) V^T.
DenseMatrix reconstruct(const SvdFactors& f);

/// Moore-Penrose pseudoinverse. Singular values <= rtol * d_max are treated
/// as zero; the default rtol is max(m, n) * machine epsilon.
DenseMatrix pinv(const DenseMatrix& a, std::optional<double> rtol = std::nullopt);

/// Solves the upper-triangular system r x = b for every column of b.
DenseMatrix solve_upper(const DenseMatrix& r, const DenseMatrix& b);

}  // namespace rlam
