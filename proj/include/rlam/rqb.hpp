#pragma once

#include <cstddef>

#include "rlam/densemat.hpp"
#include "rlam/sketch.hpp"

namespace rlam {

/// A ~= Q B with orthonormal Q (m x l) and B = Q^T A (l x n).
struct QbFactors {
  DenseMatrix q;
  DenseMatrix b;
  std::size_t l = 0;
};

/// (A A^T)^q Y by plain alternating products. Loses accuracy quickly in
/// floating point; kept for comparison.
DenseMatrix power_direct(const DenseMatrix& a, const DenseMatrix& y, std::size_t q);

/// q rounds of QR-stabilized subspace iteration.
DenseMatrix power_subspace(const DenseMatrix& a, const DenseMatrix& y, std::size_t q);

/// q rounds of power iteration normalized by the lower factor of a row-pivoted LU.
DenseMatrix power_normalized(const DenseMatrix& a, const DenseMatrix& y, std::size_t q);

DenseMatrix apply_power_scheme(const DenseMatrix& a, const DenseMatrix& y, std::size_t q,
                               PowerScheme scheme);

/// Sketch width used by rqb: min(k + p, min(m, n)).
std::size_t sketch_width(std::size_t m, std::size_t n, std::size_t k, std::size_t p);

/// Randomized QB decomposition with target rank k. Throws ArgumentError
/// unless 1 <= k <= min(m, n).
QbFactors rqb(const DenseMatrix& a, std::size_t k, const SketchSpec& spec = {});

}  // namespace rlam
