#pragma once

#include <cstddef>

#include "rlam/densemat.hpp"
#include "rlam/sketch.hpp"

namespace rlam {

enum class IdMode { col, row };

/// Interpolative decomposition. Column mode: A ~= C Z with C = A(:, idx)
/// (m x k) and Z (k x n). Row mode: A ~= Z R with R = A(idx, :) (k x n) and
/// Z (m x k). With idx_only the matrices are left empty.
struct IdFactors {
  DenseMatrix skeleton;
  DenseMatrix z;
  IndexSet idx;
  IdMode mode = IdMode::col;
};

/// A ~= C U R with C = A(:, col_idx), R = A(row_idx, :).
struct CurFactors {
  DenseMatrix c;
  DenseMatrix u;
  DenseMatrix r;
  IndexSet col_idx;
  IndexSet row_idx;
};

IdFactors id_deterministic(const DenseMatrix& a, std::size_t k, IdMode mode = IdMode::col,
                           bool idx_only = false);

/// Column selection runs on B of a randomized QB factorization; the skeleton
/// is still taken from A.
IdFactors rid(const DenseMatrix& a, std::size_t k, IdMode mode = IdMode::col,
              const SketchSpec& spec = {}, bool idx_only = false);

/// CUR from a column ID (randomized when `rand`) followed by pivoted QR on
/// the rows of C.
CurFactors rcur(const DenseMatrix& a, std::size_t k, const SketchSpec& spec = {},
                bool rand = true, bool idx_only = false);

/// C Z (column mode) or Z R (row mode).
DenseMatrix reconstruct(const IdFactors& f);
DenseMatrix reconstruct(const CurFactors& f);

}  // namespace rlam
