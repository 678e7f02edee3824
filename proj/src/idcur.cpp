#include "rlam/idcur.hpp"

#include <algorithm>
#include <cmath>

#include "rlam/detfact.hpp"
#include "rlam/error.hpp"
#include "rlam/rqb.hpp"

namespace rlam {

namespace {

void check_rank(const DenseMatrix& a, std::size_t k) {
  const std::size_t r = std::min(a.rows(), a.cols());
  if (k < 1 || k > r) {
    throw ArgumentError("target rank k=" + std::to_string(k) + " must lie in [1, " +
                        std::to_string(r) + "] for a " + a.shape_string() + " matrix");
  }
}

// Expansion coefficients T = S11^+ S12. Back-substitution when the leading
// triangle is well conditioned, SVD pseudoinverse otherwise.
DenseMatrix expansion_coefficients(const DenseMatrix& s, std::size_t k) {
  const DenseMatrix s11 = s.block(0, 0, k, k);
  const DenseMatrix s12 = s.block(0, k, k, s.cols() - k);
  double dmin = std::abs(s11(0, 0)), dmax = dmin;
  for (std::size_t i = 1; i < k; ++i) {
    dmin = std::min(dmin, std::abs(s11(i, i)));
    dmax = std::max(dmax, std::abs(s11(i, i)));
  }
  if (dmax > 0.0 && dmin > 1e-12 * dmax) return solve_upper(s11, s12);
  return matmul(pinv(s11), s12);
}

// Column ID of `a`: indices from pivoted QR, Z scattered by the pivots.
struct ColumnId {
  DenseMatrix z;
  IndexSet idx;
};

ColumnId column_id(const DenseMatrix& a, std::size_t k, bool idx_only) {
  const QrFactors qr = qr_pivoted(a, k);
  const IndexSet& perm = *qr.pivots;
  ColumnId out{DenseMatrix(), perm.prefix(k)};
  if (idx_only) return out;
  const DenseMatrix t = expansion_coefficients(qr.r, k);
  const std::size_t n = a.cols();
  out.z = DenseMatrix(k, n);
  for (std::size_t j = 0; j < k; ++j) out.z(j, perm[j]) = 1.0;
  for (std::size_t j = k; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) out.z(i, perm[j]) = t(i, j - k);
  }
  return out;
}

IdFactors finish(const DenseMatrix& a, ColumnId cid, IdMode mode, bool idx_only) {
  IdFactors f;
  f.mode = mode;
  if (mode == IdMode::col) {
    if (!idx_only) f.skeleton = select(a, cid.idx, Axis::columns);
    f.z = std::move(cid.z);
  } else {
    if (!idx_only) {
      f.skeleton = select(a, cid.idx, Axis::rows);
      f.z = transpose(cid.z);
    }
  }
  f.idx = std::move(cid.idx);
  return f;
}

}  // namespace

IdFactors id_deterministic(const DenseMatrix& a, std::size_t k, IdMode mode, bool idx_only) {
  check_rank(a, k);
  ColumnId cid = mode == IdMode::col ? column_id(a, k, idx_only)
                                     : column_id(transpose(a), k, idx_only);
  return finish(a, std::move(cid), mode, idx_only);
}

IdFactors rid(const DenseMatrix& a, std::size_t k, IdMode mode, const SketchSpec& spec,
              bool idx_only) {
  check_rank(a, k);
  const DenseMatrix oriented = mode == IdMode::col ? a : transpose(a);
  const QbFactors qb = rqb(oriented, k, spec);
  ColumnId cid = column_id(qb.b, k, idx_only);
  return finish(a, std::move(cid), mode, idx_only);
}

CurFactors rcur(const DenseMatrix& a, std::size_t k, const SketchSpec& spec, bool rand,
                bool idx_only) {
  check_rank(a, k);
  IdFactors cols = rand ? rid(a, k, IdMode::col, spec) : id_deterministic(a, k, IdMode::col);
  const QrFactors rows_qr = qr_pivoted(transpose(cols.skeleton), k);
  CurFactors out;
  out.row_idx = rows_qr.pivots->prefix(k);
  out.col_idx = cols.idx;
  if (idx_only) return out;
  out.r = select(a, out.row_idx, Axis::rows);
  out.u = matmul(cols.z, pinv(out.r));
  out.c = std::move(cols.skeleton);
  return out;
}

DenseMatrix reconstruct(const IdFactors& f) {
  return f.mode == IdMode::col ? matmul(f.skeleton, f.z) : matmul(f.z, f.skeleton);
}

DenseMatrix reconstruct(const CurFactors& f) { return matmul(matmul(f.c, f.u), f.r); }

}  // namespace rlam
