#include "rlam/rqb.hpp"

#include <algorithm>

#include "rlam/detfact.hpp"
#include "rlam/error.hpp"

namespace rlam {

namespace {

void check_sketch_rows(const DenseMatrix& a, const DenseMatrix& y) {
  if (y.rows() != a.rows()) {
    throw ShapeError("sketch has " + std::to_string(y.rows()) + " rows but A is " +
                     a.shape_string());
  }
}

DenseMatrix lower_factor(const DenseMatrix& y) { return lu_partial(y).lower; }

}  // namespace

DenseMatrix power_direct(const DenseMatrix& a, const DenseMatrix& y, std::size_t q) {
  check_sketch_rows(a, y);
  DenseMatrix out = y;
  for (std::size_t j = 0; j < q; ++j) out = matmul(a, matmul_tn(a, out));
  return out;
}

DenseMatrix power_subspace(const DenseMatrix& a, const DenseMatrix& y, std::size_t q) {
  check_sketch_rows(a, y);
  DenseMatrix out = y;
  for (std::size_t j = 0; j < q; ++j) {
    const DenseMatrix basis = orthonormal_basis(out);
    const DenseMatrix cobasis = orthonormal_basis(matmul_tn(a, basis));
    out = matmul(a, cobasis);
  }
  return out;
}

DenseMatrix power_normalized(const DenseMatrix& a, const DenseMatrix& y, std::size_t q) {
  check_sketch_rows(a, y);
  DenseMatrix out = y;
  for (std::size_t j = 0; j < q; ++j) {
    const DenseMatrix lower = lower_factor(out);
    out = matmul(a, lower_factor(matmul_tn(a, lower)));
  }
  return out;
}

DenseMatrix apply_power_scheme(const DenseMatrix& a, const DenseMatrix& y, std::size_t q,
                               PowerScheme scheme) {
  switch (scheme) {
    case PowerScheme::direct: return power_direct(a, y, q);
    case PowerScheme::subspace: return power_subspace(a, y, q);
    case PowerScheme::normalized: return power_normalized(a, y, q);
  }
  return y;
}

std::size_t sketch_width(std::size_t m, std::size_t n, std::size_t k, std::size_t p) {
  return std::min(k + p, std::min(m, n));
}

QbFactors rqb(const DenseMatrix& a, std::size_t k, const SketchSpec& spec) {
  const std::size_t m = a.rows(), n = a.cols();
  if (k < 1 || k > std::min(m, n)) {
    throw ArgumentError("target rank k=" + std::to_string(k) + " must lie in [1, " +
                        std::to_string(std::min(m, n)) + "] for a " + a.shape_string() +
                        " matrix");
  }
  const std::size_t l = sketch_width(m, n, k, spec.p);
  const DenseMatrix omega = random_test_matrix(n, l, spec);
  DenseMatrix y = matmul(a, omega);
  y = apply_power_scheme(a, y, spec.q, spec.scheme);
  DenseMatrix q = orthonormal_basis(y);
  DenseMatrix b = matmul_tn(q, a);
  return {std::move(q), std::move(b), l};
}

}  // namespace rlam
