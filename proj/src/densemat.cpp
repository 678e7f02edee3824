#include "rlam/densemat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlam/detfact.hpp"
#include "rlam/error.hpp"

namespace rlam {

namespace {

constexpr std::size_t kRowBlock = 64;
constexpr std::size_t kInnerBlock = 256;
constexpr std::size_t kColBlock = 1024;

std::string shapes(const DenseMatrix& a, const DenseMatrix& b) {
  return "A is " + a.shape_string() + ", B is " + b.shape_string();
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::from_entries(std::size_t rows, std::size_t cols,
                                      std::vector<double> entries) {
  if (entries.size() != rows * cols) {
    throw ShapeError("entry count " + std::to_string(entries.size()) + " does not match " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i])) {
      throw ArgumentError("non-finite entry at row " + std::to_string(i / std::max<std::size_t>(cols, 1)) +
                          ", column " + std::to_string(cols ? i % cols : 0));
    }
  }
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(entries);
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.begin()->size() : 0;
  std::vector<double> entries;
  entries.reserve(nr * nc);
  for (const auto& r : rows) {
    if (r.size() != nc) throw ShapeError("ragged row list");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return from_entries(nr, nc, std::move(entries));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> v) {
  return from_entries(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> DenseMatrix::column_copy(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw ShapeError("block out of range for " + shape_string());
  }
  DenseMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    const double* src = data_.data() + (r0 + i) * cols_ + c0;
    std::copy(src, src + nc, out.data() + i * nc);
  }
  return out;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::string DenseMatrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t bound)
    : indices_(std::move(indices)), bound_(bound) {
  std::vector<bool> seen(bound, false);
  for (std::size_t i : indices_) {
    if (i >= bound) {
      throw ArgumentError("index " + std::to_string(i) + " out of range for bound " +
                          std::to_string(bound));
    }
    if (seen[i]) throw ArgumentError("duplicate index " + std::to_string(i));
    seen[i] = true;
  }
}

IndexSet IndexSet::prefix(std::size_t n) const {
  if (n > indices_.size()) throw ArgumentError("prefix longer than index set");
  return IndexSet(std::vector<std::size_t>(indices_.begin(), indices_.begin() + n), bound_);
}

IndexSet IndexSet::complement() const {
  std::vector<bool> present(bound_, false);
  for (std::size_t i : indices_) present[i] = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < bound_; ++i) {
    if (!present[i]) rest.push_back(i);
  }
  return IndexSet(std::move(rest), bound_);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul dimension mismatch: " + shapes(a, b));
  const std::size_t m = a.rows(), inner = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
    const std::size_t j1 = std::min(n, j0 + kColBlock);
    for (std::size_t k0 = 0; k0 < inner; k0 += kInnerBlock) {
      const std::size_t k1 = std::min(inner, k0 + kInnerBlock);
      for (std::size_t i0 = 0; i0 < m; i0 += kRowBlock) {
        const std::size_t i1 = std::min(m, i0 + kRowBlock);
        for (std::size_t i = i0; i < i1; ++i) {
          double* crow = c.data() + i * n;
          const double* arow = a.data() + i * inner;
          for (std::size_t k = k0; k < k1; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.data() + k * n;
#pragma omp simd
            for (std::size_t j = j0; j < j1; ++j) crow[j] += aik * brow[j];
          }
        }
      }
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("matmul_tn dimension mismatch: " + shapes(a, b));
  const std::size_t m = a.rows(), n = a.cols(), p = b.cols();
  DenseMatrix c(n, p);
  for (std::size_t j0 = 0; j0 < n; j0 += kRowBlock) {
    const std::size_t j1 = std::min(n, j0 + kRowBlock);
    for (std::size_t i = 0; i < m; ++i) {
      const double* arow = a.data() + i * n;
      const double* brow = b.data() + i * p;
      for (std::size_t j = j0; j < j1; ++j) {
        const double aij = arow[j];
        if (aij == 0.0) continue;
        double* crow = c.data() + j * p;
#pragma omp simd
        for (std::size_t t = 0; t < p; ++t) crow[t] += aij * brow[t];
      }
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt dimension mismatch: " + shapes(a, b));
  return matmul(a, transpose(b));
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  constexpr std::size_t tile = 32;
  for (std::size_t i0 = 0; i0 < a.rows(); i0 += tile) {
    for (std::size_t j0 = 0; j0 < a.cols(); j0 += tile) {
      const std::size_t i1 = std::min(a.rows(), i0 + tile);
      const std::size_t j1 = std::min(a.cols(), j0 + tile);
      for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t j = j0; j < j1; ++j) t(j, i) = a(i, j);
      }
    }
  }
  return t;
}

double norm(const DenseMatrix& a, NormKind kind) {
  const auto e = a.entries();
  switch (kind) {
    case NormKind::frobenius: {
      // Scaled sum of squares.
      double scale = 0.0, ssq = 1.0;
      for (double x : e) {
        if (x == 0.0) continue;
        const double ax = std::abs(x);
        if (scale < ax) {
          ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
          scale = ax;
        } else {
          ssq += (ax / scale) * (ax / scale);
        }
      }
      return scale * std::sqrt(ssq);
    }
    case NormKind::spectral: {
      if (a.empty()) return 0.0;
      const auto d = singular_values(a);
      return d.empty() ? 0.0 : d.front();
    }
    case NormKind::maxabs: {
      double m = 0.0;
      for (double x : e) m = std::max(m, std::abs(x));
      return m;
    }
    case NormKind::l1elem: {
      double s = 0.0;
      for (double x : e) s += std::abs(x);
      return s;
    }
  }
  return 0.0;
}

DenseMatrix select(const DenseMatrix& a, const IndexSet& idx, Axis axis) {
  const std::size_t dim = axis == Axis::columns ? a.cols() : a.rows();
  if (idx.bound() != dim) {
    throw ShapeError("index set bound " + std::to_string(idx.bound()) +
                     " does not match dimension " + std::to_string(dim) + " of " +
                     a.shape_string());
  }
  if (axis == Axis::rows) {
    DenseMatrix out(idx.size(), a.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const auto src = a.row(idx[r]);
      std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
  }
  DenseMatrix out(a.rows(), idx.size());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t c = 0; c < idx.size(); ++c) out(i, c) = a(i, idx[c]);
  }
  return out;
}

DenseMatrix combine(double alpha, const DenseMatrix& a, double beta, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("combine shape mismatch: " + shapes(a, b));
  }
  DenseMatrix c(a.rows(), a.cols());
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < c.size(); ++i) pc[i] = alpha * pa[i] + beta * pb[i];
  return c;
}

DenseMatrix scaled(const DenseMatrix& a, double alpha) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] *= alpha;
  return c;
}

DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d) {
  if (d.size() != a.cols()) throw ShapeError("scale_columns: length mismatch");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    auto r = c.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= d[j];
  }
  return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff shape mismatch: " + shapes(a, b));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double relative_error(const DenseMatrix& a, const DenseMatrix& b) {
  const double denom = norm(a, NormKind::frobenius);
  const double num = norm(combine(1.0, a, -1.0, b), NormKind::frobenius);
  return denom > 0.0 ? num / denom : num;
}

double orthonormality_defect(const DenseMatrix& q) {
  auto g = matmul_tn(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return norm(g, NormKind::maxabs);
}

}  // namespace rlam
