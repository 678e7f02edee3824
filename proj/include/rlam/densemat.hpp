#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rlam {

/// Dense row-major matrix of doubles.
///
/// Storage is a single contiguous buffer; every slicing operation returns a
/// copy. Zero-sized extents are allowed for intermediates (an empty
/// expansion block, for instance), but matrices read from external input
/// always have positive extents.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Takes ownership of `entries` (row-major). Throws ShapeError on a size
  /// mismatch and ArgumentError on NaN/Inf entries.
  static DenseMatrix from_entries(std::size_t rows, std::size_t cols,
                                  std::vector<double> entries);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);
  static DenseMatrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<const double> entries() const noexcept { return data_; }

  std::vector<double> column_copy(std::size_t j) const;

  /// Copy of the block starting at (r0, c0) with extent nr x nc.
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  /// First `nc` columns.
  DenseMatrix leading_columns(std::size_t nc) const { return block(0, 0, rows_, nc); }

  bool all_finite() const noexcept;

  std::string shape_string() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Sorted-or-not sequence of distinct zero-based indices into a dimension of
/// extent `bound`.
class IndexSet {
 public:
  IndexSet() = default;
  /// Throws ArgumentError if any index is >= bound or repeated.
  IndexSet(std::vector<std::size_t> indices, std::size_t bound);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t operator[](std::size_t i) const noexcept { return indices_[i]; }

  /// The first `n` indices.
  IndexSet prefix(std::size_t n) const;
  /// Indices in [0, bound) not present in this set, ascending.
  IndexSet complement() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t bound_ = 0;
};

enum class NormKind { frobenius, spectral, maxabs, l1elem };
enum class Axis { columns, rows };

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b without forming the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

/// The spectral kind runs a dense SVD; the others are single passes.
double norm(const DenseMatrix& a, NormKind kind);

DenseMatrix select(const DenseMatrix& a, const IndexSet& idx, Axis axis);

/// alpha * a + beta * b.
DenseMatrix combine(double alpha, const DenseMatrix& a, double beta, const DenseMatrix& b);

DenseMatrix scaled(const DenseMatrix& a, double alpha);

/// a * diag(d): column j scaled by d[j].
DenseMatrix scale_columns(const DenseMatrix& a, std::span<const double> d);

/// Largest |a_ij - b_ij|; shapes must match.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

/// ||a - b||_F / ||a||_F.
double relative_error(const DenseMatrix& a, const DenseMatrix& b);

/// ||q^T q - I||_maxabs.
double orthonormality_defect(const DenseMatrix& q);

}  // namespace rlam
