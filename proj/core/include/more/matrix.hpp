#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace more {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  /// Sum of squared entries.
  double squared_norm() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Compressed sparse row matrix. Column indices are strictly increasing within
/// each row and no explicit zeros are stored.
class SparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;

  /// Duplicate coordinates are summed; entries that end up zero are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_index_.data() + row_offset_[r], row_offset_[r + 1] - row_offset_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_offset_[r], row_offset_[r + 1] - row_offset_[r]};
  }

  /// Stored value at (r, c), or 0.
  double at(std::size_t r, std::size_t c) const;

  DenseMatrix to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offset_{0};
  std::vector<std::size_t> col_index_;
  std::vector<double> values_;
};

/// a * x. Throws ShapeError when a.cols() != x.rows().
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

/// a * b. Zero entries of `a` are skipped, so sparse-in-practice inputs
/// (binary attributes, one-hot codes) are cheap.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// a^T * b, also skipping zero entries of `a`.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

/// a * b^T.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);

/// [left | right]; left columns first.
DenseMatrix concat_columns(const DenseMatrix& left, const DenseMatrix& right);

/// Columns [first, first + count) of m.
DenseMatrix slice_columns(const DenseMatrix& m, std::size_t first, std::size_t count);

/// y += alpha * x, same shapes.
void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y);

}  // namespace more
