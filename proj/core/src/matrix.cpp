#include "more/matrix.hpp"

#include <algorithm>
#include <string>

#include "more/errors.hpp"

namespace more {

namespace {

std::string dims(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shapes " + dims(a) + " and " + dims(b) + " differ");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ShapeError("DenseMatrix: buffer holds " + std::to_string(values_.size()) +
                     " values, expected " + std::to_string(rows_ * cols_));
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("DenseMatrix: ragged initializer");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double DenseMatrix::squared_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw ShapeError("SparseMatrix: triplet out of bounds");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offset_.assign(rows + 1, 0);
  m.col_index_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  std::size_t i = 0;
  while (i < triplets.size()) {
    const std::size_t r = triplets[i].row;
    const std::size_t c = triplets[i].col;
    double v = 0.0;
    for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) {
      v += triplets[i].value;
    }
    if (v != 0.0) {
      m.col_index_.push_back(c);
      m.values_.push_back(v);
      ++m.row_offset_[r + 1];
    }
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_offset_[r + 1] += m.row_offset_[r];
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto cs = row_cols(r);
  const auto it = std::lower_bound(cs.begin(), cs.end(), c);
  if (it == cs.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cs.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto cs = row_cols(r);
    const auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) d(r, cs[k]) = vs[k];
  }
  return d;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
  if (a.cols() != x.rows()) {
    throw ShapeError("spmm: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + dims(x));
  }
  DenseMatrix out(a.rows(), x.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    const auto cs = a.row_cols(r);
    const auto vs = a.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const auto src = x.row(cs[k]);
      const double w = vs[k];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w * src[j];
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: " + dims(a) + " times " + dims(b));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    const auto ai = a.row(i);
    for (std::size_t k = 0; k < ai.size(); ++k) {
      const double w = ai[k];
      if (w == 0.0) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w * bk[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("matmul_tn: " + dims(a) + "^T times " + dims(b));
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    const auto bi = b.row(i);
    for (std::size_t k = 0; k < ai.size(); ++k) {
      const double w = ai[k];
      if (w == 0.0) continue;
      auto dst = out.row(k);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += w * bi[j];
    }
  }
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt: " + dims(a) + " times " + dims(b) + "^T");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < ai.size(); ++k) s += ai[k] * bj[k];
      out(i, j) = s;
    }
  }
  return out;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "hadamard");
  DenseMatrix out = a;
  auto o = out.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bv[i];
  return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "add");
  DenseMatrix out = a;
  axpy(1.0, b, out);
  return out;
}

DenseMatrix concat_columns(const DenseMatrix& left, const DenseMatrix& right) {
  if (left.rows() != right.rows()) {
    throw ShapeError("concat_columns: row counts " + dims(left) + " and " + dims(right));
  }
  DenseMatrix out(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(left.row(r).begin(), left.row(r).end(), dst.begin());
    std::copy(right.row(r).begin(), right.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(left.cols()));
  }
  return out;
}

DenseMatrix slice_columns(const DenseMatrix& m, std::size_t first, std::size_t count) {
  if (first + count > m.cols()) throw ShapeError("slice_columns: range exceeds " + dims(m));
  DenseMatrix out(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(r).subspan(first, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y) {
  require_same_shape(x, y, "axpy");
  auto yv = y.values();
  const auto xv = x.values();
  for (std::size_t i = 0; i < yv.size(); ++i) yv[i] += alpha * xv[i];
}

}  // namespace more
