#pragma once

#include <cstddef>
#include <vector>

namespace squeeze {

// Dense row-major matrix. Sizes in this toolkit stay at desk scale
// (a few thousand rows), so everything is stored explicitly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

// y = A x, rows computed in parallel. Each row is a serial dot product, so
// the result does not depend on the worker count.
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

// y = A^T x.
std::vector<double> matvec_transposed(const Matrix& a, const std::vector<double>& x);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// In-place Cholesky factorization A = L L^T (lower triangle kept, strict
// upper left untouched). Throws if A is not positive definite.
void cholesky_factor(Matrix& a);

// Solve L y = b in place.
void forward_subst(const Matrix& l, std::vector<double>& b);

// Solve L^T x = y in place.
void backward_subst_transposed(const Matrix& l, std::vector<double>& b);

// Compressed sparse row symmetric matrix (full pattern stored). Used for the
// shell operators where the stencil is local; spectra go through a dense
// copy, time stepping through the sparse product.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;
  std::vector<double> vals;

  std::vector<double> apply(const std::vector<double>& x) const;
  Matrix dense() const;
};

// Build CSR from a dense symmetric matrix, dropping exact zeros.
SparseMatrix sparse_from_dense(const Matrix& a);

}  // namespace squeeze
