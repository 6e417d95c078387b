#include "squeeze/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "squeeze/parallel.hpp"

namespace squeeze {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  parallel_for(a.rows(), [&](std::size_t i) {
    const double* ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  });
  return y;
}

std::vector<double> matvec_transposed(const Matrix& a, const std::vector<double>& x) {
  if (x.size() != a.rows()) throw std::invalid_argument("matvec_transposed: size mismatch");
  std::vector<double> y(a.cols(), 0.0);
  parallel_for(a.cols(), [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
    y[j] = s;
  });
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: size mismatch");
  Matrix c(a.rows(), b.cols(), 0.0);
  parallel_for(a.rows(), [&](std::size_t i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  });
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void cholesky_factor(Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("cholesky_factor: square matrix required");
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    const double* lj = a.row(j);
    for (std::size_t k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0)) throw std::runtime_error("cholesky_factor: matrix not positive definite");
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    // Column update below the pivot, rows are independent.
    parallel_for(n - j - 1, [&](std::size_t t) {
      const std::size_t i = j + 1 + t;
      double s = a(i, j);
      const double* li = a.row(i);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      a(i, j) = s / ljj;
    });
  }
}

void forward_subst(const Matrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    const double* li = l.row(i);
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s / li[i];
  }
}

void backward_subst_transposed(const Matrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * b[k];
    b[ii] = s / l(ii, ii);
  }
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
  std::vector<double> y(n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  });
  return y;
}

Matrix SparseMatrix::dense() const {
  Matrix a(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) a(i, cols[k]) += vals[k];
  return a;
}

SparseMatrix sparse_from_dense(const Matrix& a) {
  SparseMatrix s;
  s.n = static_cast<int>(a.rows());
  s.row_ptr.assign(s.n + 1, 0);
  for (int i = 0; i < s.n; ++i) {
    s.row_ptr[i] = static_cast<int>(s.cols.size());
    for (int j = 0; j < s.n; ++j) {
      const double v = a(i, j);
      if (v != 0.0) {
        s.cols.push_back(j);
        s.vals.push_back(v);
      }
    }
  }
  s.row_ptr[s.n] = static_cast<int>(s.cols.size());
  return s;
}

}  // namespace squeeze
