#include "squeeze/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "squeeze/parallel.hpp"

namespace squeeze {

void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                    bool accumulate) {
  const int n = static_cast<int>(a.rows());
  if (n == 0 || a.cols() != a.rows())
    throw std::invalid_argument("tridiagonalize: square matrix required");
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  // Subdiagonal elements are staged in esub with esub[i] coupling i-1 and i.
  std::vector<double> esub(n, 0.0);

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        esub[i] = a(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        esub[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        // p = A u / h, computed per row; rows are independent.
        parallel_for(static_cast<std::size_t>(l + 1), [&](std::size_t js) {
          const int j = static_cast<int>(js);
          if (accumulate) a(j, i) = a(i, j) / h;
          double gg = 0.0;
          for (int k = 0; k <= j; ++k) gg += a(j, k) * a(i, k);
          for (int k = j + 1; k <= l; ++k) gg += a(k, j) * a(i, k);
          e[j] = gg / h;
        });
        f = 0.0;
        for (int j = 0; j <= l; ++j) f += e[j] * a(i, j);
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) e[j] -= hh * a(i, j);
        // Rank-two update of the trailing block, row by row.
        parallel_for(static_cast<std::size_t>(l + 1), [&](std::size_t js) {
          const int j = static_cast<int>(js);
          const double fj = a(i, j);
          const double gj = e[j];
          for (int k = 0; k <= j; ++k) a(j, k) -= fj * e[k] + gj * a(i, k);
        });
      }
    } else {
      esub[i] = a(i, l);
    }
    d[i] = h;
  }

  if (accumulate) {
    d[0] = 0.0;
    for (int i = 0; i < n; ++i) {
      const int l = i - 1;
      if (d[i] != 0.0) {
        // Apply the stored Householder reflector to the columns built so far.
        std::vector<double> g(l + 1, 0.0);
        for (int j = 0; j <= l; ++j) {
          double s = 0.0;
          for (int k = 0; k <= l; ++k) s += a(i, k) * a(k, j);
          g[j] = s;
        }
        parallel_for(static_cast<std::size_t>(l + 1), [&](std::size_t ks) {
          const int k = static_cast<int>(ks);
          for (int j = 0; j <= l; ++j) a(k, j) -= g[j] * a(k, i);
        });
      }
      d[i] = a(i, i);
      a(i, i) = 1.0;
      for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
  } else {
    for (int i = 0; i < n; ++i) d[i] = a(i, i);
  }

  for (int i = 0; i + 1 < n; ++i) e[i] = esub[i + 1];
  e[n - 1] = 0.0;
}

namespace {

struct Rotation {
  int col;  // rotates columns col and col+1
  double c, s;
};

void apply_rotations(Matrix& z, const std::vector<Rotation>& rots) {
  if (rots.empty()) return;
  const std::size_t n = z.rows();
  // Every row sees the same rotation sequence, so the result is bitwise
  // independent of how rows are distributed over workers.
  parallel_for(n, [&](std::size_t k) {
    double* zk = z.row(k);
    for (const Rotation& r : rots) {
      const double f = zk[r.col + 1];
      zk[r.col + 1] = r.s * zk[r.col] + r.c * f;
      zk[r.col] = r.c * zk[r.col] - r.s * f;
    }
  });
}

}  // namespace

void tridiagonal_eigen(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<Rotation> rots;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw std::runtime_error("tridiagonal_eigen: too many QL iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        rots.clear();
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) rots.push_back({i, c, s});
        }
        if (z) {
          // Rotations were recorded innermost-first; the matrix update order
          // matches the recording order.
          apply_rotations(*z, rots);
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void fix_vector_signs(Matrix& vectors) {
  if (vectors.empty()) return;
  const std::size_t n = vectors.rows();
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) amax = std::max(amax, std::abs(vectors(i, j)));
    if (amax == 0.0) continue;
    const double tol = 1e-12 * amax;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(vectors(i, j)) > tol) {
        if (vectors(i, j) < 0.0)
          for (std::size_t k = 0; k < n; ++k) vectors(k, j) = -vectors(k, j);
        break;
      }
    }
  }
}

namespace {

// Sort ascending and keep the first `count` pairs.
EigenResult sort_and_take(std::vector<double>& d, Matrix* z, int count, bool want_vectors) {
  const int n = static_cast<int>(d.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return d[a] < d[b]; });
  EigenResult res;
  const int keep = std::min(count, n);
  res.values.resize(keep);
  for (int j = 0; j < keep; ++j) res.values[j] = d[order[j]];
  if (want_vectors && z) {
    res.vectors = Matrix(n, keep);
    for (int j = 0; j < keep; ++j)
      for (int i = 0; i < n; ++i) res.vectors(i, j) = (*z)(i, order[j]);
    fix_vector_signs(res.vectors);
  }
  return res;
}

}  // namespace

EigenResult symmetric_eigen(Matrix a, bool want_vectors) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> d, e;
  tridiagonalize(a, d, e, want_vectors);
  tridiagonal_eigen(d, e, want_vectors ? &a : nullptr);
  return sort_and_take(d, want_vectors ? &a : nullptr, n, want_vectors);
}

namespace {

// C = L^{-1} K L^{-T} for lower triangular L.
Matrix reduce_to_standard(const Matrix& k, const Matrix& l) {
  const std::size_t n = k.rows();
  // Y = L^{-1} K, column by column (K is symmetric so rows serve as columns).
  Matrix y(n, n);
  parallel_for(n, [&](std::size_t c) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = k(i, c);
    forward_subst(l, col);
    for (std::size_t i = 0; i < n; ++i) y(i, c) = col[i];
  });
  // C^T = L^{-1} Y^T: row i of C is L^{-1} applied to row i of Y.
  Matrix cmat(n, n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = y(i, j);
    forward_subst(l, row);
    for (std::size_t j = 0; j < n; ++j) cmat(i, j) = row[j];
  });
  // Symmetrize to remove rounding skew.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (cmat(i, j) + cmat(j, i));
      cmat(i, j) = cmat(j, i) = v;
    }
  return cmat;
}

}  // namespace

EigenResult generalized_symmetric_eigen(const Matrix& k, const Matrix& m, int count,
                                        bool want_vectors) {
  const std::size_t n = k.rows();
  if (k.cols() != n || m.rows() != n || m.cols() != n)
    throw std::invalid_argument("generalized_symmetric_eigen: size mismatch");
  if (count <= 0) throw std::invalid_argument("generalized_symmetric_eigen: count > 0 required");
  Matrix l = m;
  cholesky_factor(l);
  Matrix cmat = reduce_to_standard(k, l);

  std::vector<double> d, e;
  tridiagonalize(cmat, d, e, want_vectors);
  tridiagonal_eigen(d, e, want_vectors ? &cmat : nullptr);
  EigenResult res = sort_and_take(d, want_vectors ? &cmat : nullptr, count, want_vectors);

  if (want_vectors) {
    // Back-transform v = L^{-T} y; the columns become M-orthonormal.
    const std::size_t keep = res.vectors.cols();
    parallel_for(keep, [&](std::size_t j) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = res.vectors(i, j);
      backward_subst_transposed(l, col);
      for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = col[i];
    });
    fix_vector_signs(res.vectors);
  }
  return res;
}

std::vector<double> generalized_symmetric_eigenvalues(const Matrix& k, const Matrix& m,
                                                      int count) {
  return generalized_symmetric_eigen(k, m, count, false).values;
}

std::vector<int> cluster_ids(const std::vector<double>& values, double rel_tol) {
  std::vector<int> ids(values.size(), 0);
  int current = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    const double scale = std::max({std::abs(values[j]), std::abs(values[j - 1]), 1.0});
    if (values[j] - values[j - 1] > rel_tol * scale) ++current;
    ids[j] = current;
  }
  return ids;
}

}  // namespace squeeze
