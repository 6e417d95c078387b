#pragma once

#include <vector>

#include "squeeze/linalg.hpp"

namespace squeeze {

// Householder reduction of a symmetric matrix to tridiagonal form.
// On exit d holds the diagonal and e the subdiagonal (e[i] couples i and
// i+1, e[n-1] = 0). With accumulate, a is overwritten by the orthogonal Q
// with Q^T A Q tridiagonal; otherwise its contents are destroyed.
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e,
                    bool accumulate);

// Implicit-shift QL iteration on a symmetric tridiagonal matrix. d and e as
// above; on exit d holds eigenvalues (unsorted). If z is non-null its
// columns are rotated along, so passing Q from tridiagonalize (or the
// identity) yields eigenvectors as columns.
void tridiagonal_eigen(std::vector<double>& d, std::vector<double>& e, Matrix* z);

struct EigenResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // one column per value; empty when not requested
};

// Eigenvalues (and optionally eigenvectors) of a symmetric matrix,
// ascending, deterministic sign convention: the first component of each
// vector that rises above 1e-12 of its largest entry is positive.
EigenResult symmetric_eigen(Matrix a, bool want_vectors);

// Generalized problem K v = lambda M v with M positive definite, via the
// Cholesky reduction M = L L^T. Returns the `count` smallest pairs; vectors
// are M-orthonormal with the same sign convention.
EigenResult generalized_symmetric_eigen(const Matrix& k, const Matrix& m, int count,
                                        bool want_vectors = true);

std::vector<double> generalized_symmetric_eigenvalues(const Matrix& k, const Matrix& m,
                                                      int count);

// Group eigenvalues into clusters of near-degenerate values. Two neighbors
// share a cluster when their gap is below rel_tol times the local scale.
std::vector<int> cluster_ids(const std::vector<double>& values, double rel_tol = 1e-8);

// Flip signs in place so the first significant component of each column is
// positive.
void fix_vector_signs(Matrix& vectors);

}  // namespace squeeze
