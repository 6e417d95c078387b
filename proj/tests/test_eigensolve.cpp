#include <doctest.h>

#include <cmath>
#include <vector>

#include "squeeze/eigensolve.hpp"
#include "squeeze/linalg.hpp"
#include "squeeze/reference_kernels.hpp"
#include "squeeze/rng.hpp"

using namespace squeeze;

namespace {

Matrix random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

Matrix random_spd(int n, std::uint64_t seed) {
  Matrix a = random_symmetric(n, seed);
  Matrix s = matmul(transpose(a), a);
  for (int i = 0; i < n; ++i) s(i, i) += n;
  return s;
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("symmetric eigensolver agrees with the Jacobi reference") {
  const int n = 24;
  const Matrix a = random_symmetric(n, 42u);
  const EigenResult fast = symmetric_eigen(a, true);
  const EigenResult slow = reference::jacobi_eigen(a, true);
  REQUIRE(fast.values.size() == static_cast<std::size_t>(n));
  const double scale = frobenius(a);
  for (int i = 0; i < n; ++i) {
    CHECK(fast.values[i] == doctest::Approx(slow.values[i]).epsilon(1e-11));
    // Both solvers fix signs the same way, so columns match directly
    // (all eigenvalues of a random matrix are simple).
    for (int k = 0; k < n; ++k)
      CHECK(fast.vectors(k, i) ==
            doctest::Approx(slow.vectors(k, i)).epsilon(1e-8).scale(1.0));
  }

  // Residual ||A v - lambda v|| stays at solver precision.
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = fast.vectors(k, i);
    const std::vector<double> av = matvec(a, v);
    double res = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = av[k] - fast.values[i] * v[k];
      res += d * d;
    }
    CHECK(std::sqrt(res) <= 1e-12 * scale);
  }
}

TEST_CASE("eigenvalues come back ascending with positive leading entries") {
  const Matrix a = random_symmetric(17, 5u);
  const EigenResult r = symmetric_eigen(a, true);
  for (std::size_t i = 1; i < r.values.size(); ++i)
    CHECK(r.values[i] >= r.values[i - 1]);
  for (std::size_t c = 0; c < r.values.size(); ++c) {
    double peak = 0.0;
    for (std::size_t k = 0; k < r.values.size(); ++k)
      peak = std::max(peak, std::abs(r.vectors(k, c)));
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      const double v = r.vectors(k, c);
      if (std::abs(v) > 1e-12 * peak) {
        CHECK(v > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("generalized eigenpairs satisfy the pencil equation") {
  const int n = 20, count = 7;
  const Matrix k = random_spd(n, 9u);
  const Matrix m = random_spd(n, 13u);
  const EigenResult r = generalized_symmetric_eigen(k, m, count, true);
  REQUIRE(r.values.size() == static_cast<std::size_t>(count));
  REQUIRE(r.vectors.cols() == static_cast<std::size_t>(count));

  const double scale = frobenius(k);
  for (int i = 0; i < count; ++i) {
    std::vector<double> v(n);
    for (int kk = 0; kk < n; ++kk) v[kk] = r.vectors(kk, i);
    const std::vector<double> kv = matvec(k, v);
    const std::vector<double> mv = matvec(m, v);
    double res = 0.0;
    for (int kk = 0; kk < n; ++kk) {
      const double d = kv[kk] - r.values[i] * mv[kk];
      res += d * d;
    }
    CHECK(std::sqrt(res) <= 1e-10 * scale);
  }

  // Columns are M-orthonormal.
  for (int i = 0; i < count; ++i)
    for (int j = 0; j <= i; ++j) {
      std::vector<double> vi(n), vj(n);
      for (int kk = 0; kk < n; ++kk) {
        vi[kk] = r.vectors(kk, i);
        vj[kk] = r.vectors(kk, j);
      }
      const double ip = dot(vi, matvec(m, vj));
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
    }

  const std::vector<double> vals_only = generalized_symmetric_eigenvalues(k, m, count);
  for (int i = 0; i < count; ++i)
    CHECK(vals_only[i] == doctest::Approx(r.values[i]).epsilon(1e-12));
}

TEST_CASE("cluster grouping joins near-degenerate values only") {
  const std::vector<double> vals{0.0, 1.0, 1.0 + 1e-12, 4.0, 4.0, 9.0};
  const std::vector<int> ids = cluster_ids(vals);
  CHECK(ids[0] == 0);
  CHECK(ids[1] == 1);
  CHECK(ids[2] == 1);
  CHECK(ids[3] == 2);
  CHECK(ids[4] == 2);
  CHECK(ids[5] == 3);

  const std::vector<int> separate = cluster_ids({1.0, 2.0, 3.0});
  CHECK(separate == std::vector<int>{0, 1, 2});
}

TEST_CASE("sign fixing is idempotent") {
  Matrix v(3, 2);
  v(0, 0) = -0.6; v(1, 0) = 0.8; v(2, 0) = 0.0;
  v(0, 1) = 0.0;  v(1, 1) = -1e-20; v(2, 1) = -1.0;
  fix_vector_signs(v);
  CHECK(v(0, 0) == doctest::Approx(0.6));
  CHECK(v(1, 0) == doctest::Approx(-0.8));
  // The tiny middle entry is below the significance cut; the third decides.
  CHECK(v(2, 1) == doctest::Approx(1.0));
  Matrix again = v;
  fix_vector_signs(again);
  for (std::size_t i = 0; i < v.data().size(); ++i)
    CHECK(again.data()[i] == v.data()[i]);
}
