#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "squeeze/reference_kernels.hpp"
#include "squeeze/spectral.hpp"

using namespace squeeze;

namespace {

constexpr double kPi = std::numbers::pi;

// Symmetric profile c = -f/2, d = +f/2 so the fiber length equals f.
ThicknessProfile profile_from_mu(const std::function<double(double)>& f, int modes) {
  const FourierSeries mu = FourierSeries::fit(f, modes);
  std::vector<double> half = mu.interleaved();
  std::vector<double> neg_half = half;
  for (double& v : half) v *= 0.5;
  for (double& v : neg_half) v *= -0.5;
  return ThicknessProfile(FourierSeries::from_interleaved(neg_half),
                          FourierSeries::from_interleaved(half));
}

double band_error(double r, int n_nodes, int nu) {
  const ThicknessProfile prof = ThicknessProfile::constant(-0.5, 0.5);
  const SphereGeometry geom{2, r};
  const WeightedOperator op = assemble_circle_operator(prof, geom, n_nodes);
  const SpectralDecomposition dec = eigendecompose(op, 2 * nu + 1, false);
  const double exact = double(nu) * double(nu) / (r * r);
  return std::abs(dec.values[2 * nu - 1] - exact);
}

}  // namespace

TEST_CASE("constant weight circle spectrum is nu squared over r squared") {
  const double r = 2.0;
  const ThicknessProfile prof = ThicknessProfile::constant(-0.5, 0.5);
  const SphereGeometry geom{2, r};
  // 512 nodes keep the P1 dispersion of band 5 under the 1e-3 budget.
  const WeightedOperator op = assemble_circle_operator(prof, geom, 512);
  const SpectralDecomposition dec = eigendecompose(op, 11, true);

  CHECK(std::abs(dec.values[0]) <= 1e-10);
  for (int nu = 1; nu <= 5; ++nu) {
    const double exact = double(nu) * double(nu) / (r * r);
    // Bands come in pairs.
    CHECK(dec.values[2 * nu - 1] == doctest::Approx(exact).epsilon(1e-3));
    CHECK(dec.values[2 * nu] == doctest::Approx(exact).epsilon(1e-3));
    CHECK(dec.clusters[2 * nu - 1] == dec.clusters[2 * nu]);
    CHECK(dec.clusters[2 * nu - 1] != dec.clusters[2 * nu - 2]);
  }
}

TEST_CASE("discrete eigenvalue error decreases at second order") {
  const double e64 = band_error(1.0, 64, 3);
  const double e128 = band_error(1.0, 128, 3);
  const double e256 = band_error(1.0, 256, 3);
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e128 / e256 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("eigenvectors are mass orthonormal") {
  const ThicknessProfile prof = profile_from_mu(
      [](double th) { return std::exp(0.05 * std::sin(th)); }, 16);
  const SphereGeometry geom{2, 1.0};
  const WeightedOperator op = assemble_circle_operator(prof, geom, 128);
  const SpectralDecomposition dec = eigendecompose(op, 9, true);
  const int n = op.n_nodes;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j <= i; ++j) {
      std::vector<double> vi(n), vj(n);
      for (int k = 0; k < n; ++k) {
        vi[k] = dec.vectors(k, i);
        vj[k] = dec.vectors(k, j);
      }
      const double ip = dot(vi, matvec(op.m, vj));
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("strong form application matches the analytic operator") {
  // For u = sin(3 theta) and weight w = e^{0.05 sin theta} on the unit
  // circle, -(1/w)(w u')' = 9 sin(3 theta) - 0.15 cos(theta) cos(3 theta).
  const ThicknessProfile prof = profile_from_mu(
      [](double th) { return std::exp(0.05 * std::sin(th)); }, 16);
  const SphereGeometry geom{2, 1.0};

  double prev_err = 0.0;
  for (const int n : {128, 256}) {
    const WeightedOperator op = assemble_circle_operator(prof, geom, n);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = std::sin(3.0 * (2.0 * kPi * i / n));
    const std::vector<double> au = strong_form_apply(op, u);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * kPi * i / n;
      const double exact =
          9.0 * std::sin(3.0 * th) - 0.15 * std::cos(th) * std::cos(3.0 * th);
      err = std::max(err, std::abs(au[i] - exact));
    }
    if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.25));
    prev_err = err;
  }
  CHECK(prev_err <= 2e-2);
}

TEST_CASE("strong form is consistent with the weak eigenpairs") {
  const ThicknessProfile prof = profile_from_mu(
      [](double th) { return std::exp(0.05 * std::sin(th)); }, 16);
  const SphereGeometry geom{2, 1.0};
  const WeightedOperator op = assemble_circle_operator(prof, geom, 512);
  const SpectralDecomposition dec = eigendecompose(op, 5, true);
  const int n = op.n_nodes;
  // A v ~ lambda v pointwise for a smooth low eigenvector, up to O(h^2).
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = dec.vectors(k, 3);
  const std::vector<double> av = strong_form_apply(op, v);
  double err = 0.0, scale = 0.0;
  for (int k = 0; k < n; ++k) {
    err = std::max(err, std::abs(av[k] - dec.values[3] * v[k]));
    scale = std::max(scale, std::abs(dec.values[3] * v[k]));
  }
  CHECK(err <= 2e-3 * scale);
}

TEST_CASE("serial assembly twin is bitwise identical") {
  const ThicknessProfile prof = profile_from_mu(
      [](double th) { return 1.0 + 0.1 * std::cos(th); }, 4);
  const SphereGeometry geom{2, 1.5};
  const WeightedOperator a = assemble_circle_operator(prof, geom, 96);
  const WeightedOperator b = reference::assemble_circle_operator(prof, geom, 96);
  REQUIRE(a.k.data().size() == b.k.data().size());
  for (std::size_t i = 0; i < a.k.data().size(); ++i) {
    CHECK(a.k.data()[i] == b.k.data()[i]);
    CHECK(a.m.data()[i] == b.m.data()[i]);
  }
}
