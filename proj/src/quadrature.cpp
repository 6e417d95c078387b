#include "squeeze/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "squeeze/fourier.hpp"
#include "squeeze/parallel.hpp"

namespace squeeze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 4-point Gauss-Legendre on [0, 1].
constexpr double kGl4Node[4] = {0.06943184420297371, 0.33000947820757187,
                                0.6699905217924281, 0.9305681557970263};
constexpr double kGl4Weight[4] = {0.1739274225687269, 0.3260725774312731,
                                  0.3260725774312731, 0.1739274225687269};

void require_circle(const SphereGeometry& geom, const char* who) {
  validate(geom);
  if (geom.n != 2)
    throw std::invalid_argument(std::string(who) + ": shell quadrature requires n == 2");
}

void require_grid(int n_theta, int n_radial, const char* who) {
  if (n_theta < 3 || n_radial < 1)
    throw std::invalid_argument(std::string(who) + ": grid too small");
}

}  // namespace

double shell_weighted_integral(const SphereGeometry& geom, const ThicknessProfile& profile,
                               const AmbientFunction& g, int n_theta, int n_radial) {
  require_circle(geom, "shell_weighted_integral");
  require_grid(n_theta, n_radial, "shell_weighted_integral");
  const double dtheta = kTwoPi / n_theta;
  const std::size_t total = static_cast<std::size_t>(n_theta) * n_radial * 4;
  // Flattened index -> (angle node, radial cell, Gauss point). The chunked
  // summation keeps the result independent of the worker count.
  return deterministic_sum(total, [&](std::size_t idx) {
    const int q = static_cast<int>(idx % 4);
    const int cell = static_cast<int>((idx / 4) % n_radial);
    const int i = static_cast<int>(idx / (4 * n_radial));
    const double theta = dtheta * i;
    const double lo = geom.r + profile.c(theta);
    const double len = profile.mu(theta) / n_radial;
    const double rho = lo + (cell + kGl4Node[q]) * len;
    const Vec x{rho * std::cos(theta), rho * std::sin(theta)};
    // Polar volume element rho drho dtheta, weight J0 evaluated in ambient
    // coordinates rather than simplified.
    return dtheta * len * kGl4Weight[q] * density_j0(geom, x) * g(x) * rho;
  });
}

double coarea_fiber_integral(const SphereGeometry& geom, const ThicknessProfile& profile,
                             const AmbientFunction& g, int n_theta, int n_radial) {
  require_circle(geom, "coarea_fiber_integral");
  require_grid(n_theta, n_radial, "coarea_fiber_integral");
  const double dtheta = kTwoPi / n_theta;
  const std::size_t total = static_cast<std::size_t>(n_theta) * n_radial * 4;
  return deterministic_sum(total, [&](std::size_t idx) {
    const int q = static_cast<int>(idx % 4);
    const int cell = static_cast<int>((idx / 4) % n_radial);
    const int i = static_cast<int>(idx / (4 * n_radial));
    const double theta = dtheta * i;
    const double lo = geom.r + profile.c(theta);
    const double len = profile.mu(theta) / n_radial;
    const double rho = lo + (cell + kGl4Node[q]) * len;
    const Vec x{rho * std::cos(theta), rho * std::sin(theta)};
    // Plain line measure along the fiber, then the surface measure r dtheta.
    return geom.r * dtheta * len * kGl4Weight[q] * g(x);
  });
}

CoareaReport coarea_check(const SphereGeometry& geom, const ThicknessProfile& profile,
                          const AmbientFunction& g, int n_theta, int n_radial) {
  CoareaReport rep;
  rep.volume_route = shell_weighted_integral(geom, profile, g, n_theta, n_radial);
  rep.fiber_route = coarea_fiber_integral(geom, profile, g, n_theta, n_radial);
  rep.abs_diff = std::abs(rep.volume_route - rep.fiber_route);
  return rep;
}

LiftedField lift(const std::vector<double>& v, const SphereGeometry& geom,
                 const ThicknessProfile& profile, int n_radial) {
  require_circle(geom, "lift");
  const int n_theta = static_cast<int>(v.size());
  require_grid(n_theta, n_radial, "lift");
  (void)profile;  // the lift itself only copies values along the fibers
  LiftedField u;
  u.n_theta = n_theta;
  u.n_radial = n_radial;
  u.circle_values = v;
  u.values = Matrix(n_radial + 1, n_theta);
  for (int j = 0; j <= n_radial; ++j)
    for (int i = 0; i < n_theta; ++i) u.values(j, i) = v[i];
  return u;
}

double form_b_mu(const SphereGeometry& geom, const ThicknessProfile& profile,
                 const std::vector<double>& v) {
  require_circle(geom, "form_b_mu");
  const int n = static_cast<int>(v.size());
  if (n < 3) throw std::invalid_argument("form_b_mu: need at least 3 samples");
  const double dtheta = kTwoPi / n;
  return deterministic_sum(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double theta = dtheta * i;
    return geom.r * dtheta * profile.mu(theta) * v[i] * v[i];
  });
}

double form_a_mu(const SphereGeometry& geom, const ThicknessProfile& profile,
                 const std::vector<double>& v) {
  require_circle(geom, "form_a_mu");
  const int n = static_cast<int>(v.size());
  if (n < 3) throw std::invalid_argument("form_a_mu: need at least 3 samples");
  const std::vector<double> dv = spectral_derivative(v);  // d/dtheta
  const double dtheta = kTwoPi / n;
  return deterministic_sum(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double theta = dtheta * i;
    const double ds = dv[i] / geom.r;  // arc-length derivative
    return geom.r * dtheta * profile.mu(theta) * ds * ds;
  });
}

double form_b0_shell(const SphereGeometry& geom, const ThicknessProfile& profile,
                     const LiftedField& u) {
  require_circle(geom, "form_b0_shell");
  const int n_theta = u.n_theta, n_radial = u.n_radial;
  const double dtheta = kTwoPi / n_theta;
  const std::size_t total = static_cast<std::size_t>(n_theta) * n_radial * 4;
  return deterministic_sum(total, [&](std::size_t idx) {
    const int q = static_cast<int>(idx % 4);
    const int cell = static_cast<int>((idx / 4) % n_radial);
    const int i = static_cast<int>(idx / (4 * n_radial));
    const double theta = dtheta * i;
    const double lo = geom.r + profile.c(theta);
    const double len = profile.mu(theta) / n_radial;
    const double t = kGl4Node[q];
    const double rho = lo + (cell + t) * len;
    const Vec x{rho * std::cos(theta), rho * std::sin(theta)};
    // Linear interpolation across the fiber; constant for a lifted field.
    const double uq = (1.0 - t) * u.values(cell, i) + t * u.values(cell + 1, i);
    return dtheta * len * kGl4Weight[q] * density_j0(geom, x) * uq * uq * rho;
  });
}

double form_a0_shell(const SphereGeometry& geom, const ThicknessProfile& profile,
                     const LiftedField& u) {
  require_circle(geom, "form_a0_shell");
  const int n_theta = u.n_theta, n_radial = u.n_radial;
  const double dtheta = kTwoPi / n_theta;
  const std::vector<double> dv = spectral_derivative(u.circle_values);
  const std::size_t total = static_cast<std::size_t>(n_theta) * n_radial * 4;
  return deterministic_sum(total, [&](std::size_t idx) {
    const int q = static_cast<int>(idx % 4);
    const int cell = static_cast<int>((idx / 4) % n_radial);
    const int i = static_cast<int>(idx / (4 * n_radial));
    const double theta = dtheta * i;
    const double lo = geom.r + profile.c(theta);
    const double len = profile.mu(theta) / n_radial;
    const double rho = lo + (cell + kGl4Node[q]) * len;
    const Vec x{rho * std::cos(theta), rho * std::sin(theta)};

    // Surface gradient of v at the foot point, as an ambient vector.
    const Vec p = project(geom, x);
    const Matrix frame = tangent_basis(geom, p);
    const double dv_ds = dv[i] / geom.r;
    Vec grad_v(2);
    for (int a = 0; a < 2; ++a) grad_v[a] = frame(a, 0) * dv_ds;

    // grad u = Dphi^T grad_v, then the corrected gradient S0^T grad u.
    const Matrix dphi = projection_jacobian(geom, x);
    const Matrix s0 = s0_matrix(geom, x);
    Vec grad_u(2, 0.0), w(2, 0.0);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) grad_u[a] += dphi(b, a) * grad_v[b];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) w[a] += s0(b, a) * grad_u[b];

    const double dens = w[0] * w[0] + w[1] * w[1];
    return dtheta * len * kGl4Weight[q] * density_j0(geom, x) * dens * rho;
  });
}

}  // namespace squeeze
