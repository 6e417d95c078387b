#pragma once

#include <functional>
#include <vector>

#include "squeeze/geometry.hpp"
#include "squeeze/linalg.hpp"

namespace squeeze {

// Quadrature over the planar shell around the circle of radius r (n == 2):
// uniform angular grid (periodic trapezoid, spectrally accurate for smooth
// integrands) times 4-point Gauss-Legendre per radial cell.

using AmbientFunction = std::function<double(const Vec&)>;

// Volume route: integral over the shell of J0(x) g(x) dx.
double shell_weighted_integral(const SphereGeometry& geom, const ThicknessProfile& profile,
                               const AmbientFunction& g, int n_theta, int n_radial);

// Fiber route: integral over the circle of the plain line integrals of g
// along the radial fibers. The two routes agree by the coarea identity.
double coarea_fiber_integral(const SphereGeometry& geom, const ThicknessProfile& profile,
                             const AmbientFunction& g, int n_theta, int n_radial);

struct CoareaReport {
  double volume_route = 0.0;
  double fiber_route = 0.0;
  double abs_diff = 0.0;
};

CoareaReport coarea_check(const SphereGeometry& geom, const ThicknessProfile& profile,
                          const AmbientFunction& g, int n_theta, int n_radial);

// A circle function carried to the shell, constant along the radial fibers.
// Nodes are the tensor grid theta_i x t_j, t in [0, 1] across the fiber.
struct LiftedField {
  int n_theta = 0;
  int n_radial = 0;                    // radial cells
  std::vector<double> circle_values;   // size n_theta
  Matrix values;                       // (n_radial + 1) rows x n_theta cols, nodal
};

LiftedField lift(const std::vector<double>& v, const SphereGeometry& geom,
                 const ThicknessProfile& profile, int n_radial);

// Weighted circle forms of a grid function (uniform nodes, trapezoid rule).
// The a-form differentiates through the discrete Fourier interpolant.
double form_b_mu(const SphereGeometry& geom, const ThicknessProfile& profile,
                 const std::vector<double>& v);
double form_a_mu(const SphereGeometry& geom, const ThicknessProfile& profile,
                 const std::vector<double>& v);

// Shell forms of a lifted field, evaluated through the ambient geometry:
//   b0(u, u) = integral J0 u^2 dx
//   a0(u, u) = integral J0 <S0^T grad u, S0^T grad u> dx
// with grad u = Dphi^T (surface gradient of v) pushed to the quadrature
// point. The matrix algebra runs in ambient coordinates on purpose; the two
// routes to b/a share nothing past the angular grid, which is what makes
// agreement with form_b_mu / form_a_mu an actual check.
double form_b0_shell(const SphereGeometry& geom, const ThicknessProfile& profile,
                     const LiftedField& u);
double form_a0_shell(const SphereGeometry& geom, const ThicknessProfile& profile,
                     const LiftedField& u);

}  // namespace squeeze
