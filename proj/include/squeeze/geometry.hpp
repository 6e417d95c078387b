#pragma once

#include <vector>

#include "squeeze/fourier.hpp"
#include "squeeze/linalg.hpp"

namespace squeeze {

using Vec = std::vector<double>;

// The limit manifold is the round sphere of radius r in R^n, so every chart
// quantity below has a closed form. n >= 2, the shell quadrature machinery
// itself is specialized to n = 2 where the sphere is a circle.
struct SphereGeometry {
  int n = 2;
  double r = 1.0;
};

void validate(const SphereGeometry& geom);

// Nearest-point projection phi(x) = r x / |x|. Undefined at the origin.
Vec project(const SphereGeometry& geom, const Vec& x);

// Squeeze map x -> phi(x) + eps (x - phi(x)), eps > 0. Contracts the normal
// offset, fixes the sphere pointwise.
Vec squeeze_map(const SphereGeometry& geom, const Vec& x, double eps);

// Projector onto the normal line at x (outside the origin), xhat xhat^T.
Matrix normal_projector(const SphereGeometry& geom, const Vec& x);

// Projector onto the tangent space, I - xhat xhat^T.
Matrix tangent_projector(const SphereGeometry& geom, const Vec& x);

// Jacobian of the projection, D phi(x) = (r/|x|) (I - xhat xhat^T).
Matrix projection_jacobian(const SphereGeometry& geom, const Vec& x);

// Tangential Jacobian density of phi, (r/|x|)^(n-1). Weights volume
// integrals over the shell so that they collapse to surface integrals.
double density_j0(const SphereGeometry& geom, const Vec& x);

// Correction matrix S0(x) = (|x|/r) (I - xhat xhat^T), the limit of
// D(squeeze inverse) after removing the normal blowup. Satisfies
// S0^T Dphi^T h = h for tangential h.
Matrix s0_matrix(const SphereGeometry& geom, const Vec& x);

// Deterministic orthonormal basis of the tangent space at p.
// Columns of the returned n x (n-1) matrix.
Matrix tangent_basis(const SphereGeometry& geom, const Vec& p);

// Radial offsets of the shell, functions of the angle theta on the circle
// (theta = arc length / r). The shell is
//   { rho xhat(theta) : c(theta) < rho - r < d(theta) },
// and mu = d - c is the fiber length, required positive.
class ThicknessProfile {
 public:
  ThicknessProfile(FourierSeries c, FourierSeries d);
  static ThicknessProfile constant(double c0, double d0);

  double c(double theta) const { return c_(theta); }
  double d(double theta) const { return d_(theta); }
  double mu(double theta) const { return mu_(theta); }

  const FourierSeries& c_series() const { return c_; }
  const FourierSeries& d_series() const { return d_; }
  const FourierSeries& mu_series() const { return mu_; }

  double mu_min() const { return mu_min_; }
  double mu_max() const { return mu_max_; }

 private:
  FourierSeries c_, d_, mu_;
  double mu_min_ = 0.0, mu_max_ = 0.0;
};

}  // namespace squeeze
