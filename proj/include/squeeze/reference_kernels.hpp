#pragma once

#include <vector>

#include "squeeze/eigensolve.hpp"
#include "squeeze/geometry.hpp"
#include "squeeze/linalg.hpp"
#include "squeeze/quadrature.hpp"
#include "squeeze/spectral.hpp"
#include "squeeze/thin_domain.hpp"

// Serial baselines for the parallel kernels, plus two independently derived
// formulations. The assembly twins repeat the element arithmetic of the
// production code in straight loops, so their output must match bitwise;
// the polar annulus and the Jacobi solver take a different route entirely
// and agree only up to round-off, which is what makes them oracles.
namespace squeeze::reference {

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

WeightedOperator assemble_circle_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom,
                                          int n_nodes);

ThinDomainOperator assemble_thin_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom,
                                          double eps, int n_theta, int n_s);

// Annulus r + c0 <= rho <= r + d0 assembled directly in polar coordinates,
// no pullback. Node layout matches assemble_thin_operator at eps = 1 with a
// constant profile, so the matrices agree up to round-off.
ThinDomainOperator assemble_polar_annulus(const SphereGeometry& geom,
                                          double c0, double d0,
                                          int n_theta, int n_s);

double shell_weighted_integral(const SphereGeometry& geom,
                               const ThicknessProfile& profile,
                               const AmbientFunction& g, int n_theta,
                               int n_radial);

// Cyclic Jacobi iteration: slow, simple, and with no code shared with the
// Householder+QL path.
EigenResult jacobi_eigen(Matrix a, bool want_vectors);

}  // namespace squeeze::reference
