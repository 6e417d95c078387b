#pragma once

#include <vector>

#include "squeeze/eigensolve.hpp"
#include "squeeze/geometry.hpp"
#include "squeeze/linalg.hpp"

namespace squeeze {

// Weighted second-order operator on the circle of radius r,
//   A v = -(1/mu) (mu v')'   (derivatives in arc length, periodic),
// realized through its weighted Dirichlet and mass forms
//   a(v1, v2) = integral mu <v1', v2'>,   b(v1, v2) = integral mu v1 v2.
// P1 elements on a uniform grid, weight evaluated at Gauss points, so K and
// M are cyclic tridiagonal; they are stored dense because every consumer is
// desk scale.
struct WeightedOperator {
  SphereGeometry geom;
  int n_nodes = 0;
  std::vector<double> mu_nodes;
  Matrix k;  // stiffness, from a
  Matrix m;  // mass, from b
};

// Assemble on n_nodes uniform nodes. Requires geom.n == 2 and n_nodes >= 3.
WeightedOperator assemble_circle_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom, int n_nodes);

struct SpectralDecomposition {
  std::vector<double> values;    // ascending
  Matrix vectors;                // columns, b-orthonormal (V^T M V = I)
  std::vector<int> clusters;     // near-degeneracy grouping of values
  int n_nodes = 0;
  double r = 0.0;
};

// First `count` eigenpairs of K v = lambda M v.
SpectralDecomposition eigendecompose(const WeightedOperator& op, int count,
                                     bool want_vectors = true);

// Pointwise application of the strong form through conservative central
// differences with midpoint weights. Second order in the grid spacing;
// used as an independent consistency check on the eigenpairs.
std::vector<double> strong_form_apply(const WeightedOperator& op,
                                      const std::vector<double>& u);

}  // namespace squeeze
