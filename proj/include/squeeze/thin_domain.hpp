#pragma once

#include <functional>
#include <vector>

#include "squeeze/eigensolve.hpp"
#include "squeeze/geometry.hpp"
#include "squeeze/linalg.hpp"

namespace squeeze {

// Bilinear finite element discretization of the shell of thickness eps
// around the circle, pulled back to the fixed logical domain
// (theta, t) in [0, 2pi) x [0, 1] through
//   x(theta, t) = rho(theta, t) (cos theta, sin theta),
//   rho = r + eps (c(theta) + t mu(theta)).
// Both forms carry the 1/eps volume normalization, so eigenvalues are
// unchanged and eigenvectors keep an eps-uniform mass normalization.
struct ThinDomainOperator {
  SphereGeometry geom;
  double eps = 0.0;
  int n_theta = 0;  // angular cells (periodic)
  int n_s = 0;      // transverse cells
  SparseMatrix stiffness;
  SparseMatrix mass;

  int n_nodes() const { return n_theta * (n_s + 1); }
  // Nodes are indexed angle-major; the angular index wraps.
  int node(int i, int j) const { return (i % n_theta) * (n_s + 1) + j; }
};

// Assembles the pulled-back forms with a 2x2 Gauss rule per cell.
// Requires geom.n == 2, eps > 0, n_theta >= 3, n_s >= 1.
ThinDomainOperator assemble_thin_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom,
                                          double eps, int n_theta, int n_s);

// Leading spectrum of the generalized problem K v = lambda M v.
// Vectors, when requested, are M-orthonormal nodal columns.
EigenResult thin_eigen(const ThinDomainOperator& op, int count,
                       bool want_vectors);

// Fiberwise mean over the transverse direction (trapezoid in t),
// one value per angular grid line.
std::vector<double> transverse_average(const ThinDomainOperator& op,
                                       const std::vector<double>& u);

struct ConvergenceRow {
  double eps = 0.0;
  int j = 0;  // 1-based eigenvalue index
  double lambda_eps = 0.0;
  double lambda_limit = 0.0;
  double rel_err = 0.0;  // |diff| / max(lambda_limit, 1)
};

// Eigenvalues of the shell operator across a thickness sweep against the
// limit circle operator. The limit side is discretized at limit_nodes
// (pass n_theta to cancel the shared angular truncation error).
std::vector<ConvergenceRow> convergence_study(const ThicknessProfile& profile,
                                              const SphereGeometry& geom,
                                              const std::vector<double>& eps_list,
                                              int count, int n_theta, int n_s,
                                              int limit_nodes);

struct TrajectorySample {
  double t = 0.0;
  double norm = 0.0;  // mass-weighted L2 norm
  double min = 0.0;
  double max = 0.0;
};

// Semi-implicit Euler for u_t = -A u + g(u): the linear part is implicit,
// the reaction explicit, with one Cholesky factorization of M + dt K
// reused across steps. Samples every `stride` steps (and the final state).
std::vector<TrajectorySample> simulate(const ThinDomainOperator& op,
                                       const std::function<double(double)>& g,
                                       const std::vector<double>& u0,
                                       double dt, double t_end, int stride);

}  // namespace squeeze
