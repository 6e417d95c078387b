#include "squeeze/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "squeeze/parallel.hpp"

namespace squeeze {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// 2-point Gauss rule on [0, 1].
constexpr double kGaussNode = 0.28867513459481287;  // 1/(2 sqrt(3))
}  // namespace

WeightedOperator assemble_circle_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom, int n_nodes) {
  validate(geom);
  if (geom.n != 2)
    throw std::invalid_argument("assemble_circle_operator: circle limit requires n == 2");
  if (n_nodes < 3)
    throw std::invalid_argument("assemble_circle_operator: need at least 3 nodes");

  WeightedOperator op;
  op.geom = geom;
  op.n_nodes = n_nodes;
  op.mu_nodes.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) op.mu_nodes[i] = profile.mu(kTwoPi * i / n_nodes);

  const double hs = kTwoPi * geom.r / n_nodes;  // element length in arc length
  const double dtheta = kTwoPi / n_nodes;

  // Per-element 2x2 contributions, elements independent. The scatter below
  // runs serially in element order, so the assembled matrices are identical
  // for every worker count.
  std::vector<double> ek(n_nodes), em00(n_nodes), em01(n_nodes), em11(n_nodes);
  const FourierSeries& mu = profile.mu_series();
  parallel_for(static_cast<std::size_t>(n_nodes), [&](std::size_t i) {
    const double t0 = 0.5 - kGaussNode, t1 = 0.5 + kGaussNode;
    const double th0 = dtheta * (i + t0), th1 = dtheta * (i + t1);
    const double mu0 = mu(th0), mu1 = mu(th1);
    // a-form: integral of mu (phi_a)'(phi_b)' over the element.
    ek[i] = 0.5 * (mu0 + mu1) / hs;
    // b-form: integral of mu phi_a phi_b, Gauss weights 1/2 each.
    em00[i] = 0.5 * hs * (mu0 * (1 - t0) * (1 - t0) + mu1 * (1 - t1) * (1 - t1));
    em01[i] = 0.5 * hs * (mu0 * (1 - t0) * t0 + mu1 * (1 - t1) * t1);
    em11[i] = 0.5 * hs * (mu0 * t0 * t0 + mu1 * t1 * t1);
  });

  op.k = Matrix(n_nodes, n_nodes, 0.0);
  op.m = Matrix(n_nodes, n_nodes, 0.0);
  for (int i = 0; i < n_nodes; ++i) {
    const int a = i, b = (i + 1) % n_nodes;
    op.k(a, a) += ek[i];
    op.k(b, b) += ek[i];
    op.k(a, b) -= ek[i];
    op.k(b, a) -= ek[i];
    op.m(a, a) += em00[i];
    op.m(b, b) += em11[i];
    op.m(a, b) += em01[i];
    op.m(b, a) += em01[i];
  }
  return op;
}

SpectralDecomposition eigendecompose(const WeightedOperator& op, int count,
                                     bool want_vectors) {
  if (count <= 0 || count > op.n_nodes)
    throw std::invalid_argument("eigendecompose: count must lie in [1, n_nodes]");
  EigenResult eig = generalized_symmetric_eigen(op.k, op.m, count, want_vectors);
  SpectralDecomposition dec;
  dec.values = std::move(eig.values);
  dec.vectors = std::move(eig.vectors);
  dec.clusters = cluster_ids(dec.values);
  dec.n_nodes = op.n_nodes;
  dec.r = op.geom.r;
  return dec;
}

std::vector<double> strong_form_apply(const WeightedOperator& op,
                                      const std::vector<double>& u) {
  const int n = op.n_nodes;
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("strong_form_apply: grid size mismatch");
  const double hs = kTwoPi * op.geom.r / n;
  std::vector<double> out(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const int im = (static_cast<int>(i) + n - 1) % n;
    const int ip = (static_cast<int>(i) + 1) % n;
    const double mu_m = 0.5 * (op.mu_nodes[im] + op.mu_nodes[i]);
    const double mu_p = 0.5 * (op.mu_nodes[i] + op.mu_nodes[ip]);
    const double flux_p = mu_p * (u[ip] - u[i]) / hs;
    const double flux_m = mu_m * (u[i] - u[im]) / hs;
    out[i] = -(flux_p - flux_m) / (hs * op.mu_nodes[i]);
  });
  return out;
}

}  // namespace squeeze
