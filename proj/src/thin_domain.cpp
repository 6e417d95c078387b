#include "squeeze/thin_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "squeeze/eigensolve.hpp"
#include "squeeze/parallel.hpp"
#include "squeeze/spectral.hpp"

namespace squeeze {

namespace {

constexpr double kGaussNode = 0.28867513459481287;  // 1 / (2 sqrt(3))

struct CellBlock {
  double k[16];
  double m[16];
};

SparseMatrix csr_from_rows(const std::vector<std::map<int, double>>& rows) {
  SparseMatrix s;
  s.n = static_cast<int>(rows.size());
  s.row_ptr.resize(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    s.row_ptr[i + 1] = s.row_ptr[i] + static_cast<int>(rows[i].size());
  s.cols.reserve(s.row_ptr.back());
  s.vals.reserve(s.row_ptr.back());
  for (const auto& row : rows) {
    for (const auto& [col, val] : row) {
      s.cols.push_back(col);
      s.vals.push_back(val);
    }
  }
  return s;
}

}  // namespace

ThinDomainOperator assemble_thin_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom,
                                          double eps, int n_theta, int n_s) {
  validate(geom);
  if (geom.n != 2)
    throw std::invalid_argument("shell elements are defined on the circle (n == 2)");
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (n_theta < 3) throw std::invalid_argument("need at least 3 angular cells");
  if (n_s < 1) throw std::invalid_argument("need at least 1 transverse cell");

  // The inner boundary r + eps c(theta) must stay away from the origin,
  // otherwise the radial chart folds.
  {
    const int probes = 4096;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < probes; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / probes;
      lo = std::min(lo, geom.r + eps * profile.c(theta));
    }
    if (lo <= 0.0)
      throw std::invalid_argument("shell folds through the origin: r + eps c(theta) <= 0");
  }

  ThinDomainOperator op;
  op.geom = geom;
  op.eps = eps;
  op.n_theta = n_theta;
  op.n_s = n_s;

  const double dtheta = 2.0 * std::numbers::pi / n_theta;
  const double dts = 1.0 / n_s;
  const int n_cells = n_theta * n_s;

  const FourierSeries cp = profile.c_series().derivative();
  const FourierSeries mup = profile.mu_series().derivative();

  // Local corner order: (di, dj) = (0,0), (1,0), (0,1), (1,1).
  static const int kDi[4] = {0, 1, 0, 1};
  static const int kDj[4] = {0, 0, 1, 1};

  std::vector<CellBlock> blocks(n_cells);
  parallel_for(n_cells, [&](int cell) {
    const int ci = cell / n_s;
    const int cj = cell % n_s;
    const double theta0 = ci * dtheta;
    const double t0 = cj * dts;

    CellBlock blk{};
    const double q[2] = {0.5 - kGaussNode, 0.5 + kGaussNode};
    for (int qx = 0; qx < 2; ++qx) {
      for (int qt = 0; qt < 2; ++qt) {
        const double xi = q[qx];
        const double tau = q[qt];
        const double theta = theta0 + xi * dtheta;
        const double t = t0 + tau * dts;

        const double c = profile.c(theta);
        const double mu = profile.mu(theta);
        const double sig = cp(theta) + t * mup(theta);
        const double rho = geom.r + eps * (c + t * mu);

        const double gtt = mu / rho;
        const double gtx = -sig / rho;
        const double gxx = (eps * eps * sig * sig + rho * rho) / (rho * eps * eps * mu);
        const double mcoef = rho * mu;

        // Shape functions and derivatives on the unit square.
        const double nv[4] = {(1.0 - xi) * (1.0 - tau), xi * (1.0 - tau),
                              (1.0 - xi) * tau, xi * tau};
        const double nxi[4] = {-(1.0 - tau), (1.0 - tau), -tau, tau};
        const double ntau[4] = {-(1.0 - xi), -xi, (1.0 - xi), xi};

        const double wq = 0.25 * dtheta * dts;
        for (int a = 0; a < 4; ++a) {
          const double da_th = nxi[a] / dtheta;
          const double da_t = ntau[a] / dts;
          for (int b = 0; b < 4; ++b) {
            const double db_th = nxi[b] / dtheta;
            const double db_t = ntau[b] / dts;
            blk.k[4 * a + b] += wq * (da_th * db_th * gtt +
                                      (da_th * db_t + da_t * db_th) * gtx +
                                      da_t * db_t * gxx);
            blk.m[4 * a + b] += wq * mcoef * nv[a] * nv[b];
          }
        }
      }
    }
    blocks[cell] = blk;
  });

  // Scatter serially in cell order so accumulation is independent of the
  // worker count.
  const int nn = op.n_nodes();
  std::vector<std::map<int, double>> krows(nn), mrows(nn);
  for (int cell = 0; cell < n_cells; ++cell) {
    const int ci = cell / n_s;
    const int cj = cell % n_s;
    int g[4];
    for (int a = 0; a < 4; ++a) g[a] = op.node(ci + kDi[a], cj + kDj[a]);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        krows[g[a]][g[b]] += blocks[cell].k[4 * a + b];
        mrows[g[a]][g[b]] += blocks[cell].m[4 * a + b];
      }
    }
  }
  op.stiffness = csr_from_rows(krows);
  op.mass = csr_from_rows(mrows);
  return op;
}

EigenResult thin_eigen(const ThinDomainOperator& op, int count,
                       bool want_vectors) {
  if (count < 1 || count > op.n_nodes())
    throw std::invalid_argument("eigenpair count out of range");
  if (want_vectors)
    return generalized_symmetric_eigen(op.stiffness.dense(), op.mass.dense(), count, true);
  EigenResult res;
  res.values = generalized_symmetric_eigenvalues(op.stiffness.dense(),
                                                 op.mass.dense(), count);
  return res;
}

std::vector<double> transverse_average(const ThinDomainOperator& op,
                                       const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != op.n_nodes())
    throw std::invalid_argument("nodal vector size mismatch");
  const int rows = op.n_s + 1;
  std::vector<double> avg(op.n_theta, 0.0);
  parallel_for(op.n_theta, [&](int i) {
    const double* col = u.data() + i * rows;
    double acc = 0.5 * (col[0] + col[rows - 1]);
    for (int j = 1; j < rows - 1; ++j) acc += col[j];
    avg[i] = acc / op.n_s;
  });
  return avg;
}

std::vector<ConvergenceRow> convergence_study(const ThicknessProfile& profile,
                                              const SphereGeometry& geom,
                                              const std::vector<double>& eps_list,
                                              int count, int n_theta, int n_s,
                                              int limit_nodes) {
  if (eps_list.empty()) throw std::invalid_argument("empty thickness sweep");
  if (count < 1) throw std::invalid_argument("eigenvalue count must be positive");

  const WeightedOperator limit_op =
      assemble_circle_operator(profile, geom, limit_nodes);
  const SpectralDecomposition limit = eigendecompose(limit_op, count, false);

  std::vector<ConvergenceRow> rows;
  rows.reserve(eps_list.size() * count);
  for (double eps : eps_list) {
    const ThinDomainOperator op =
        assemble_thin_operator(profile, geom, eps, n_theta, n_s);
    const EigenResult res = thin_eigen(op, count, false);
    for (int j = 0; j < count; ++j) {
      ConvergenceRow row;
      row.eps = eps;
      row.j = j + 1;
      row.lambda_eps = res.values[j];
      row.lambda_limit = limit.values[j];
      row.rel_err = std::abs(row.lambda_eps - row.lambda_limit) /
                    std::max(std::abs(row.lambda_limit), 1.0);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TrajectorySample> simulate(const ThinDomainOperator& op,
                                       const std::function<double(double)>& g,
                                       const std::vector<double>& u0,
                                       double dt, double t_end, int stride) {
  const int nn = op.n_nodes();
  if (static_cast<int>(u0.size()) != nn)
    throw std::invalid_argument("initial state size mismatch");
  if (dt <= 0.0 || t_end <= 0.0) throw std::invalid_argument("need dt > 0, t_end > 0");
  if (stride < 1) stride = 1;

  // One factorization of M + dt K serves every step.
  Matrix lhs = op.mass.dense();
  {
    const Matrix kd = op.stiffness.dense();
    parallel_for(nn, [&](int i) {
      double* li = lhs.row(i);
      const double* ki = kd.row(i);
      for (int j = 0; j < nn; ++j) li[j] += dt * ki[j];
    });
  }
  cholesky_factor(lhs);

  const int n_steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  std::vector<double> u = u0;
  std::vector<TrajectorySample> out;
  out.reserve(n_steps / stride + 2);

  auto record = [&](double t) {
    TrajectorySample s;
    s.t = t;
    const std::vector<double> mu_vec = op.mass.apply(u);
    s.norm = std::sqrt(std::max(0.0, dot(u, mu_vec)));
    s.min = *std::min_element(u.begin(), u.end());
    s.max = *std::max_element(u.begin(), u.end());
    out.push_back(s);
  };

  record(0.0);
  std::vector<double> work(nn);
  for (int step = 1; step <= n_steps; ++step) {
    parallel_for(nn, [&](int i) { work[i] = u[i] + dt * g(u[i]); });
    std::vector<double> rhs = op.mass.apply(work);
    forward_subst(lhs, rhs);
    backward_subst_transposed(lhs, rhs);
    u = rhs;
    for (double v : u)
      if (!std::isfinite(v))
        throw std::runtime_error("time step diverged; reduce dt");
    if (step % stride == 0 || step == n_steps) record(step * dt);
  }
  return out;
}

}  // namespace squeeze
