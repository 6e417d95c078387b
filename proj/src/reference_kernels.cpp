#include "squeeze/reference_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace squeeze::reference {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGaussNode = 0.28867513459481287;  // 1/(2 sqrt(3))

constexpr double kGl4Node[4] = {0.06943184420297371, 0.33000947820757187,
                                0.6699905217924281, 0.9305681557970263};
constexpr double kGl4Weight[4] = {0.1739274225687269, 0.3260725774312731,
                                  0.3260725774312731, 0.1739274225687269};

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

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

WeightedOperator assemble_circle_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom,
                                          int n_nodes) {
  validate(geom);
  if (geom.n != 2 || n_nodes < 3)
    throw std::invalid_argument("reference circle assembly: bad arguments");

  WeightedOperator op;
  op.geom = geom;
  op.n_nodes = n_nodes;
  op.mu_nodes.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) op.mu_nodes[i] = profile.mu(kTwoPi * i / n_nodes);

  const double hs = kTwoPi * geom.r / n_nodes;
  const double dtheta = kTwoPi / n_nodes;
  const FourierSeries& mu = profile.mu_series();

  op.k = Matrix(n_nodes, n_nodes, 0.0);
  op.m = Matrix(n_nodes, n_nodes, 0.0);
  for (int i = 0; i < n_nodes; ++i) {
    const double t0 = 0.5 - kGaussNode, t1 = 0.5 + kGaussNode;
    const double th0 = dtheta * (i + t0), th1 = dtheta * (i + t1);
    const double mu0 = mu(th0), mu1 = mu(th1);
    const double ek = 0.5 * (mu0 + mu1) / hs;
    const double em00 = 0.5 * hs * (mu0 * (1 - t0) * (1 - t0) + mu1 * (1 - t1) * (1 - t1));
    const double em01 = 0.5 * hs * (mu0 * (1 - t0) * t0 + mu1 * (1 - t1) * t1);
    const double em11 = 0.5 * hs * (mu0 * t0 * t0 + mu1 * t1 * t1);
    const int a = i, b = (i + 1) % n_nodes;
    op.k(a, a) += ek;
    op.k(b, b) += ek;
    op.k(a, b) -= ek;
    op.k(b, a) -= ek;
    op.m(a, a) += em00;
    op.m(b, b) += em11;
    op.m(a, b) += em01;
    op.m(b, a) += em01;
  }
  return op;
}

ThinDomainOperator assemble_thin_operator(const ThicknessProfile& profile,
                                          const SphereGeometry& geom,
                                          double eps, int n_theta, int n_s) {
  validate(geom);
  if (geom.n != 2 || eps <= 0.0 || n_theta < 3 || n_s < 1)
    throw std::invalid_argument("reference thin assembly: bad arguments");

  ThinDomainOperator op;
  op.geom = geom;
  op.eps = eps;
  op.n_theta = n_theta;
  op.n_s = n_s;

  const double dtheta = kTwoPi / n_theta;
  const double dts = 1.0 / n_s;
  const FourierSeries cp = profile.c_series().derivative();
  const FourierSeries mup = profile.mu_series().derivative();

  static const int kDi[4] = {0, 1, 0, 1};
  static const int kDj[4] = {0, 0, 1, 1};

  const int nn = op.n_nodes();
  std::vector<std::map<int, double>> krows(nn), mrows(nn);
  for (int cell = 0; cell < n_theta * n_s; ++cell) {
    const int ci = cell / n_s;
    const int cj = cell % n_s;
    const double theta0 = ci * dtheta;
    const double t0 = cj * dts;

    double ke[16] = {0.0}, me[16] = {0.0};
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
            ke[4 * a + b] += wq * (da_th * db_th * gtt +
                                   (da_th * db_t + da_t * db_th) * gtx +
                                   da_t * db_t * gxx);
            me[4 * a + b] += wq * mcoef * nv[a] * nv[b];
          }
        }
      }
    }

    int g[4];
    for (int a = 0; a < 4; ++a) g[a] = op.node(ci + kDi[a], cj + kDj[a]);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        krows[g[a]][g[b]] += ke[4 * a + b];
        mrows[g[a]][g[b]] += me[4 * a + b];
      }
  }
  op.stiffness = csr_from_rows(krows);
  op.mass = csr_from_rows(mrows);
  return op;
}

ThinDomainOperator assemble_polar_annulus(const SphereGeometry& geom,
                                          double c0, double d0,
                                          int n_theta, int n_s) {
  validate(geom);
  if (geom.n != 2 || n_theta < 3 || n_s < 1 || d0 <= c0)
    throw std::invalid_argument("polar annulus: bad arguments");
  const double rho_in = geom.r + c0;
  if (rho_in <= 0.0) throw std::invalid_argument("polar annulus: inner radius <= 0");

  ThinDomainOperator op;
  op.geom = geom;
  op.eps = 1.0;
  op.n_theta = n_theta;
  op.n_s = n_s;

  const double dtheta = kTwoPi / n_theta;
  const double drho = (d0 - c0) / n_s;

  static const int kDi[4] = {0, 1, 0, 1};
  static const int kDj[4] = {0, 0, 1, 1};

  const int nn = op.n_nodes();
  std::vector<std::map<int, double>> krows(nn), mrows(nn);
  for (int cell = 0; cell < n_theta * n_s; ++cell) {
    const int ci = cell / n_s;
    const int cj = cell % n_s;
    const double theta0 = ci * dtheta;
    const double rho0 = rho_in + cj * drho;

    double ke[16] = {0.0}, me[16] = {0.0};
    const double q[2] = {0.5 - kGaussNode, 0.5 + kGaussNode};
    for (int qx = 0; qx < 2; ++qx) {
      for (int qr = 0; qr < 2; ++qr) {
        const double xi = q[qx];
        const double tau = q[qr];
        const double rho = rho0 + tau * drho;
        (void)theta0;

        const double nv[4] = {(1.0 - xi) * (1.0 - tau), xi * (1.0 - tau),
                              (1.0 - xi) * tau, xi * tau};
        const double nxi[4] = {-(1.0 - tau), (1.0 - tau), -tau, tau};
        const double ntau[4] = {-(1.0 - xi), -xi, (1.0 - xi), xi};

        const double wq = 0.25 * dtheta * drho;
        for (int a = 0; a < 4; ++a) {
          const double da_th = nxi[a] / dtheta;
          const double da_r = ntau[a] / drho;
          for (int b = 0; b < 4; ++b) {
            const double db_th = nxi[b] / dtheta;
            const double db_r = ntau[b] / drho;
            // grad u . grad v rho = u_r v_r rho + u_th v_th / rho
            ke[4 * a + b] += wq * (da_r * db_r * rho + da_th * db_th / rho);
            me[4 * a + b] += wq * rho * nv[a] * nv[b];
          }
        }
      }
    }

    int g[4];
    for (int a = 0; a < 4; ++a) g[a] = op.node(ci + kDi[a], cj + kDj[a]);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        krows[g[a]][g[b]] += ke[4 * a + b];
        mrows[g[a]][g[b]] += me[4 * a + b];
      }
  }
  op.stiffness = csr_from_rows(krows);
  op.mass = csr_from_rows(mrows);
  return op;
}

double shell_weighted_integral(const SphereGeometry& geom,
                               const ThicknessProfile& profile,
                               const AmbientFunction& g, int n_theta,
                               int n_radial) {
  validate(geom);
  if (geom.n != 2 || n_theta < 3 || n_radial < 1)
    throw std::invalid_argument("reference shell integral: bad arguments");
  const double dtheta = kTwoPi / n_theta;
  double acc = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = dtheta * i;
    const double lo = geom.r + profile.c(theta);
    const double len = profile.mu(theta) / n_radial;
    for (int cell = 0; cell < n_radial; ++cell) {
      for (int q = 0; q < 4; ++q) {
        const double rho = lo + (cell + kGl4Node[q]) * len;
        const Vec x{rho * std::cos(theta), rho * std::sin(theta)};
        acc += dtheta * len * kGl4Weight[q] * density_j0(geom, x) * g(x) * rho;
      }
    }
  }
  return acc;
}

EigenResult jacobi_eigen(Matrix a, bool want_vectors) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != a.rows()) throw std::invalid_argument("jacobi_eigen: not square");
  Matrix v = Matrix::identity(n);

  double frob = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  const double tol = 1e-15 * std::max(std::sqrt(frob), 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) < tol) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x) < a(y, y); });

  EigenResult res;
  res.values.resize(n);
  for (int i = 0; i < n; ++i) res.values[i] = a(order[i], order[i]);
  if (want_vectors) {
    res.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
    fix_vector_signs(res.vectors);
  }
  return res;
}

}  // namespace squeeze::reference
