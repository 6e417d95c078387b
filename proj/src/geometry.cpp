#include "squeeze/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace squeeze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_point(const SphereGeometry& geom, const Vec& x, double nrm) {
  if (static_cast<int>(x.size()) != geom.n)
    throw std::invalid_argument("geometry: point dimension does not match n");
  if (!(nrm > 0.0))
    throw std::domain_error("geometry: the origin is outside the projection domain");
}

}  // namespace

void validate(const SphereGeometry& geom) {
  if (geom.n < 2) throw std::invalid_argument("SphereGeometry: n >= 2 required");
  if (!(geom.r > 0.0)) throw std::invalid_argument("SphereGeometry: r > 0 required");
}

Vec project(const SphereGeometry& geom, const Vec& x) {
  const double nrm = norm(x);
  check_point(geom, x, nrm);
  Vec p(x);
  const double scale = geom.r / nrm;
  for (double& v : p) v *= scale;
  return p;
}

Vec squeeze_map(const SphereGeometry& geom, const Vec& x, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("squeeze_map: eps > 0 required");
  const Vec p = project(geom, x);
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = p[i] + eps * (x[i] - p[i]);
  return y;
}

Matrix normal_projector(const SphereGeometry& geom, const Vec& x) {
  const double nrm = norm(x);
  check_point(geom, x, nrm);
  const int n = geom.n;
  Matrix p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = x[i] * x[j] / (nrm * nrm);
  return p;
}

Matrix tangent_projector(const SphereGeometry& geom, const Vec& x) {
  Matrix q = normal_projector(geom, x);
  const int n = geom.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = (i == j ? 1.0 : 0.0) - q(i, j);
  return q;
}

Matrix projection_jacobian(const SphereGeometry& geom, const Vec& x) {
  const double nrm = norm(x);
  check_point(geom, x, nrm);
  Matrix d = tangent_projector(geom, x);
  const double scale = geom.r / nrm;
  for (double& v : d.data()) v *= scale;
  return d;
}

double density_j0(const SphereGeometry& geom, const Vec& x) {
  const double nrm = norm(x);
  check_point(geom, x, nrm);
  return std::pow(geom.r / nrm, geom.n - 1);
}

Matrix s0_matrix(const SphereGeometry& geom, const Vec& x) {
  const double nrm = norm(x);
  check_point(geom, x, nrm);
  Matrix s = tangent_projector(geom, x);
  const double scale = nrm / geom.r;
  for (double& v : s.data()) v *= scale;
  return s;
}

Matrix tangent_basis(const SphereGeometry& geom, const Vec& p) {
  const double nrm = norm(p);
  check_point(geom, p, nrm);
  const int n = geom.n;
  // Gram-Schmidt against the unit normal, seeded with the coordinate axes
  // other than the one most aligned with it. Deterministic by construction.
  Vec xhat(p);
  for (double& v : xhat) v /= nrm;
  int skip = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(xhat[i]) > std::abs(xhat[skip])) skip = i;
  Matrix basis(n, n - 1);
  int col = 0;
  for (int axis = 0; axis < n; ++axis) {
    if (axis == skip) continue;
    Vec v(n, 0.0);
    v[axis] = 1.0;
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += v[i] * xhat[i];
    for (int i = 0; i < n; ++i) v[i] -= a * xhat[i];
    for (int prev = 0; prev < col; ++prev) {
      double b = 0.0;
      for (int i = 0; i < n; ++i) b += v[i] * basis(i, prev);
      for (int i = 0; i < n; ++i) v[i] -= b * basis(i, prev);
    }
    const double vn = norm(v);
    if (!(vn > 1e-14)) throw std::runtime_error("tangent_basis: degenerate basis vector");
    for (int i = 0; i < n; ++i) basis(i, col) = v[i] / vn;
    ++col;
  }
  return basis;
}

ThicknessProfile::ThicknessProfile(FourierSeries c, FourierSeries d)
    : c_(std::move(c)), d_(std::move(d)), mu_(d_ - c_) {
  // Locate the extrema of mu on a dense grid, then polish with Newton steps
  // on mu' using the exact series derivatives.
  const int samples = 8192;
  const FourierSeries dmu = mu_.derivative();
  const FourierSeries ddmu = dmu.derivative();
  double tmin = 0.0, tmax = 0.0;
  double vmin = mu_(0.0), vmax = vmin;
  for (int i = 1; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    const double v = mu_(t);
    if (v < vmin) { vmin = v; tmin = t; }
    if (v > vmax) { vmax = v; tmax = t; }
  }
  auto polish = [&](double t) {
    for (int it = 0; it < 3; ++it) {
      const double g = dmu(t), h = ddmu(t);
      if (std::abs(h) < 1e-30) break;
      const double step = g / h;
      if (std::abs(step) > kTwoPi / samples) break;
      t -= step;
    }
    return t;
  };
  vmin = std::min(vmin, mu_(polish(tmin)));
  vmax = std::max(vmax, mu_(polish(tmax)));
  mu_min_ = vmin;
  mu_max_ = vmax;
  if (!(mu_min_ > 0.0))
    throw std::invalid_argument("ThicknessProfile: fiber length d - c must be positive");
}

ThicknessProfile ThicknessProfile::constant(double c0, double d0) {
  return ThicknessProfile(FourierSeries(c0), FourierSeries(d0));
}

}  // namespace squeeze
