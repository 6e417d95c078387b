#pragma once

#include <string>
#include <vector>

#include "squeeze/geometry.hpp"

namespace squeeze {

// Exact eigenvalue of the Laplace-Beltrami operator on the sphere of radius
// r in R^n, band nu: nu (nu + n - 2) / r^2.
double exact_eigenvalue(int n, double r, int nu);

// Dimension of the degree-nu spherical harmonics in R^n,
//   C(nu+n-1, nu) - C(nu+n-3, nu-2).
long long sphere_harmonic_multiplicity(int n, int nu);

struct RepeatedEigenvalue {
  double value;
  int nu;
};

// First `count` eigenvalues listed with multiplicity, ascending.
std::vector<RepeatedEigenvalue> repeated_spectrum(int n, double r, int count);

// sup over the sphere of |grad mu| / mu, the profile oscillation constant.
// Dense sampling plus one Newton polish of the sampled maximizer; variable
// profiles are defined on the circle, for n >= 3 the profile must be
// constant (where the constant is exactly 0).
double compute_c_mu(const ThicknessProfile& profile, const SphereGeometry& geom);

// Resolvent invertibility test at spectral distance `dist` from lambda:
//   delta lambda + c_mu^2 / (4 delta) < (1 - delta) dist,  0 < delta < 1.
bool kato_invertibility(double lambda, double dist, double c_mu, double delta);

// Closed sufficient condition implying the test above with the canonical
// delta = 1 / (8 r sqrt(lambda)), valid once c_mu <= 1/(16 r^2):
//   lambda > 1/(16 r^2)  and  dist > sqrt(lambda) / (2 r).
bool sufficient_gap_condition(double lambda, double dist, double r);

struct GapInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
  double width() const { return hi - lo; }
};

// Certified resolvent interval between bands nu and nu+1:
//   ] lam_nu + xi_nu, lam_{nu+1} - eta_{nu+1} [
// where xi and eta are the positive roots of 4 r^2 x^2 -+ x - lam = 0, so
// the sufficient condition holds strictly at every interior point.
GapInterval gap_interval(int n, double r, int nu);

struct Nu0Result {
  int nu0 = 0;
  double limit_value = 0.0;   // interval-shift increment at the horizon
  double limit_target = 0.0;  // its closed-form limit, 1/(2 r^2)
};

// Smallest nu0 >= 1 with width(I_nu) >= (1/3)(lam_{nu+1} - lam_nu) for every
// nu in [nu0, horizon].
Nu0Result find_nu0(int n, double r, int horizon);

struct GapCertificate {
  int n = 2;
  double r = 1.0;
  double c_mu = 0.0;
  double c_mu_bound = 0.0;  // 1/(16 r^2)
  bool admissible = false;
  int nu0 = 0;
  int horizon = 0;
  double limit_value = 0.0;
  double limit_target = 0.0;
  std::vector<int> nus;                  // nu0 .. horizon
  std::vector<GapInterval> intervals;    // aligned with nus
  std::vector<double> ratios;            // width / sqrt(lo)
  std::vector<double> ratio_floors;      // (1/3) gap / sqrt(lo)
  std::vector<double> raw_gap_ratios;    // (lam_{nu+1} - lam_nu) / sqrt(lam_nu)
  double ratio_proxy = 0.0;              // max of ratios
  double ratio_bound = 0.0;              // 2 / (3 r)
  bool exclusion_checked = false;
  int exclusion_violations = 0;
};

// Assemble the certificate. When a numerical spectrum is supplied (n == 2),
// checks that no eigenvalue lands inside a certified interval; tolerances
// widen each eigenvalue into a band before the test.
GapCertificate certify(const ThicknessProfile& profile, const SphereGeometry& geom,
                       int horizon,
                       const std::vector<double>* numerical_spectrum = nullptr,
                       const std::vector<double>* tolerances = nullptr);

std::string certificate_to_json(const GapCertificate& cert);

}  // namespace squeeze
