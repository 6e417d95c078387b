#include "squeeze/gap.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace squeeze {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

long long binomial(long long a, long long b) {
  if (b < 0 || a < 0 || b > a) return 0;
  b = std::min(b, a - b);
  __int128 acc = 1;
  for (long long i = 1; i <= b; ++i) {
    acc = acc * (a - b + i) / i;  // exact: prefix products of C are integers
    if (acc > static_cast<__int128>(1) << 62)
      throw std::overflow_error("binomial: multiplicity too large");
  }
  return static_cast<long long>(acc);
}
}  // namespace

double exact_eigenvalue(int n, double r, int nu) {
  if (n < 2) throw std::invalid_argument("exact_eigenvalue: n >= 2 required");
  if (!(r > 0.0)) throw std::invalid_argument("exact_eigenvalue: r > 0 required");
  if (nu < 0) throw std::invalid_argument("exact_eigenvalue: nu >= 0 required");
  return static_cast<double>(nu) * (nu + n - 2) / (r * r);
}

long long sphere_harmonic_multiplicity(int n, int nu) {
  if (n < 2) throw std::invalid_argument("sphere_harmonic_multiplicity: n >= 2 required");
  if (nu < 0) throw std::invalid_argument("sphere_harmonic_multiplicity: nu >= 0 required");
  if (nu == 0) return 1;
  return binomial(nu + n - 1, nu) - binomial(nu + n - 3, nu - 2);
}

std::vector<RepeatedEigenvalue> repeated_spectrum(int n, double r, int count) {
  if (count <= 0) throw std::invalid_argument("repeated_spectrum: count > 0 required");
  std::vector<RepeatedEigenvalue> out;
  out.reserve(count);
  for (int nu = 0; static_cast<int>(out.size()) < count; ++nu) {
    const double lam = exact_eigenvalue(n, r, nu);
    const long long mult = sphere_harmonic_multiplicity(n, nu);
    for (long long k = 0; k < mult && static_cast<int>(out.size()) < count; ++k)
      out.push_back({lam, nu});
  }
  return out;
}

double compute_c_mu(const ThicknessProfile& profile, const SphereGeometry& geom) {
  validate(geom);
  const FourierSeries& mu = profile.mu_series();
  if (geom.n != 2) {
    if (!mu.is_constant())
      throw std::invalid_argument(
          "compute_c_mu: variable profiles are defined on the circle (n == 2)");
    return 0.0;
  }
  if (mu.is_constant()) return 0.0;
  const FourierSeries d1 = mu.derivative();
  const FourierSeries d2 = d1.derivative();
  const FourierSeries d3 = d2.derivative();
  auto f = [&](double theta) { return std::abs(d1(theta)) / (geom.r * mu(theta)); };

  const int samples = 8192;
  double best = 0.0, best_theta = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = kTwoPi * i / samples;
    const double v = f(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  // One Newton polish on the critical-point equation of mu'/mu, which shares
  // maximizers with |grad mu| / mu away from zeros of mu'.
  const double t0 = best_theta;
  const double phi = d2(t0) * mu(t0) - d1(t0) * d1(t0);
  const double dphi = d3(t0) * mu(t0) - d2(t0) * d1(t0);
  if (std::abs(dphi) > 1e-30) {
    const double t1 = t0 - phi / dphi;
    if (std::abs(t1 - t0) < kTwoPi / samples) best = std::max(best, f(t1));
  }
  return best;
}

bool kato_invertibility(double lambda, double dist, double c_mu, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("kato_invertibility: delta must lie in (0, 1)");
  if (!(dist > 0.0)) return false;
  return delta * lambda + c_mu * c_mu / (4.0 * delta) < (1.0 - delta) * dist;
}

bool sufficient_gap_condition(double lambda, double dist, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sufficient_gap_condition: r > 0 required");
  return lambda > 1.0 / (16.0 * r * r) && dist > std::sqrt(lambda) / (2.0 * r);
}

GapInterval gap_interval(int n, double r, int nu) {
  const double lam_lo = exact_eigenvalue(n, r, nu);
  const double lam_hi = exact_eigenvalue(n, r, nu + 1);
  const double r2 = r * r;
  const double xi = 1.0 / (8.0 * r2) + std::sqrt(1.0 / (64.0 * r2 * r2) + lam_lo / (4.0 * r2));
  const double eta = -1.0 / (8.0 * r2) + std::sqrt(1.0 / (64.0 * r2 * r2) + lam_hi / (4.0 * r2));
  GapInterval iv;
  iv.lo = lam_lo + xi;
  iv.hi = lam_hi - eta;
  return iv;
}

Nu0Result find_nu0(int n, double r, int horizon) {
  if (horizon < 1) throw std::invalid_argument("find_nu0: horizon >= 1 required");
  Nu0Result res;
  int nu0 = horizon + 1;
  for (int nu = horizon; nu >= 1; --nu) {
    const GapInterval iv = gap_interval(n, r, nu);
    const double gap = exact_eigenvalue(n, r, nu + 1) - exact_eigenvalue(n, r, nu);
    if (!iv.empty() && iv.width() >= gap / 3.0)
      nu0 = nu;
    else
      break;  // nu0 must cover every band up to the horizon
  }
  if (nu0 > horizon)
    throw std::runtime_error("find_nu0: no band within the horizon satisfies the width bound");
  res.nu0 = nu0;
  const double r2 = r * r;
  const double s_hi =
      std::sqrt(1.0 / (64.0 * r2 * r2) + exact_eigenvalue(n, r, horizon + 1) / (4.0 * r2));
  const double s_lo =
      std::sqrt(1.0 / (64.0 * r2 * r2) + exact_eigenvalue(n, r, horizon) / (4.0 * r2));
  res.limit_value = s_hi - s_lo;
  res.limit_target = 1.0 / (2.0 * r2);
  return res;
}

GapCertificate certify(const ThicknessProfile& profile, const SphereGeometry& geom,
                       int horizon, const std::vector<double>* numerical_spectrum,
                       const std::vector<double>* tolerances) {
  validate(geom);
  if (horizon < 1) throw std::invalid_argument("certify: horizon >= 1 required");
  GapCertificate cert;
  cert.n = geom.n;
  cert.r = geom.r;
  cert.c_mu = compute_c_mu(profile, geom);
  cert.c_mu_bound = 1.0 / (16.0 * geom.r * geom.r);
  cert.admissible = cert.c_mu <= cert.c_mu_bound;
  cert.horizon = horizon;
  const Nu0Result nu0res = find_nu0(geom.n, geom.r, horizon);
  cert.nu0 = nu0res.nu0;
  cert.limit_value = nu0res.limit_value;
  cert.limit_target = nu0res.limit_target;
  cert.ratio_bound = 2.0 / (3.0 * geom.r);

  for (int nu = cert.nu0; nu <= horizon; ++nu) {
    const GapInterval iv = gap_interval(geom.n, geom.r, nu);
    const double lam_lo = exact_eigenvalue(geom.n, geom.r, nu);
    const double lam_hi = exact_eigenvalue(geom.n, geom.r, nu + 1);
    cert.nus.push_back(nu);
    cert.intervals.push_back(iv);
    const double ratio = iv.width() / std::sqrt(iv.lo);
    cert.ratios.push_back(ratio);
    cert.ratio_floors.push_back((lam_hi - lam_lo) / (3.0 * std::sqrt(iv.lo)));
    cert.raw_gap_ratios.push_back((lam_hi - lam_lo) / std::sqrt(lam_lo));
    cert.ratio_proxy = std::max(cert.ratio_proxy, ratio);
  }

  if (numerical_spectrum) {
    if (geom.n != 2)
      throw std::invalid_argument("certify: numerical exclusion is a circle check (n == 2)");
    cert.exclusion_checked = true;
    for (std::size_t j = 0; j < numerical_spectrum->size(); ++j) {
      const double lam = (*numerical_spectrum)[j];
      const double tol =
          (tolerances && j < tolerances->size()) ? std::abs((*tolerances)[j]) : 0.0;
      for (const GapInterval& iv : cert.intervals) {
        if (lam > iv.lo + tol && lam < iv.hi - tol) {
          ++cert.exclusion_violations;
          break;
        }
      }
    }
  }
  return cert;
}

std::string certificate_to_json(const GapCertificate& cert) {
  nlohmann::ordered_json j;
  j["n"] = cert.n;
  j["r"] = cert.r;
  j["c_mu"] = cert.c_mu;
  j["c_mu_bound"] = cert.c_mu_bound;
  j["admissible"] = cert.admissible;
  j["nu0"] = cert.nu0;
  j["horizon"] = cert.horizon;
  j["limit_value"] = cert.limit_value;
  j["limit_target"] = cert.limit_target;
  j["nus"] = cert.nus;
  auto intervals = nlohmann::ordered_json::array();
  for (const GapInterval& iv : cert.intervals)
    intervals.push_back(nlohmann::ordered_json::array({iv.lo, iv.hi}));
  j["intervals"] = intervals;
  j["ratios"] = cert.ratios;
  j["ratio_floors"] = cert.ratio_floors;
  j["raw_gap_ratios"] = cert.raw_gap_ratios;
  j["ratio_proxy"] = cert.ratio_proxy;
  j["ratio_bound"] = cert.ratio_bound;
  j["exclusion_checked"] = cert.exclusion_checked;
  j["exclusion_violations"] = cert.exclusion_violations;
  return j.dump(2) + "\n";
}

}  // namespace squeeze
