#include "squeeze/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "squeeze/eigensolve.hpp"
#include "squeeze/parallel.hpp"
#include "squeeze/rng.hpp"

namespace squeeze {

namespace {

// Diagonal exponential stepping needs these together often enough to bundle.
struct EtdWeights {
  std::vector<double> ez, p1, p2;
};

EtdWeights etd_weights(const std::vector<double>& rates, double dt) {
  EtdWeights w;
  const int n = static_cast<int>(rates.size());
  w.ez.resize(n);
  w.p1.resize(n);
  w.p2.resize(n);
  for (int i = 0; i < n; ++i) {
    const double z = -rates[i] * dt;
    w.ez[i] = std::exp(z);
    w.p1[i] = phi1(z);
    w.p2[i] = phi2(z);
  }
  return w;
}

// One exponential two-stage step of y' = -diag(rates) y + g(y), in place.
void etd2_step(const std::vector<double>& rates, const EtdWeights& w, double dt,
               const std::function<std::vector<double>(const std::vector<double>&)>& g,
               std::vector<double>& y) {
  const int n = static_cast<int>(rates.size());
  const std::vector<double> g1 = g(y);
  std::vector<double> pred(n);
  for (int i = 0; i < n; ++i) pred[i] = w.ez[i] * y[i] + dt * w.p1[i] * g1[i];
  const std::vector<double> g2 = g(pred);
  for (int i = 0; i < n; ++i) pred[i] += dt * w.p2[i] * (g2[i] - g1[i]);
  y.swap(pred);
}

void check_finite(const std::vector<double>& y) {
  for (double v : y)
    if (!std::isfinite(v))
      throw std::runtime_error(
          "modal trajectory diverged; the reaction may fail dissipativity "
          "at the sampled amplitudes");
}

std::vector<double> random_direction(Rng& rng, int n) {
  std::vector<double> v(n);
  double nrm = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    nrm = norm2(v);
  } while (nrm < 1e-12);
  for (int i = 0; i < n; ++i) v[i] /= nrm;
  return v;
}

// Orthogonal factor of the polar decomposition O = R P, P symmetric
// positive. R is the closest orthogonal matrix to O.
Matrix polar_orthogonal(const Matrix& o) {
  const int m = static_cast<int>(o.rows());
  Matrix s(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += o(k, i) * o(k, j);
      s(i, j) = acc;
    }
  const EigenResult eig = symmetric_eigen(s, true);
  const double top = std::max(eig.values.back(), 0.0);
  if (eig.values.front() <= 1e-12 * std::max(top, 1e-300))
    throw std::runtime_error(
        "slow cluster overlap is singular; thin and limit frames cannot be matched");
  Matrix inv_sqrt(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k)
        acc += eig.vectors(i, k) * eig.vectors(j, k) / std::sqrt(eig.values[k]);
      inv_sqrt(i, j) = acc;
    }
  return matmul(o, inv_sqrt);
}

}  // namespace

double cutoff_ramp(double sigma) {
  if (sigma <= 1.0) return 1.0;
  if (sigma >= 2.0) return 0.0;
  const double x = sigma - 1.0;
  return 1.0 - x * x * (3.0 - 2.0 * x);
}

double phi1(double z) {
  if (std::abs(z) < 1e-3)
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-3)
    return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
  return (std::expm1(z) - z) / (z * z);
}

Nonlinearity make_reaction(const std::string& kind, double lambda_param,
                           double delta0, double beta) {
  if (delta0 <= 0.0) throw std::invalid_argument("delta0 must be positive");
  if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  Nonlinearity g;
  g.kind = kind;
  g.delta0 = delta0;
  g.beta = beta;
  if (kind == "chafee_infante") {
    g.g = [lambda_param](double u) { return lambda_param * u - u * u * u; };
    g.dg = [lambda_param](double u) { return lambda_param - 3.0 * u * u; };
  } else if (kind == "cubic") {
    g.g = [](double u) { return u * u * u; };
    g.dg = [](double u) { return 3.0 * u * u; };
  } else {
    throw std::invalid_argument("unknown reaction kind: " + kind);
  }
  return g;
}

GalerkinModel limit_galerkin(const WeightedOperator& op, int j_modes) {
  const SpectralDecomposition dec = eigendecompose(op, j_modes, true);
  GalerkinModel model;
  model.lambda = dec.values;
  model.basis = dec.vectors;
  model.mass = sparse_from_dense(op.m);
  return model;
}

GalerkinModel thin_galerkin(const ThinDomainOperator& op, int j_modes) {
  const EigenResult res = thin_eigen(op, j_modes, true);
  GalerkinModel model;
  model.lambda = res.values;
  model.basis = res.vectors;
  model.mass = op.mass;
  return model;
}

std::vector<double> modal_nonlinearity(const GalerkinModel& model,
                                       const Nonlinearity& g,
                                       const std::vector<double>& y,
                                       bool with_cutoff) {
  const int j = static_cast<int>(model.lambda.size());
  if (static_cast<int>(y.size()) != j)
    throw std::invalid_argument("modal coordinate size mismatch");

  double scale = 1.0;
  if (with_cutoff) {
    if (g.radius <= 0.0)
      throw std::logic_error("cutoff radius not calibrated");
    scale = cutoff_ramp(norm2(y) / g.radius);
    if (scale == 0.0) return std::vector<double>(j, 0.0);
  }

  std::vector<double> u = matvec(model.basis, y);
  const int n = static_cast<int>(u.size());
  parallel_for(n, [&](int i) { u[i] = g.g(u[i]); });
  const std::vector<double> mu_vec = model.mass.apply(u);
  std::vector<double> out = matvec_transposed(model.basis, mu_vec);
  if (scale != 1.0)
    for (double& v : out) v *= scale;
  return out;
}

void calibrate_nonlinearity(Nonlinearity& g, const GalerkinModel& model,
                            std::uint64_t seed) {
  const int j = static_cast<int>(model.lambda.size());
  const int n = static_cast<int>(model.basis.rows());

  const std::vector<double> ones(n, 1.0);
  const double mass_total = dot(ones, model.mass.apply(ones));
  if (mass_total <= 0.0) throw std::runtime_error("mass form is not positive");
  const double norm_scale = std::sqrt(mass_total);

  // Largest amplitude where the decay margin is not yet met; constant
  // states of that amplitude fix the energy scale of the absorbing set.
  const auto dissipative_at = [&](double s) {
    return g.g(s) / s <= -0.5 * g.delta0 && g.g(-s) / (-s) <= -0.5 * g.delta0;
  };
  double s_dis = 0.0;
  {
    double last_bad = 0.0, first_good = 0.0;
    for (double s = 1e-3; s <= 1e7; s *= 1.05) {
      if (dissipative_at(s)) {
        if (first_good == 0.0) first_good = s;
      } else {
        last_bad = s;
        first_good = 0.0;
      }
    }
    if (first_good == 0.0)
      throw std::runtime_error(
          "reaction fails the dissipativity check: g(s)/s stays above "
          "-delta0/2 at large amplitude");
    if (last_bad == 0.0) {
      s_dis = 1e-3;  // dissipative everywhere sampled
    } else {
      double lo = last_bad, hi = first_good;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dissipative_at(mid) ? hi : lo) = mid;
      }
      s_dis = hi;
    }
  }
  g.radius_energy = s_dis * norm_scale;

  // Absorbing radius from raw trajectories: seeded starts at three energy
  // levels, sup of the mass norm over the settled half of the window.
  Rng rng(seed);
  const double t_end = std::max(24.0, 12.0 / g.delta0);
  const double dt = 0.005;
  const int n_steps = static_cast<int>(std::ceil(t_end / dt));
  const EtdWeights w = etd_weights(model.lambda, dt);
  const auto raw = [&](const std::vector<double>& y) {
    return modal_nonlinearity(model, g, y, false);
  };
  double sup_tail = 0.0;
  for (double level : {0.5, 1.0, 2.0}) {
    std::vector<double> y = random_direction(rng, j);
    const double amp = level * std::max(g.radius_energy, 1e-3 * norm_scale);
    for (double& v : y) v *= amp;
    for (int step = 0; step < n_steps; ++step) {
      etd2_step(model.lambda, w, dt, raw, y);
      check_finite(y);
      const double nrm = norm2(y);
      if (nrm > 1e3 * std::max(g.radius_energy, norm_scale))
        throw std::runtime_error(
            "raw trajectory escapes every bounded set; reaction fails the "
            "dissipativity sampling");
      if (2 * step >= n_steps) sup_tail = std::max(sup_tail, nrm);
    }
  }
  g.radius = 2.0 * std::max(sup_tail, 1e-6 * norm_scale);

  // Decay margin sampled well outside the cutoff ball.
  const double s10 = 10.0 * g.radius / norm_scale;
  if (!dissipative_at(s10))
    throw std::runtime_error(
        "reaction fails the dissipativity check at ten cutoff radii");

  // Growth constant of the derivative on the sampled range.
  {
    double c = 0.0;
    const int probes = 4001;
    for (int i = 0; i < probes; ++i) {
      const double s = -s10 + 2.0 * s10 * i / (probes - 1);
      c = std::max(c, std::abs(g.dg(s)) / (1.0 + std::pow(std::abs(s), g.beta)));
    }
    g.growth = c;
  }

  // Lipschitz bound of the truncated modal map, sampled over pairs inside
  // and just outside the cutoff support (the ramp makes it global).
  {
    double lip = 0.0;
    const int n_pairs = 64;
    for (int p = 0; p < n_pairs; ++p) {
      std::vector<double> y1 = random_direction(rng, j);
      const double a1 = rng.uniform(0.0, 2.5 * g.radius);
      for (double& v : y1) v *= a1;
      std::vector<double> y2(j);
      if (p % 2 == 0) {
        const std::vector<double> d = random_direction(rng, j);
        const double h = 1e-3 * g.radius;
        for (int i = 0; i < j; ++i) y2[i] = y1[i] + h * d[i];
      } else {
        y2 = random_direction(rng, j);
        const double a2 = rng.uniform(0.0, 2.5 * g.radius);
        for (double& v : y2) v *= a2;
      }
      std::vector<double> diff(j);
      for (int i = 0; i < j; ++i) diff[i] = y1[i] - y2[i];
      const double den = norm2(diff);
      if (den < 1e-12 * g.radius) continue;
      const std::vector<double> g1 = modal_nonlinearity(model, g, y1, true);
      const std::vector<double> g2 = modal_nonlinearity(model, g, y2, true);
      for (int i = 0; i < j; ++i) diff[i] = g1[i] - g2[i];
      lip = std::max(lip, norm2(diff) / den);
    }
    g.lipschitz = lip;
  }
}

int choose_cut(const std::vector<double>& lambda, double lipschitz, double k_gap) {
  if (lambda.size() < 2)
    throw std::invalid_argument("need at least two eigenvalues to cut");
  if (lipschitz <= 0.0 || k_gap <= 0.0)
    throw std::invalid_argument("need positive Lipschitz bound and gap factor");
  const int j = static_cast<int>(lambda.size());
  for (int nu = 1; nu < j; ++nu) {
    const double lo = lambda[nu - 1];
    const double hi = lambda[nu];
    const double gap = hi - lo;
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    if (gap <= 1e-8 * scale) continue;  // inside a near-degenerate cluster
    const double need = k_gap * lipschitz *
                        (std::sqrt(std::max(lo, 0.0)) + std::sqrt(std::max(hi, 0.0)) + 1.0);
    if (gap > need) return nu;
  }
  throw std::runtime_error("no admissible spectral cut within the resolved spectrum");
}

ReducedModel make_reduced_model(GalerkinModel model, Nonlinearity g, int nu,
                                LpParams lp) {
  const int j = static_cast<int>(model.lambda.size());
  if (nu < 1 || nu >= j)
    throw std::invalid_argument("cut must keep at least one slow and one fast mode");
  if (lp.picard < 1 || lp.steps < 2)
    throw std::invalid_argument("need at least one iteration and two time cells");
  ReducedModel rm;
  rm.nu = nu;
  rm.a_slow = Matrix(nu, nu);
  for (int i = 0; i < nu; ++i) rm.a_slow(i, i) = model.lambda[i];
  if (lp.t_window <= 0.0) {
    const double head = model.lambda[nu];
    if (head <= 0.0)
      throw std::invalid_argument("fast spectrum must be positive to pick a window");
    lp.t_window = 8.0 / head;
  }
  rm.model = std::move(model);
  rm.g = std::move(g);
  rm.lp = lp;
  return rm;
}

GraphEval lp_graph_eval(const ReducedModel& rm, const std::vector<double>& xi) {
  const int j = static_cast<int>(rm.model.lambda.size());
  const int nu = rm.nu;
  const int nf = j - nu;
  if (static_cast<int>(xi.size()) != nu)
    throw std::invalid_argument("slow coordinate size mismatch");

  const int kk = rm.lp.steps;
  const double dt = rm.lp.t_window / kk;

  // Fast-block exponential weights for one forward cell.
  std::vector<double> fast_rates(rm.model.lambda.begin() + nu, rm.model.lambda.end());
  const EtdWeights w = etd_weights(fast_rates, dt);

  Matrix xi_traj(kk + 1, nu);
  Matrix wcur(kk + 1, nf);  // zero start: the graph seed
  Matrix wnext(kk + 1, nf);
  Matrix h(kk + 1, nf);

  std::vector<double> y(j), gh, f1(nu), f2(nu), f3(nu), f4(nu), xs(nu), wmid(nf);

  const auto slow_rhs = [&](const double* xi_at, const double* w_at,
                            std::vector<double>& out) {
    for (int i = 0; i < nu; ++i) y[i] = xi_at[i];
    for (int i = 0; i < nf; ++i) y[nu + i] = w_at[i];
    gh = modal_nonlinearity(rm.model, rm.g, y, true);
    for (int i = 0; i < nu; ++i) {
      double acc = gh[i];
      const double* arow = rm.a_slow.row(i);
      for (int q = 0; q < nu; ++q) acc -= arow[q] * xi_at[q];
      out[i] = acc;
    }
  };

  GraphEval ev;
  for (int m = 0; m < rm.lp.picard; ++m) {
    // Slow history backward against the frozen fast history.
    for (int i = 0; i < nu; ++i) xi_traj(kk, i) = xi[i];
    for (int k = kk; k >= 1; --k) {
      const double hstep = -dt;
      const double* xk = xi_traj.row(k);
      for (int i = 0; i < nf; ++i)
        wmid[i] = 0.5 * (wcur(k, i) + wcur(k - 1, i));
      slow_rhs(xk, wcur.row(k), f1);
      for (int i = 0; i < nu; ++i) xs[i] = xk[i] + 0.5 * hstep * f1[i];
      slow_rhs(xs.data(), wmid.data(), f2);
      for (int i = 0; i < nu; ++i) xs[i] = xk[i] + 0.5 * hstep * f2[i];
      slow_rhs(xs.data(), wmid.data(), f3);
      for (int i = 0; i < nu; ++i) xs[i] = xk[i] + hstep * f3[i];
      slow_rhs(xs.data(), wcur.row(k - 1), f4);
      for (int i = 0; i < nu; ++i)
        xi_traj(k - 1, i) =
            xk[i] + (hstep / 6.0) * (f1[i] + 2.0 * f2[i] + 2.0 * f3[i] + f4[i]);
    }

    // Fast forcing along the refreshed slow history.
    for (int k = 0; k <= kk; ++k) {
      for (int i = 0; i < nu; ++i) y[i] = xi_traj(k, i);
      for (int i = 0; i < nf; ++i) y[nu + i] = wcur(k, i);
      gh = modal_nonlinearity(rm.model, rm.g, y, true);
      for (int i = 0; i < nf; ++i) h(k, i) = gh[nu + i];
    }

    // Exponential trapezoid forward from w(-T) = 0.
    for (int i = 0; i < nf; ++i) wnext(0, i) = 0.0;
    for (int k = 0; k < kk; ++k)
      for (int i = 0; i < nf; ++i)
        wnext(k + 1, i) = w.ez[i] * wnext(k, i) +
                          dt * (w.p1[i] * h(k, i) +
                                w.p2[i] * (h(k + 1, i) - h(k, i)));

    double delta = 0.0;
    for (int k = 0; k <= kk; ++k) {
      double acc = 0.0;
      for (int i = 0; i < nf; ++i) {
        const double d = wnext(k, i) - wcur(k, i);
        acc += d * d;
      }
      delta = std::max(delta, std::sqrt(acc));
    }
    ev.deltas.push_back(delta);
    std::swap(wcur, wnext);
  }

  for (std::size_t m = 1; m < ev.deltas.size(); ++m)
    ev.ratios.push_back(ev.deltas[m] / std::max(ev.deltas[m - 1], 1e-300));

  ev.fast.resize(nf);
  for (int i = 0; i < nf; ++i) ev.fast[i] = wcur(kk, i);
  return ev;
}

std::vector<double> reduced_field(const ReducedModel& rm,
                                  const std::vector<double>& xi) {
  const int j = static_cast<int>(rm.model.lambda.size());
  const int nu = rm.nu;
  const GraphEval ev = lp_graph_eval(rm, xi);
  std::vector<double> y(j);
  for (int i = 0; i < nu; ++i) y[i] = xi[i];
  for (int i = 0; i < j - nu; ++i) y[nu + i] = ev.fast[i];
  const std::vector<double> gh = modal_nonlinearity(rm.model, rm.g, y, true);
  std::vector<double> v(nu);
  for (int i = 0; i < nu; ++i) {
    double acc = gh[i];
    const double* arow = rm.a_slow.row(i);
    for (int q = 0; q < nu; ++q) acc -= arow[q] * xi[q];
    v[i] = acc;
  }
  return v;
}

Matrix reduced_field_jacobian(const ReducedModel& rm,
                              const std::vector<double>& xi, double step) {
  const int nu = rm.nu;
  Matrix jac(nu, nu);
  std::vector<double> probe = xi;
  for (int q = 0; q < nu; ++q) {
    const double h = step * std::max(1.0, std::abs(xi[q]));
    probe[q] = xi[q] + h;
    const std::vector<double> vp = reduced_field(rm, probe);
    probe[q] = xi[q] - h;
    const std::vector<double> vm = reduced_field(rm, probe);
    probe[q] = xi[q];
    for (int i = 0; i < nu; ++i) jac(i, q) = (vp[i] - vm[i]) / (2.0 * h);
  }
  return jac;
}

std::vector<ResidualSample> invariance_residual(const ReducedModel& rm,
                                                const std::vector<double>& xi0,
                                                double horizon, int n_samples,
                                                double dt) {
  if (horizon <= 0.0 || dt <= 0.0 || n_samples < 1)
    throw std::invalid_argument("need positive horizon, dt and sample count");
  const int j = static_cast<int>(rm.model.lambda.size());
  const int nu = rm.nu;
  const int nf = j - nu;

  // The slow linear block may be a full matrix (matched frames); step it in
  // its own eigenframe so the whole linear part is diagonal.
  const EigenResult slow_eig = symmetric_eigen(rm.a_slow, true);
  const Matrix& q = slow_eig.vectors;
  std::vector<double> rates(j);
  for (int i = 0; i < nu; ++i) rates[i] = slow_eig.values[i];
  for (int i = 0; i < nf; ++i) rates[nu + i] = rm.model.lambda[nu + i];
  const EtdWeights w = etd_weights(rates, dt);

  const auto to_eigframe = [&](const std::vector<double>& v) {
    std::vector<double> out(j);
    for (int i = 0; i < nu; ++i) {
      double acc = 0.0;
      for (int p = 0; p < nu; ++p) acc += q(p, i) * v[p];
      out[i] = acc;
    }
    for (int i = nu; i < j; ++i) out[i] = v[i];
    return out;
  };
  const auto from_eigframe = [&](const std::vector<double>& v) {
    std::vector<double> out(j);
    for (int p = 0; p < nu; ++p) {
      double acc = 0.0;
      for (int i = 0; i < nu; ++i) acc += q(p, i) * v[i];
      out[p] = acc;
    }
    for (int i = nu; i < j; ++i) out[i] = v[i];
    return out;
  };
  const auto g_eigframe = [&](const std::vector<double>& v) {
    return to_eigframe(modal_nonlinearity(rm.model, rm.g, from_eigframe(v), true));
  };

  const GraphEval seed = lp_graph_eval(rm, xi0);
  std::vector<double> y0(j);
  for (int i = 0; i < nu; ++i) y0[i] = xi0[i];
  for (int i = 0; i < nf; ++i) y0[nu + i] = seed.fast[i];
  std::vector<double> y = to_eigframe(y0);

  const int n_steps = static_cast<int>(std::ceil(horizon / dt - 1e-12));
  const int stride = std::max(1, n_steps / n_samples);

  std::vector<ResidualSample> out;
  for (int step = 1; step <= n_steps; ++step) {
    etd2_step(rates, w, dt, g_eigframe, y);
    check_finite(y);
    if (step % stride == 0 || step == n_steps) {
      const std::vector<double> state = from_eigframe(y);
      std::vector<double> xi_t(state.begin(), state.begin() + nu);
      const GraphEval ge = lp_graph_eval(rm, xi_t);
      double acc = 0.0;
      for (int i = 0; i < nf; ++i) {
        const double d = state[nu + i] - ge.fast[i];
        acc += d * d;
      }
      out.push_back({step * dt, std::sqrt(acc)});
      if (static_cast<int>(out.size()) == n_samples) break;
    }
  }
  return out;
}

void align_slow_block(ReducedModel& thin_rm, const ReducedModel& limit_rm,
                      const WeightedOperator& limit_op,
                      const ThinDomainOperator& thin_op) {
  const int nu = limit_rm.nu;
  if (thin_rm.nu != nu) throw std::invalid_argument("cut mismatch between frames");
  if (static_cast<int>(limit_rm.model.basis.rows()) != thin_op.n_theta)
    throw std::invalid_argument(
        "matching requires the limit grid to equal the angular shell grid");

  const std::vector<double> slow_values(limit_rm.model.lambda.begin(),
                                        limit_rm.model.lambda.begin() + nu + 1);
  const std::vector<int> ids = cluster_ids(slow_values);
  if (ids[nu] == ids[nu - 1])
    throw std::invalid_argument("cut splits a near-degenerate cluster");

  // Averaged thin columns on the circle grid.
  const int n_theta = thin_op.n_theta;
  Matrix averaged(n_theta, nu);
  for (int p = 0; p < nu; ++p) {
    std::vector<double> col(thin_op.n_nodes());
    for (int r = 0; r < thin_op.n_nodes(); ++r) col[r] = thin_rm.model.basis(r, p);
    const std::vector<double> avg = transverse_average(thin_op, col);
    for (int r = 0; r < n_theta; ++r) averaged(r, p) = avg[r];
  }

  Matrix a_new(nu, nu);
  int a = 0;
  while (a < nu) {
    int b = a + 1;
    while (b < nu && ids[b] == ids[a]) ++b;
    const int m = b - a;

    // Overlap of the averaged thin cluster with the limit one in the limit
    // mass form.
    Matrix overlap(m, m);
    for (int qq = 0; qq < m; ++qq) {
      std::vector<double> v0(n_theta);
      for (int r = 0; r < n_theta; ++r) v0[r] = limit_rm.model.basis(r, a + qq);
      const std::vector<double> mv0 = matvec(limit_op.m, v0);
      for (int p = 0; p < m; ++p) {
        double acc = 0.0;
        for (int r = 0; r < n_theta; ++r) acc += averaged(r, a + p) * mv0[r];
        overlap(p, qq) = acc;
      }
    }
    const Matrix rot = polar_orthogonal(overlap);

    // Rotate the thin nodal columns of this cluster in place.
    const int nn = thin_op.n_nodes();
    Matrix old_cols(nn, m);
    for (int r = 0; r < nn; ++r)
      for (int p = 0; p < m; ++p) old_cols(r, p) = thin_rm.model.basis(r, a + p);
    parallel_for(nn, [&](int r) {
      for (int p = 0; p < m; ++p) {
        double acc = 0.0;
        for (int qq = 0; qq < m; ++qq) acc += old_cols(r, qq) * rot(qq, p);
        thin_rm.model.basis(r, a + p) = acc;
      }
    });

    // The slow quadratic form follows the same rotation.
    for (int p = 0; p < m; ++p)
      for (int qq = 0; qq < m; ++qq) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k)
          acc += rot(k, p) * thin_rm.model.lambda[a + k] * rot(k, qq);
        a_new(a + p, a + qq) = acc;
      }
    a = b;
  }
  thin_rm.a_slow = a_new;
}

std::vector<FieldComparisonRow> compare_reduced_fields(
    const ThicknessProfile& profile, const SphereGeometry& geom,
    const Nonlinearity& reaction, int nu, int j_modes,
    const std::vector<double>& eps_list, int n_theta, int n_s,
    const LpParams& lp, const std::vector<std::vector<double>>& xi_samples,
    bool with_jacobian, std::uint64_t seed) {
  if (xi_samples.empty()) throw std::invalid_argument("no slow sample points");

  const WeightedOperator limit_op = assemble_circle_operator(profile, geom, n_theta);
  GalerkinModel limit_model = limit_galerkin(limit_op, j_modes);
  Nonlinearity g = reaction;
  calibrate_nonlinearity(g, limit_model, seed);
  const ReducedModel rm0 = make_reduced_model(std::move(limit_model), g, nu, lp);

  const std::size_t ns = xi_samples.size();
  std::vector<std::vector<double>> v0(ns);
  std::vector<Matrix> j0(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    v0[s] = reduced_field(rm0, xi_samples[s]);
    if (with_jacobian) j0[s] = reduced_field_jacobian(rm0, xi_samples[s]);
  }

  std::vector<FieldComparisonRow> rows;
  for (double eps : eps_list) {
    const ThinDomainOperator thin_op =
        assemble_thin_operator(profile, geom, eps, n_theta, n_s);
    ReducedModel rm_eps =
        make_reduced_model(thin_galerkin(thin_op, j_modes), g, nu, lp);
    align_slow_block(rm_eps, rm0, limit_op, thin_op);

    FieldComparisonRow row;
    row.eps = eps;
    for (std::size_t s = 0; s < ns; ++s) {
      const std::vector<double> v = reduced_field(rm_eps, xi_samples[s]);
      double acc = 0.0;
      for (int i = 0; i < nu; ++i) {
        const double d = v[i] - v0[s][i];
        acc += d * d;
      }
      row.field_max = std::max(row.field_max, std::sqrt(acc));
      if (with_jacobian) {
        const Matrix jac = reduced_field_jacobian(rm_eps, xi_samples[s]);
        double fro = 0.0;
        for (int i = 0; i < nu; ++i)
          for (int q = 0; q < nu; ++q) {
            const double d = jac(i, q) - j0[s](i, q);
            fro += d * d;
          }
        row.jacobian_max = std::max(row.jacobian_max, std::sqrt(fro));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<double>> integrate_modal(const GalerkinModel& model,
                                                 const Nonlinearity& g,
                                                 std::vector<double> y0,
                                                 double dt, int n_steps,
                                                 bool with_cutoff, int stride) {
  if (dt <= 0.0 || n_steps < 1) throw std::invalid_argument("need dt > 0, steps >= 1");
  if (stride < 1) stride = 1;
  const EtdWeights w = etd_weights(model.lambda, dt);
  const auto rhs = [&](const std::vector<double>& y) {
    return modal_nonlinearity(model, g, y, with_cutoff);
  };
  std::vector<std::vector<double>> out;
  out.push_back(y0);
  for (int step = 1; step <= n_steps; ++step) {
    etd2_step(model.lambda, w, dt, rhs, y0);
    check_finite(y0);
    if (step % stride == 0 || step == n_steps) out.push_back(y0);
  }
  return out;
}

}  // namespace squeeze
