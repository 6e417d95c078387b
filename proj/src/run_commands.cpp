#include "squeeze/run_commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "squeeze/config.hpp"
#include "squeeze/gap.hpp"
#include "squeeze/manifold.hpp"
#include "squeeze/parallel.hpp"
#include "squeeze/quadrature.hpp"
#include "squeeze/rng.hpp"
#include "squeeze/spectral.hpp"
#include "squeeze/thin_domain.hpp"

namespace squeeze {

namespace {

using nlohmann::ordered_json;
using Body = std::function<std::vector<std::string>(const RunConfig&, const std::string&, bool)>;

SphereGeometry geometry_from(const RunConfig& cfg) {
  return SphereGeometry{cfg.geometry.n, cfg.geometry.r};
}

ThicknessProfile profile_from(const RunConfig& cfg) {
  return ThicknessProfile(FourierSeries::from_interleaved(cfg.profile.c_coeffs),
                          FourierSeries::from_interleaved(cfg.profile.d_coeffs));
}

bool wants(const RunConfig& cfg, const char* format) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) !=
         cfg.output.formats.end();
}

int run_guarded(const CliOptions& opt, const std::string& command, const Body& body) {
  try {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
    // Hash before the command-line overrides: the hash identifies the input
    // configuration, not where this run happens to deliver it.
    const std::string hash = config_hash_hex(cfg);
    if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
    if (opt.workers > 0) set_worker_count(opt.workers);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> artifacts = body(cfg, cfg.output.dir, opt.verbose);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_manifest(cfg.output.dir, command, cfg, artifacts, wall, hash);
    if (opt.verbose)
      for (const std::string& a : artifacts)
        std::fprintf(stderr, "  %s/%s\n", cfg.output.dir.c_str(), a.c_str());
    std::printf("%s: wrote %zu artifacts to %s\n", command.c_str(),
                artifacts.size() + 1, cfg.output.dir.c_str());
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

// Dispersion-based uncertainty band for a P1 circle eigenvalue: the band
// index enters as (2 pi nu / N)^2 / 12 relative error, padded threefold.
std::vector<double> spectrum_tolerances(const std::vector<double>& values,
                                        double r, int n_nodes) {
  std::vector<double> tol(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double nu = std::round(r * std::sqrt(std::max(values[j], 0.0)));
    const double kh = 2.0 * std::numbers::pi * nu / n_nodes;
    tol[j] = 1e-9 + 0.25 * values[j] * kh * kh;
  }
  return tol;
}

}  // namespace

int run_spectrum(const CliOptions& opt) {
  return run_guarded(opt, "spectrum", [](const RunConfig& cfg, const std::string& dir,
                                         bool) {
    const SphereGeometry geom = geometry_from(cfg);
    const ThicknessProfile prof = profile_from(cfg);
    const WeightedOperator op =
        assemble_circle_operator(prof, geom, cfg.discretization.n_limit);
    const SpectralDecomposition dec =
        eigendecompose(op, cfg.discretization.eig_count, false);

    std::vector<std::string> artifacts;
    if (wants(cfg, "csv")) {
      std::string s = "j,lambda,cluster_id\n";
      for (std::size_t j = 0; j < dec.values.size(); ++j)
        s += std::to_string(j + 1) + "," + format_g17(dec.values[j]) + "," +
             std::to_string(dec.clusters[j]) + "\n";
      write_text_atomic(dir + "/spectrum.csv", s);
      artifacts.push_back("spectrum.csv");
    }
    if (wants(cfg, "json")) {
      ordered_json j;
      j["n_nodes"] = dec.n_nodes;
      j["r"] = dec.r;
      j["lambda"] = dec.values;
      j["cluster_id"] = dec.clusters;
      write_text_atomic(dir + "/spectrum.json", j.dump(2) + "\n");
      artifacts.push_back("spectrum.json");
    }
    return artifacts;
  });
}

int run_certify(const CliOptions& opt) {
  return run_guarded(opt, "certify", [](const RunConfig& cfg, const std::string& dir,
                                        bool) {
    const SphereGeometry geom = geometry_from(cfg);
    const ThicknessProfile prof = profile_from(cfg);
    const int horizon = std::max(50, cfg.discretization.eig_count);

    GapCertificate cert;
    if (geom.n == 2) {
      const WeightedOperator op =
          assemble_circle_operator(prof, geom, cfg.discretization.n_limit);
      const SpectralDecomposition dec =
          eigendecompose(op, cfg.discretization.eig_count, false);
      const std::vector<double> tol =
          spectrum_tolerances(dec.values, geom.r, cfg.discretization.n_limit);
      cert = certify(prof, geom, horizon, &dec.values, &tol);
    } else {
      cert = certify(prof, geom, horizon);
    }

    write_text_atomic(dir + "/certificate.json", certificate_to_json(cert));
    return std::vector<std::string>{"certificate.json"};
  });
}

int run_converge(const CliOptions& opt) {
  return run_guarded(opt, "converge", [](const RunConfig& cfg, const std::string& dir,
                                         bool) {
    const SphereGeometry geom = geometry_from(cfg);
    const ThicknessProfile prof = profile_from(cfg);
    // The limit side is discretized at the shell's angular resolution so the
    // shared truncation error cancels and the sweep isolates the eps effect.
    const std::vector<ConvergenceRow> rows = convergence_study(
        prof, geom, cfg.sweep.eps_list, 10, cfg.discretization.n_theta,
        cfg.discretization.n_s, cfg.discretization.n_theta);

    std::vector<std::string> artifacts;
    if (wants(cfg, "csv")) {
      std::string s = "eps,j,lambda_eps,lambda_limit,rel_err\n";
      for (const ConvergenceRow& row : rows)
        s += format_g17(row.eps) + "," + std::to_string(row.j) + "," +
             format_g17(row.lambda_eps) + "," + format_g17(row.lambda_limit) + "," +
             format_g17(row.rel_err) + "\n";
      write_text_atomic(dir + "/converge.csv", s);
      artifacts.push_back("converge.csv");
    }
    if (wants(cfg, "json")) {
      ordered_json j = ordered_json::array();
      for (const ConvergenceRow& row : rows)
        j.push_back({{"eps", row.eps},
                     {"j", row.j},
                     {"lambda_eps", row.lambda_eps},
                     {"lambda_limit", row.lambda_limit},
                     {"rel_err", row.rel_err}});
      write_text_atomic(dir + "/converge.json", j.dump(2) + "\n");
      artifacts.push_back("converge.json");
    }
    return artifacts;
  });
}

int run_simulate(const CliOptions& opt) {
  return run_guarded(opt, "simulate", [](const RunConfig& cfg, const std::string& dir,
                                         bool) {
    const SphereGeometry geom = geometry_from(cfg);
    const ThicknessProfile prof = profile_from(cfg);
    const double eps = cfg.sweep.eps_list.front();
    const ThinDomainOperator op = assemble_thin_operator(
        prof, geom, eps, cfg.discretization.n_theta, cfg.discretization.n_s);

    const Nonlinearity reaction =
        make_reaction(cfg.nonlinearity.kind, cfg.nonlinearity.lambda,
                      cfg.nonlinearity.delta0, cfg.nonlinearity.beta);

    Rng rng(cfg.seed);
    std::vector<double> u0(op.n_nodes());
    for (double& v : u0) v = rng.uniform(-0.5, 0.5);

    const std::vector<TrajectorySample> traj =
        simulate(op, reaction.g, u0, 0.01, 10.0, 10);

    std::vector<std::string> artifacts;
    if (wants(cfg, "csv")) {
      std::string s = "t,norm,min,max\n";
      for (const TrajectorySample& row : traj)
        s += format_g17(row.t) + "," + format_g17(row.norm) + "," +
             format_g17(row.min) + "," + format_g17(row.max) + "\n";
      write_text_atomic(dir + "/trajectory.csv", s);
      artifacts.push_back("trajectory.csv");
    }
    if (wants(cfg, "json")) {
      ordered_json j = ordered_json::array();
      for (const TrajectorySample& row : traj)
        j.push_back({{"t", row.t}, {"norm", row.norm}, {"min", row.min}, {"max", row.max}});
      write_text_atomic(dir + "/trajectory.json", j.dump(2) + "\n");
      artifacts.push_back("trajectory.json");
    }
    return artifacts;
  });
}

int run_manifold(const CliOptions& opt) {
  return run_guarded(opt, "manifold", [](const RunConfig& cfg, const std::string& dir,
                                         bool verbose) {
    const SphereGeometry geom = geometry_from(cfg);
    const ThicknessProfile prof = profile_from(cfg);

    const WeightedOperator limit_op =
        assemble_circle_operator(prof, geom, cfg.discretization.n_limit);
    GalerkinModel model = limit_galerkin(limit_op, cfg.manifold.j_modes);

    Nonlinearity g = make_reaction(cfg.nonlinearity.kind, cfg.nonlinearity.lambda,
                                   cfg.nonlinearity.delta0, cfg.nonlinearity.beta);
    calibrate_nonlinearity(g, model, cfg.seed);
    if (verbose)
      std::fprintf(stderr, "  calibrated: R=%.6g L=%.6g\n", g.radius, g.lipschitz);

    const int nu = cfg.manifold.nu > 0
                       ? cfg.manifold.nu
                       : choose_cut(model.lambda, g.lipschitz, cfg.manifold.k_gap);
    const double gap = model.lambda[nu] - model.lambda[nu - 1];

    LpParams lp;
    lp.t_window = cfg.manifold.t_window;
    lp.picard = cfg.manifold.picard;
    const ReducedModel rm = make_reduced_model(std::move(model), g, nu, lp);

    // Probe amplitude 0.1 R keeps the sampled reaction slope below the gap,
    // which is where the Picard iteration is provably contractive.
    std::vector<double> xi_probe(nu, 0.1 * g.radius / std::sqrt(double(nu)));
    const GraphEval probe = lp_graph_eval(rm, xi_probe);

    const double horizon = 10.0;
    const std::vector<ResidualSample> residuals =
        invariance_residual(rm, xi_probe, horizon, 40, 0.005);

    // Slow coordinates of the on-graph trajectory; up to the measured
    // residual this is the reduced flow itself.
    std::vector<std::string> artifacts;
    {
      const int j_modes = static_cast<int>(rm.model.lambda.size());
      std::vector<double> y0(j_modes, 0.0);
      for (int i = 0; i < nu; ++i) y0[i] = xi_probe[i];
      for (int i = nu; i < j_modes; ++i) y0[i] = probe.fast[i - nu];
      const int n_steps = 400, stride = 8;
      const double dt = horizon / n_steps;
      const std::vector<std::vector<double>> snaps =
          integrate_modal(rm.model, g, y0, dt, n_steps, true, stride);
      if (wants(cfg, "csv")) {
        std::string s = "t";
        for (int i = 1; i <= nu; ++i) s += ",xi_" + std::to_string(i);
        s += "\n";
        for (std::size_t k = 0; k < snaps.size(); ++k) {
          const int step = std::min<int>(static_cast<int>(k) * stride, n_steps);
          s += format_g17(step * dt);
          for (int i = 0; i < nu; ++i) s += "," + format_g17(snaps[k][i]);
          s += "\n";
        }
        write_text_atomic(dir + "/reduced_trajectory.csv", s);
        artifacts.push_back("reduced_trajectory.csv");
      }
    }

    // Shell models against the limit at shared slow samples.
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::vector<double>> xi_samples;
    for (int s = 0; s < 5; ++s) {
      std::vector<double> xi(nu);
      double nrm = 0.0;
      for (double& v : xi) {
        v = rng.normal();
        nrm += v * v;
      }
      nrm = std::sqrt(std::max(nrm, 1e-30));
      const double amp = rng.uniform(0.05 * g.radius, 0.15 * g.radius);
      for (double& v : xi) v *= amp / nrm;
      xi_samples.push_back(xi);
    }
    const Nonlinearity bare = make_reaction(cfg.nonlinearity.kind, cfg.nonlinearity.lambda,
                                            cfg.nonlinearity.delta0, cfg.nonlinearity.beta);
    const std::vector<FieldComparisonRow> comparison = compare_reduced_fields(
        prof, geom, bare, nu, cfg.manifold.j_modes, cfg.sweep.eps_list,
        cfg.discretization.n_theta, cfg.discretization.n_s, lp, xi_samples,
        true, cfg.seed);

    ordered_json rep;
    rep["nu"] = nu;
    rep["gap"] = gap;
    rep["window"] = rm.lp.t_window;
    rep["picard_M"] = rm.lp.picard;
    rep["J"] = cfg.manifold.j_modes;
    rep["L"] = g.lipschitz;
    rep["radius"] = g.radius;
    rep["radius_energy"] = g.radius_energy;
    rep["growth"] = g.growth;
    rep["deltas"] = probe.deltas;
    rep["contraction_ratios"] = probe.ratios;
    rep["residual_series"] = ordered_json::array();
    for (const ResidualSample& rs : residuals)
      rep["residual_series"].push_back({{"t", rs.t}, {"residual", rs.residual}});
    rep["field_discrepancies"] = ordered_json::array();
    for (const FieldComparisonRow& row : comparison)
      rep["field_discrepancies"].push_back({{"eps", row.eps},
                                            {"field_max", row.field_max},
                                            {"jacobian_max", row.jacobian_max}});
    write_text_atomic(dir + "/manifold_report.json", rep.dump(2) + "\n");
    artifacts.push_back("manifold_report.json");
    return artifacts;
  });
}

int run_coarea_check(const CliOptions& opt) {
  return run_guarded(opt, "coarea-check", [](const RunConfig& cfg, const std::string& dir,
                                             bool) {
    const SphereGeometry geom = geometry_from(cfg);
    const ThicknessProfile prof = profile_from(cfg);
    const int n_theta = std::max(256, cfg.discretization.n_theta);
    const int n_radial = 32;

    struct Probe {
      const char* name;
      AmbientFunction g;
    };
    const Probe probes[] = {
        {"one", [](const Vec&) { return 1.0; }},
        {"x0", [](const Vec& x) { return x[0]; }},
        {"abs2", [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; }},
    };

    ordered_json rows = ordered_json::array();
    std::string csv = "name,volume_route,fiber_route,abs_diff\n";
    double worst = 0.0;
    for (const Probe& p : probes) {
      const CoareaReport rep = coarea_check(geom, prof, p.g, n_theta, n_radial);
      rows.push_back({{"name", p.name},
                      {"volume_route", rep.volume_route},
                      {"fiber_route", rep.fiber_route},
                      {"abs_diff", rep.abs_diff}});
      csv += std::string(p.name) + "," + format_g17(rep.volume_route) + "," +
             format_g17(rep.fiber_route) + "," + format_g17(rep.abs_diff) + "\n";
      worst = std::max(worst,
                       rep.abs_diff / std::max(1.0, std::abs(rep.volume_route)));
    }

    std::vector<std::string> artifacts;
    if (wants(cfg, "csv")) {
      write_text_atomic(dir + "/coarea.csv", csv);
      artifacts.push_back("coarea.csv");
    }
    ordered_json j;
    j["n_theta"] = n_theta;
    j["n_radial"] = n_radial;
    j["rows"] = rows;
    j["max_rel_diff"] = worst;
    write_text_atomic(dir + "/coarea_report.json", j.dump(2) + "\n");
    artifacts.push_back("coarea_report.json");

    if (worst > 1e-6)
      throw NumericalError("coarea identity violated beyond tolerance");
    return artifacts;
  });
}

}  // namespace squeeze
