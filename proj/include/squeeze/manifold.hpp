#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "squeeze/linalg.hpp"
#include "squeeze/spectral.hpp"
#include "squeeze/thin_domain.hpp"

namespace squeeze {

// Pointwise reaction term together with the measured constants that the
// graph construction needs. The truncated map applies a C^1 norm cutoff
// so the reaction is globally Lipschitz in modal coordinates.
struct Nonlinearity {
  std::string kind;
  std::function<double(double)> g;   // pointwise value
  std::function<double(double)> dg;  // pointwise derivative
  double delta0 = 0.5;               // decay margin enforced at large |u|
  double beta = 2.0;                 // growth exponent of g'
  // Filled by calibrate_nonlinearity:
  double radius = 0.0;         // cutoff radius R in the mass norm
  double radius_energy = 0.0;  // closed-form cross-check of R's scale
  double lipschitz = 0.0;      // sampled bound for the truncated modal map
  double growth = 0.0;         // sampled C with |g'(s)| <= C (1 + |s|^beta)
};

// Reaction by name: "chafee_infante" is lambda u - u^3, "cubic" is u^3
// (kept as a deliberately non-dissipative input for validation).
Nonlinearity make_reaction(const std::string& kind, double lambda_param,
                           double delta0, double beta);

// Cutoff ramp: 1 on [0,1], 0 on [2,inf), cubic blend between. C^1.
double cutoff_ramp(double sigma);

// Divided differences of the exponential, (e^z - 1)/z and (e^z - 1 - z)/z^2,
// evaluated through a series near zero.
double phi1(double z);
double phi2(double z);

// Spectral Galerkin frame: leading eigenpairs of a weighted operator with
// the mass matrix that pairs nodal values with modal coefficients.
struct GalerkinModel {
  std::vector<double> lambda;  // ascending, size J
  Matrix basis;                // n_nodes x J, columns mass-orthonormal
  SparseMatrix mass;
};

GalerkinModel limit_galerkin(const WeightedOperator& op, int j_modes);
GalerkinModel thin_galerkin(const ThinDomainOperator& op, int j_modes);

// Truncated reaction in modal coordinates,
//   ghat(y) = ramp(|y| / R) V^T M G(V y).
// The modal 2-norm equals the mass norm of V y, so the cutoff ball is
// frame independent. with_cutoff = false gives the raw Galerkin reaction.
std::vector<double> modal_nonlinearity(const GalerkinModel& model,
                                       const Nonlinearity& g,
                                       const std::vector<double>& y,
                                       bool with_cutoff = true);

// Measures the constants the graph construction relies on: the absorbing
// radius from seeded raw trajectories (R is twice the observed sup), the
// dissipativity sampling at amplitude 10 R, the growth constant, and the
// sampled Lipschitz bound of the truncated modal map. Throws when the
// reaction fails the dissipativity check.
void calibrate_nonlinearity(Nonlinearity& g, const GalerkinModel& model,
                            std::uint64_t seed);

// First cluster boundary nu with
//   lambda_{nu+1} - lambda_nu > k_gap L (sqrt(lambda_nu) + sqrt(lambda_{nu+1}) + 1).
// Indices are 1-based counts, so the cut keeps nu modes. Throws when no
// boundary within the resolved spectrum qualifies.
int choose_cut(const std::vector<double>& lambda, double lipschitz, double k_gap);

struct LpParams {
  double t_window = 0.0;  // backward window; 0 picks 8 / lambda_{nu+1}
  int picard = 6;         // fixed point iterations
  int steps = 400;        // time grid cells on the window
};

// Slow/fast split of a Galerkin model. The slow linear block is a full
// symmetric matrix so that a rotated (matched) slow frame keeps its exact
// quadratic form; the fast block stays diagonal in model.lambda.
struct ReducedModel {
  GalerkinModel model;
  Nonlinearity g;
  int nu = 0;
  Matrix a_slow;  // nu x nu
  LpParams lp;
};

ReducedModel make_reduced_model(GalerkinModel model, Nonlinearity g, int nu,
                                LpParams lp = {});

struct GraphEval {
  std::vector<double> fast;     // graph value w(0), size J - nu
  std::vector<double> deltas;   // sup-norm Picard increments
  std::vector<double> ratios;   // consecutive delta ratios
};

// Graph transform at one slow point: the slow history solves the reduced
// equation backward over the window (RK4 against the frozen fast history),
// the fast component is rebuilt by an exponential trapezoid rule, and the
// pair is iterated a fixed number of times from w = 0.
GraphEval lp_graph_eval(const ReducedModel& rm, const std::vector<double>& xi);

// Reduced vector field v(xi) = -A1 xi + P1 ghat(E xi + w(0)).
std::vector<double> reduced_field(const ReducedModel& rm,
                                  const std::vector<double>& xi);

// Jacobian of the reduced field by central differences.
Matrix reduced_field_jacobian(const ReducedModel& rm,
                              const std::vector<double>& xi,
                              double step = 1e-4);

struct ResidualSample {
  double t = 0.0;
  double residual = 0.0;  // |y_fast(t) - w(xi(t))|_2
};

// Starts on the graph over xi0, integrates the truncated Galerkin system
// (exponential two-stage scheme), and measures the distance of the fast
// component from the graph at n_samples times across the horizon.
std::vector<ResidualSample> invariance_residual(const ReducedModel& rm,
                                                const std::vector<double>& xi0,
                                                double horizon, int n_samples,
                                                double dt);

// Rotates the slow columns of the thin model onto the limit ones, one
// near-degenerate cluster at a time (orthogonal Procrustes through the
// limit mass form after transverse averaging), and rewrites a_slow in the
// rotated frame. Requires the cut to sit on a limit cluster boundary.
void align_slow_block(ReducedModel& thin_rm, const ReducedModel& limit_rm,
                      const WeightedOperator& limit_op,
                      const ThinDomainOperator& thin_op);

struct FieldComparisonRow {
  double eps = 0.0;
  double field_max = 0.0;     // max_s |v_eps(xi_s) - v_0(xi_s)|_2
  double jacobian_max = 0.0;  // max_s Frobenius gap, when requested
};

// Reduced vector fields of the shell models against the limit model at the
// shared sample points. The reaction constants are calibrated once on the
// limit model and reused, so both sides truncate identically.
std::vector<FieldComparisonRow> compare_reduced_fields(
    const ThicknessProfile& profile, const SphereGeometry& geom,
    const Nonlinearity& reaction, int nu, int j_modes,
    const std::vector<double>& eps_list, int n_theta, int n_s,
    const LpParams& lp, const std::vector<std::vector<double>>& xi_samples,
    bool with_jacobian, std::uint64_t seed);

// Modal trajectory of the truncated system from y0, sampled every stride
// steps; used by the simulate-style diagnostics and the tests.
std::vector<std::vector<double>> integrate_modal(const GalerkinModel& model,
                                                 const Nonlinearity& g,
                                                 std::vector<double> y0,
                                                 double dt, int n_steps,
                                                 bool with_cutoff, int stride);

}  // namespace squeeze
