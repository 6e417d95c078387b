#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace squeeze {

// Bad input: malformed file, unknown key, out-of-range value. Exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver gave up: divergence, no admissible cut, lost positivity. Exit 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryConfig {
  int n = 2;
  double r = 1.0;
};

// Interleaved Fourier coefficients [a0, a1, b1, a2, b2, ...].
struct ProfileConfig {
  std::vector<double> c_coeffs{-0.1};
  std::vector<double> d_coeffs{0.1};
};

struct DiscretizationConfig {
  int n_limit = 512;   // key "N": limit circle nodes
  int n_theta = 192;   // shell angular cells
  int n_s = 6;         // shell transverse cells
  int eig_count = 40;  // eigenvalues reported by `spectrum`
};

struct NonlinearityConfig {
  std::string kind = "chafee_infante";
  double lambda = 2.0;
  double delta0 = 0.5;
  double beta = 2.0;
};

struct SweepConfig {
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
};

struct ManifoldConfig {
  double k_gap = 2.0;     // key "K_gap"
  double t_window = 0.0;  // key "T"; 0 picks 8 / lambda_{nu+1}
  int picard = 6;         // key "picard_M"
  int j_modes = 32;       // key "J"
  int nu = 0;             // 0 defers to the gap scan
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json"};
};

struct RunConfig {
  GeometryConfig geometry;
  ProfileConfig profile;
  DiscretizationConfig discretization;
  NonlinearityConfig nonlinearity;
  SweepConfig sweep;
  ManifoldConfig manifold;
  OutputConfig output;
  std::uint64_t seed = 12345;
};

// Parse and validate. Unknown keys are rejected at every nesting level so a
// typo cannot silently fall back to a default.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& j);

// Canonical serialization with every default resolved; the hash is FNV-1a
// over its dump, so it changes exactly when an effective setting changes.
nlohmann::ordered_json config_json(const RunConfig& cfg);
std::string config_hash_hex(const RunConfig& cfg);

std::uint64_t fnv1a(const std::string& bytes);

// Shortest round-trip decimal of a double (%.17g trimmed by printf itself).
std::string format_g17(double v);

// Write through a temporary sibling and rename, so readers never observe a
// half-written artifact.
void write_text_atomic(const std::string& path, const std::string& content);

// `config_hash` is passed in rather than recomputed so callers can hash the
// configuration before applying command-line overrides; empty recomputes
// from cfg.
void write_manifest(const std::string& dir, const std::string& command,
                    const RunConfig& cfg, const std::vector<std::string>& outputs,
                    double wall_seconds, const std::string& config_hash = "");

}  // namespace squeeze
