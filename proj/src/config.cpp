#include "squeeze/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "squeeze/parallel.hpp"

namespace squeeze {

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::string& where,
                        const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
  }
}

double get_double(const json& obj, const std::string& where, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> get_double_array(const json& obj, const std::string& where,
                                     const char* key,
                                     const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw ConfigError(where + "." + key + " must hold numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

const json* get_section(const json& root, const char* key) {
  if (!root.contains(key)) return nullptr;
  const json& v = root.at(key);
  if (!v.is_object())
    throw ConfigError(std::string(key) + " must be an object");
  return &v;
}

void validate_coeffs(const std::vector<double>& c, const std::string& name) {
  if (c.empty() || c.size() % 2 == 0)
    throw ConfigError(name + " must have odd length [a0, a1, b1, ...]");
}

}  // namespace

RunConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be an object");
  require_known_keys(root, "config",
                     {"geometry", "profile", "discretization", "nonlinearity",
                      "sweep", "manifold", "output", "seed"});

  RunConfig cfg;

  if (const json* s = get_section(root, "geometry")) {
    require_known_keys(*s, "geometry", {"n", "r"});
    cfg.geometry.n = get_int(*s, "geometry", "n", cfg.geometry.n);
    cfg.geometry.r = get_double(*s, "geometry", "r", cfg.geometry.r);
  }
  if (cfg.geometry.n < 2) throw ConfigError("geometry.n must be at least 2");
  if (!(cfg.geometry.r > 0.0)) throw ConfigError("geometry.r must be positive");

  if (const json* s = get_section(root, "profile")) {
    require_known_keys(*s, "profile", {"c_coeffs", "d_coeffs"});
    cfg.profile.c_coeffs =
        get_double_array(*s, "profile", "c_coeffs", cfg.profile.c_coeffs);
    cfg.profile.d_coeffs =
        get_double_array(*s, "profile", "d_coeffs", cfg.profile.d_coeffs);
  }
  validate_coeffs(cfg.profile.c_coeffs, "profile.c_coeffs");
  validate_coeffs(cfg.profile.d_coeffs, "profile.d_coeffs");

  if (const json* s = get_section(root, "discretization")) {
    require_known_keys(*s, "discretization", {"N", "N_theta", "N_s", "eig_count"});
    cfg.discretization.n_limit =
        get_int(*s, "discretization", "N", cfg.discretization.n_limit);
    cfg.discretization.n_theta =
        get_int(*s, "discretization", "N_theta", cfg.discretization.n_theta);
    cfg.discretization.n_s =
        get_int(*s, "discretization", "N_s", cfg.discretization.n_s);
    cfg.discretization.eig_count =
        get_int(*s, "discretization", "eig_count", cfg.discretization.eig_count);
  }
  if (cfg.discretization.n_limit < 3)
    throw ConfigError("discretization.N must be at least 3");
  if (cfg.discretization.n_theta < 3)
    throw ConfigError("discretization.N_theta must be at least 3");
  if (cfg.discretization.n_s < 1)
    throw ConfigError("discretization.N_s must be at least 1");
  if (cfg.discretization.eig_count < 1)
    throw ConfigError("discretization.eig_count must be at least 1");

  if (const json* s = get_section(root, "nonlinearity")) {
    require_known_keys(*s, "nonlinearity", {"kind", "lambda", "delta0", "beta"});
    cfg.nonlinearity.kind =
        get_string(*s, "nonlinearity", "kind", cfg.nonlinearity.kind);
    cfg.nonlinearity.lambda =
        get_double(*s, "nonlinearity", "lambda", cfg.nonlinearity.lambda);
    cfg.nonlinearity.delta0 =
        get_double(*s, "nonlinearity", "delta0", cfg.nonlinearity.delta0);
    cfg.nonlinearity.beta =
        get_double(*s, "nonlinearity", "beta", cfg.nonlinearity.beta);
  }
  if (cfg.nonlinearity.kind != "chafee_infante" && cfg.nonlinearity.kind != "cubic")
    throw ConfigError("nonlinearity.kind must be \"chafee_infante\" or \"cubic\"");
  if (!(cfg.nonlinearity.delta0 > 0.0))
    throw ConfigError("nonlinearity.delta0 must be positive");
  if (cfg.nonlinearity.beta < 0.0)
    throw ConfigError("nonlinearity.beta must be nonnegative");

  if (const json* s = get_section(root, "sweep")) {
    require_known_keys(*s, "sweep", {"eps_list"});
    cfg.sweep.eps_list = get_double_array(*s, "sweep", "eps_list", cfg.sweep.eps_list);
  }
  if (cfg.sweep.eps_list.empty()) throw ConfigError("sweep.eps_list must not be empty");
  for (double e : cfg.sweep.eps_list)
    if (!(e > 0.0)) throw ConfigError("sweep.eps_list entries must be positive");

  if (const json* s = get_section(root, "manifold")) {
    require_known_keys(*s, "manifold", {"K_gap", "T", "picard_M", "J", "nu"});
    cfg.manifold.k_gap = get_double(*s, "manifold", "K_gap", cfg.manifold.k_gap);
    cfg.manifold.t_window = get_double(*s, "manifold", "T", cfg.manifold.t_window);
    cfg.manifold.picard = get_int(*s, "manifold", "picard_M", cfg.manifold.picard);
    cfg.manifold.j_modes = get_int(*s, "manifold", "J", cfg.manifold.j_modes);
    cfg.manifold.nu = get_int(*s, "manifold", "nu", cfg.manifold.nu);
  }
  if (!(cfg.manifold.k_gap > 0.0)) throw ConfigError("manifold.K_gap must be positive");
  if (cfg.manifold.t_window < 0.0) throw ConfigError("manifold.T must be nonnegative");
  if (cfg.manifold.picard < 1) throw ConfigError("manifold.picard_M must be at least 1");
  if (cfg.manifold.j_modes < 2) throw ConfigError("manifold.J must be at least 2");
  if (cfg.manifold.nu < 0 || cfg.manifold.nu >= cfg.manifold.j_modes)
    throw ConfigError("manifold.nu must lie in [0, J)");

  if (const json* s = get_section(root, "output")) {
    require_known_keys(*s, "output", {"dir", "formats"});
    cfg.output.dir = get_string(*s, "output", "dir", cfg.output.dir);
    if (s->contains("formats")) {
      const json& v = s->at("formats");
      if (!v.is_array()) throw ConfigError("output.formats must be an array");
      cfg.output.formats.clear();
      for (const json& e : v) {
        if (!e.is_string()) throw ConfigError("output.formats must hold strings");
        cfg.output.formats.push_back(e.get<std::string>());
      }
    }
  }
  if (cfg.output.dir.empty()) throw ConfigError("output.dir must not be empty");
  for (const std::string& f : cfg.output.formats)
    if (f != "csv" && f != "json")
      throw ConfigError("output.formats entries must be \"csv\" or \"json\"");

  if (root.contains("seed")) {
    const json& v = root.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError("seed must be an integer");
    const long long sv = v.get<long long>();
    if (sv < 0) throw ConfigError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(sv);
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw ConfigError("config parse failure in " + path + ": " + e.what());
  }
  return parse_config(root);
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["geometry"] = {{"n", cfg.geometry.n}, {"r", cfg.geometry.r}};
  j["profile"] = {{"c_coeffs", cfg.profile.c_coeffs},
                  {"d_coeffs", cfg.profile.d_coeffs}};
  j["discretization"] = {{"N", cfg.discretization.n_limit},
                         {"N_theta", cfg.discretization.n_theta},
                         {"N_s", cfg.discretization.n_s},
                         {"eig_count", cfg.discretization.eig_count}};
  j["nonlinearity"] = {{"kind", cfg.nonlinearity.kind},
                       {"lambda", cfg.nonlinearity.lambda},
                       {"delta0", cfg.nonlinearity.delta0},
                       {"beta", cfg.nonlinearity.beta}};
  j["sweep"] = {{"eps_list", cfg.sweep.eps_list}};
  j["manifold"] = {{"K_gap", cfg.manifold.k_gap},
                   {"T", cfg.manifold.t_window},
                   {"picard_M", cfg.manifold.picard},
                   {"J", cfg.manifold.j_modes},
                   {"nu", cfg.manifold.nu}};
  j["output"] = {{"dir", cfg.output.dir}, {"formats", cfg.output.formats}};
  j["seed"] = cfg.seed;
  return j;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_json(cfg).dump())));
  return buf;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_manifest(const std::string& dir, const std::string& command,
                    const RunConfig& cfg, const std::vector<std::string>& outputs,
                    double wall_seconds, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash.empty() ? config_hash_hex(cfg) : config_hash;
  j["config"] = config_json(cfg);
  j["workers"] = worker_count();
  j["outputs"] = outputs;
  // Wall time is reporting only; it is the one field exempt from the
  // byte-identical rerun guarantee.
  j["wall_time_s"] = wall_seconds;
  write_text_atomic(dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace squeeze
