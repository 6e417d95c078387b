#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return SQUEEZE_CLI_PATH; }

fs::path scratch_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("squeeze_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return root;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out = scratch_root() / ("stdout_" + std::to_string(counter));
  const fs::path err = scratch_root() / ("stderr_" + std::to_string(counter));
  ++counter;
  const std::string cmd = env_prefix + std::string(cli_path()) + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch_root() / name;
  std::ofstream(p) << body;
  return p;
}

const std::string kTinyConfig = R"({
  "geometry": {"n": 2, "r": 1.0},
  "profile": {"c_coeffs": [-0.5, 0.05, 0.0], "d_coeffs": [0.5]},
  "discretization": {"N": 64, "N_theta": 24, "N_s": 2, "eig_count": 10},
  "sweep": {"eps_list": [0.2, 0.1]},
  "seed": 42
})";

}  // namespace

TEST_CASE("cli requires a subcommand and offers help") {
  CHECK(run_cli("").code == 2);
  const RunResult help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("spectrum") != std::string::npos);
  CHECK(help.out.find("manifold") != std::string::npos);
}

TEST_CASE("spectrum artifacts are byte-identical across worker counts") {
  const fs::path cfg = write_config("tiny.json", kTinyConfig);
  const fs::path d1 = scratch_root() / "spec1";
  const fs::path d2 = scratch_root() / "spec2";
  const RunResult r1 =
      run_cli("spectrum --config " + cfg.string() + " --out " + d1.string() +
              " --workers 1");
  const RunResult r2 =
      run_cli("spectrum --config " + cfg.string() + " --out " + d2.string() +
              " --workers 3");
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(fs::exists(d1 / "spectrum.csv"));
  CHECK(fs::exists(d1 / "spectrum.json"));
  CHECK(fs::exists(d1 / "manifest.json"));
  CHECK(slurp(d1 / "spectrum.csv") == slurp(d2 / "spectrum.csv"));
  CHECK(slurp(d1 / "spectrum.json") == slurp(d2 / "spectrum.json"));

  const nlohmann::json manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(manifest["command"] == "spectrum");
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest["workers"] == 1);
  const nlohmann::json m2 = nlohmann::json::parse(slurp(d2 / "manifest.json"));
  CHECK(m2["workers"] == 3);
  CHECK(m2["config_hash"] == manifest["config_hash"]);

  // The environment variable is an equivalent way to pin workers.
  const fs::path d3 = scratch_root() / "spec3";
  const RunResult r3 = run_cli(
      "spectrum --config " + cfg.string() + " --out " + d3.string(),
      "SQUEEZE_SPECTRA_WORKERS=2 ");
  REQUIRE(r3.code == 0);
  CHECK(slurp(d3 / "spectrum.csv") == slurp(d1 / "spectrum.csv"));
}

TEST_CASE("format filter drops the json twin") {
  const fs::path cfg = write_config("csv_only.json", R"({
    "discretization": {"N": 48, "eig_count": 6},
    "output": {"formats": ["csv"]}
  })");
  const fs::path dir = scratch_root() / "csv_only";
  REQUIRE(run_cli("spectrum --config " + cfg.string() + " --out " + dir.string())
              .code == 0);
  CHECK(fs::exists(dir / "spectrum.csv"));
  CHECK_FALSE(fs::exists(dir / "spectrum.json"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("certify emits an admissible certificate for a mild profile") {
  const fs::path cfg = write_config("certify.json", R"({
    "profile": {"c_coeffs": [-0.5], "d_coeffs": [0.5]},
    "discretization": {"N": 128, "eig_count": 12}
  })");
  const fs::path dir = scratch_root() / "certify";
  const RunResult r =
      run_cli("certify --config " + cfg.string() + " --out " + dir.string());
  REQUIRE(r.code == 0);
  const nlohmann::json cert = nlohmann::json::parse(slurp(dir / "certificate.json"));
  CHECK(cert["admissible"].get<bool>());
  CHECK(cert["c_mu"].get<double>() == 0.0);
  CHECK(cert["exclusion_checked"].get<bool>());
  CHECK(cert["exclusion_violations"].get<int>() == 0);
}

TEST_CASE("converge reports strictly decreasing relative errors") {
  const fs::path cfg = write_config("tiny2.json", kTinyConfig);
  const fs::path dir = scratch_root() / "conv";
  const RunResult r =
      run_cli("converge --config " + cfg.string() + " --out " + dir.string());
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "converge.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "eps,j,lambda_eps,lambda_limit,rel_err");
  double prev = -1.0;
  int seen = 0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string eps, j, le, ll, rel;
    std::getline(row, eps, ',');
    std::getline(row, j, ',');
    std::getline(row, le, ',');
    std::getline(row, ll, ',');
    std::getline(row, rel, ',');
    if (j != "2") continue;
    const double v = std::stod(rel);
    if (prev >= 0.0) CHECK(v < prev);
    prev = v;
    ++seen;
  }
  CHECK(seen == 2);
}

TEST_CASE("simulate writes a trajectory table") {
  const fs::path cfg = write_config("tiny3.json", kTinyConfig);
  const fs::path dir = scratch_root() / "sim";
  REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + dir.string())
              .code == 0);
  const std::string csv = slurp(dir / "trajectory.csv");
  CHECK(csv.rfind("t,norm,min,max\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 10);
}

TEST_CASE("coarea check passes on a smooth profile") {
  const fs::path cfg = write_config("tiny4.json", kTinyConfig);
  const fs::path dir = scratch_root() / "coarea";
  REQUIRE(run_cli("coarea-check --config " + cfg.string() + " --out " + dir.string())
              .code == 0);
  CHECK(fs::exists(dir / "coarea.csv"));
  const nlohmann::json rep = nlohmann::json::parse(slurp(dir / "coarea_report.json"));
  CHECK(rep["max_rel_diff"].get<double>() <= 1e-6);
}

TEST_CASE("manifold run is deterministic across worker counts") {
  const fs::path cfg = write_config("manifold.json", R"({
    "geometry": {"n": 2, "r": 1.0},
    "profile": {"c_coeffs": [-0.5], "d_coeffs": [0.5]},
    "discretization": {"N": 96, "N_theta": 24, "N_s": 2, "eig_count": 10},
    "nonlinearity": {"kind": "chafee_infante", "lambda": 2.0},
    "sweep": {"eps_list": [0.2, 0.1]},
    "manifold": {"T": 2.0, "picard_M": 4, "J": 8, "nu": 1},
    "seed": 7
  })");
  const fs::path d1 = scratch_root() / "man1";
  const fs::path d2 = scratch_root() / "man2";
  const RunResult r1 = run_cli("manifold --config " + cfg.string() + " --out " +
                               d1.string() + " --workers 1");
  REQUIRE(r1.code == 0);
  const RunResult r2 = run_cli("manifold --config " + cfg.string() + " --out " +
                               d2.string() + " --workers 2");
  REQUIRE(r2.code == 0);
  CHECK(slurp(d1 / "manifold_report.json") == slurp(d2 / "manifold_report.json"));
  CHECK(slurp(d1 / "reduced_trajectory.csv") == slurp(d2 / "reduced_trajectory.csv"));

  const nlohmann::json rep = nlohmann::json::parse(slurp(d1 / "manifold_report.json"));
  CHECK(rep["nu"] == 1);
  CHECK(rep["field_discrepancies"].size() == 2);
}

TEST_CASE("config errors exit with code 2 and name the problem") {
  const fs::path bad_key = write_config("bad_key.json", R"({"geometry": {"nn": 2}})");
  const RunResult r1 = run_cli("spectrum --config " + bad_key.string() + " --out " +
                               (scratch_root() / "e1").string());
  CHECK(r1.code == 2);
  CHECK(r1.err.find("config error") != std::string::npos);

  const fs::path folded = write_config("folded.json", R"({
    "profile": {"c_coeffs": [0.2], "d_coeffs": [0.1]}
  })");
  const RunResult r2 = run_cli("spectrum --config " + folded.string() + " --out " +
                               (scratch_root() / "e2").string());
  CHECK(r2.code == 2);
  CHECK(r2.err.find("fiber length") != std::string::npos);

  const RunResult r3 = run_cli("spectrum --config /no/such/file.json --out " +
                               (scratch_root() / "e3").string());
  CHECK(r3.code == 2);
}

TEST_CASE("numerical rejections exit with code 3 and a diagnostic") {
  const fs::path cube = write_config("cubic.json", R"({
    "discretization": {"N": 64, "eig_count": 10},
    "nonlinearity": {"kind": "cubic", "lambda": 0.0},
    "manifold": {"J": 8, "nu": 1}
  })");
  const RunResult r = run_cli("manifold --config " + cube.string() + " --out " +
                              (scratch_root() / "e4").string());
  CHECK(r.code == 3);
  CHECK(r.err.find("dissipativity") != std::string::npos);
}
