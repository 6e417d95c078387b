#pragma once

#include <string>

namespace squeeze {

// Shared command-line surface of the subcommands. Empty strings mean "not
// given"; workers <= 0 leaves the resolution to the environment.
struct CliOptions {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  bool verbose = false;
};

// Each driver loads the config, runs, writes its artifacts plus
// manifest.json into the output directory, and maps failures to the exit
// contract: 0 success, 2 configuration error, 3 numerical failure.
int run_spectrum(const CliOptions& opt);
int run_certify(const CliOptions& opt);
int run_converge(const CliOptions& opt);
int run_simulate(const CliOptions& opt);
int run_manifold(const CliOptions& opt);
int run_coarea_check(const CliOptions& opt);

}  // namespace squeeze
