#include <CLI11.hpp>

#include "squeeze/run_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "squeeze-spectra: spectra, gap certificates and reduced dynamics for "
      "reaction-diffusion problems on thin shells around a circle"};
  app.require_subcommand(1);

  squeeze::CliOptions opt;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path,
                    "JSON config file; built-in defaults when omitted");
    sub->add_option("--out", opt.out_dir, "output directory (overrides the config)");
    sub->add_option("--workers", opt.workers,
                    "worker threads (overrides SQUEEZE_SPECTRA_WORKERS)");
    sub->add_flag("--verbose", opt.verbose, "progress details on stderr");
  };

  add_common(app.add_subcommand("spectrum",
                                "leading spectrum of the limit circle operator"));
  add_common(app.add_subcommand("certify", "resolvent gap certificate"));
  add_common(app.add_subcommand("converge",
                                "shell eigenvalues against the limit across a "
                                "thickness sweep"));
  add_common(app.add_subcommand("simulate",
                                "semi-implicit reaction-diffusion run on the shell"));
  add_common(app.add_subcommand("manifold",
                                "graph construction, invariance residuals and "
                                "shell/limit field comparison"));
  add_common(app.add_subcommand("coarea-check",
                                "volume-route vs fiber-route integration"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are configuration problems
  }

  if (app.got_subcommand("spectrum")) return squeeze::run_spectrum(opt);
  if (app.got_subcommand("certify")) return squeeze::run_certify(opt);
  if (app.got_subcommand("converge")) return squeeze::run_converge(opt);
  if (app.got_subcommand("simulate")) return squeeze::run_simulate(opt);
  if (app.got_subcommand("manifold")) return squeeze::run_manifold(opt);
  if (app.got_subcommand("coarea-check")) return squeeze::run_coarea_check(opt);
  return 2;
}
