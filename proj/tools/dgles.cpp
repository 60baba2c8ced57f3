#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "dgles/commands.hpp"
#include "dgles/config.hpp"
#include "dgles/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DGSEM solver with a modal relaxation-filter LES model"};
  app.require_subcommand(1);

  std::vector<std::string> overrides;
  std::string out_dir = ".";
  long long seed = -1;
  bool quiet = false;

  std::string run_cfg;
  auto* run = app.add_subcommand("run", "run a simulation");
  run->add_option("config", run_cfg, "configuration file")->required()->check(CLI::ExistingFile);

  std::string opt_cfg;
  auto* optimize = app.add_subcommand("optimize", "optimize filter kernel coefficients");
  optimize->add_option("config", opt_cfg, "configuration file")->required()->check(CLI::ExistingFile);

  std::string checkpoint;
  double eps = 0.0;
  auto* spectra = app.add_subcommand("spectra", "energy spectrum of a checkpoint");
  spectra->add_option("checkpoint", checkpoint, "checkpoint file")->required()->check(CLI::ExistingFile);
  spectra->add_option("--eps", eps, "dissipation rate for Kolmogorov compensation");

  for (auto* sub : {run, optimize, spectra}) {
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_flag("-q,--quiet", quiet, "no progress output");
  }
  for (auto* sub : {run, optimize}) {
    sub->add_option("--override", overrides, "section.key=value (repeatable)")->take_all();
    sub->add_option("--seed", seed, "random seed for initial data and restarts");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const dgles::LogFn log = quiet ? dgles::LogFn{} : dgles::LogFn{log_line};
  try {
    if (seed >= 0) {
      overrides.push_back("init.seed=" + std::to_string(seed));
      overrides.push_back("optimize.seed=" + std::to_string(seed));
    }
    if (*run) {
      const auto config = dgles::load_config(run_cfg, overrides);
      const auto result = dgles::cmd_run(config, out_dir, log);
      if (log) log("finished after " + std::to_string(result.steps) + " steps");
    } else if (*optimize) {
      const auto config = dgles::load_config(opt_cfg, overrides);
      const auto result = dgles::cmd_optimize(config, out_dir, log);
      if (log) log("best objective " + std::to_string(result.f_best));
    } else if (*spectra) {
      dgles::cmd_spectra(checkpoint, out_dir, eps);
    }
  } catch (const dgles::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dgles::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const dgles::InvalidStateError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
