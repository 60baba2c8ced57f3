#include "dgles/commands.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dgles/errors.hpp"
#include "dgles/initial_conditions.hpp"
#include "dgles/les_filter.hpp"
#include "dgles/les_objective.hpp"

namespace dgles {

RunResult cmd_run(const RunConfig& config, const std::filesystem::path& out_dir, const LogFn& log) {
  SimulationOptions options;
  options.out_dir = out_dir;
  options.log = log;
  return run_simulation(config, options);
}

void write_optimization_log(const NelderMeadResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "eval,iter,restart,f";
  const std::size_t n = result.history.empty() ? 0 : result.history.front().x.size();
  out << ",c";
  for (std::size_t i = 1; i < n; ++i) out << ",sigma_" << i;
  out << '\n';
  char buf[32];
  for (const auto& ev : result.history) {
    out << ev.eval << ',' << ev.iteration << ',' << ev.restart;
    std::snprintf(buf, sizeof(buf), "%.17g", ev.f);
    out << ',' << buf;
    for (double v : ev.x) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

NelderMeadResult cmd_optimize(const RunConfig& config, const std::filesystem::path& out_dir, const LogFn& log) {
  const auto& opt = config.optimize;
  if (opt.reference.empty()) throw ConfigError("optimize.reference is required");
  if (!std::filesystem::exists(opt.reference))
    throw ConfigError("optimize.reference: file not found: " + opt.reference.string());
  if (config.degree < 2) throw ConfigError("mesh.degree must be >= 2 for kernel optimization");

  ObjectiveSetup setup{config, make_initial_field(config), {}, {}, {}, log};
  setup.times = opt.times.empty() ? default_objective_times(setup.initial.time(), opt.window) : opt.times;
  interpolate_reference(read_reference_series(opt.reference), setup.times, setup.e_ref, setup.kappa_ref);

  std::vector<double> start{opt.c_start};
  const auto sigma_start = opt.sigma_start.empty() ? default_sigma_start(config.degree) : opt.sigma_start;
  start.insert(start.end(), sigma_start.begin(), sigma_start.end());
  std::vector<double> lower(start.size(), opt.sigma_bounds[0]);
  std::vector<double> upper(start.size(), opt.sigma_bounds[1]);
  lower[0] = opt.c_bounds[0];
  upper[0] = opt.c_bounds[1];
  for (std::size_t i = 0; i < start.size(); ++i)
    if (!(start[i] > lower[i] && start[i] < upper[i]))
      throw ConfigError(std::string(i == 0 ? "optimize.c_start" : "optimize.sigma_start") +
                        " must lie strictly inside the bounds");

  NelderMeadOptions nm;
  nm.max_evals = opt.max_evals;
  nm.restart_every = opt.restart_every;
  nm.seed = opt.seed;
  int count = 0;
  const Objective objective = [&](std::span<const double> x) {
    const double f = les_objective(x, setup);
    ++count;
    if (log) {
      std::ostringstream msg;
      msg << "eval " << count << "  f = " << f;
      log(msg.str());
    }
    return f;
  };
  auto result = nelder_mead(objective, start, lower, upper, nm);

  std::filesystem::create_directories(out_dir);
  FilterPreset best{config.degree, kernel_from_params(result.x_best), result.x_best[0], result.x_best[0]};
  {
    std::ofstream out(out_dir / "best_kernel.txt");
    if (!out) throw ConfigError("cannot write " + (out_dir / "best_kernel.txt").string());
    out << "# N sigma_0 ... sigma_N c c_inf; objective " << result.f_best << '\n';
    write_preset(out, best);
  }
  write_optimization_log(result, out_dir / "optimization_log.csv");
  return result;
}

Spectrum cmd_spectra(const std::filesystem::path& checkpoint, const std::filesystem::path& out_dir, double eps) {
  const auto field = read_checkpoint(checkpoint);
  auto spectrum = energy_spectrum(field);
  if (eps > 0.0) spectrum = kolmogorov_compensate(std::move(spectrum), eps);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_spectrum_csv(spectrum, out_dir / spectrum_filename(spectrum.time));
  }
  return spectrum;
}

}  // namespace dgles
