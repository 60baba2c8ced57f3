#include "dgles/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dgles/errors.hpp"
#include "dgles/initial_conditions.hpp"

namespace dgles {

namespace {

DgSettings make_settings(const RunConfig& config) {
  DgSettings s;
  s.gas = config.gas;
  s.variant = config.flux;
  s.include_viscous = config.gas.mu > 0.0 || config.model.type == ModelType::smagorinsky;
  if (config.model.type == ModelType::smagorinsky)
    s.eddy_viscosity = make_smagorinsky_model(config.model.c_s, build_mesh(config.cells, config.lengths), config.degree);
  return s;
}

std::vector<double> merge_times(std::vector<double> times, double t0, double t_end) {
  std::vector<double> out;
  std::sort(times.begin(), times.end());
  for (double t : times) {
    if (t < t0 - 1e-12 || t > t_end + 1e-12) continue;
    t = std::clamp(t, t0, t_end);
    if (out.empty() || t - out.back() > 1e-10 * std::max(1.0, std::abs(t))) out.push_back(t);
  }
  return out;
}

}  // namespace

Simulation::Simulation(const RunConfig& config, SolutionField initial)
    : config_(config),
      field_(std::move(initial)),
      op_(field_.mesh(), field_.ref_ptr(), make_settings(config)) {
  if (config.model.type == ModelType::filter)
    kernel_.emplace(config.model.sigma, config.model.c, field_.ref_ptr(), config.model.l_ref);
}

double Simulation::next_dt() const {
  if (config_.time.dt > 0.0) return config_.time.dt;
  return compute_dt(field_, config_.gas, config_.time.cfl, op_.last_eddy_viscosity());
}

void Simulation::step(double dt) {
  const RhsFunction rhs = [this](std::span<const double> u, double, std::span<double> dudt) { op_.evaluate(u, dudt); };
  if (kernel_) {
    strengths_.update(field_, *kernel_);
    const RhsAugment hook = [this](std::span<const double> u, std::span<double> dudt) {
      apply_relaxation(dudt, u, field_.mesh(), *kernel_, strengths_.sigma_f);
    };
    rk_step(field_, dt, integrator_, rhs, &hook);
  } else {
    rk_step(field_, dt, integrator_, rhs);
  }
  ++steps_;
}

void Simulation::advance_to(double t_target) {
  while (field_.time() < t_target) {
    const double remaining = t_target - field_.time();
    double dt = next_dt();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw NumericalError("time step is not positive and finite");
    const bool last = dt >= remaining * (1.0 - 1e-12);
    if (last) dt = remaining;
    step(dt);
    if (last) field_.set_time(t_target);
  }
}

TimeSample Simulation::sample() const {
  TimeSample s;
  s.t = field_.time();
  check_positivity(field_, config_.gas);
  s.e_kin = integral_kinetic_energy(field_);
  s.kappa_resolved = config_.gas.mu > 0.0 ? resolved_dissipation(field_, config_.gas) : 0.0;
  return s;
}

void compensate_spectra(std::vector<Spectrum>& spectra, const TimeSeries& series) {
  const auto& samples = series.samples();
  for (auto& spec : spectra) {
    spec.compensated.clear();
    double eps = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const auto& a = samples[i];
      const auto& b = samples[i + 1];
      if (spec.time < a.t - 1e-12 || spec.time > b.t + 1e-12) continue;
      if (std::abs(spec.time - a.t) <= 1e-12) eps = a.eps_numerical;
      else if (std::abs(spec.time - b.t) <= 1e-12) eps = b.eps_numerical;
      else {
        const double w = (spec.time - a.t) / (b.t - a.t);
        eps = (1.0 - w) * a.eps_numerical + w * b.eps_numerical;
      }
      if (std::isfinite(eps)) break;
    }
    if (!std::isfinite(eps)) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& smp : samples)
        if (std::isfinite(smp.eps_numerical) && std::abs(smp.t - spec.time) < best) {
          best = std::abs(smp.t - spec.time);
          eps = smp.eps_numerical;
        }
    }
    if (std::isfinite(eps) && eps > 0.0) spec = kolmogorov_compensate(std::move(spec), eps);
  }
}

RunResult run_simulation(const RunConfig& config, SolutionField initial, const SimulationOptions& options) {
  Simulation sim(config, std::move(initial));
  const double t0 = sim.field().time();
  const double t_end = std::max(config.time.end, t0);

  std::vector<double> sample_times = options.extra_samples;
  if (options.use_cadence) {
    const long count = static_cast<long>(std::floor((t_end - t0) / config.output.cadence + 1e-9));
    for (long i = 0; i <= count; ++i) sample_times.push_back(t0 + static_cast<double>(i) * config.output.cadence);
    sample_times.push_back(t_end);
  }
  sample_times = merge_times(std::move(sample_times), t0, t_end);
  const auto spectrum_times = merge_times(config.output.spectra, t0, t_end);
  auto events = sample_times;
  events.insert(events.end(), spectrum_times.begin(), spectrum_times.end());
  events.push_back(t_end);
  events = merge_times(std::move(events), t0, t_end);

  const bool write = !options.out_dir.empty();
  if (write) std::filesystem::create_directories(options.out_dir);

  RunResult result{sim.field(), {}, {}, 0};
  const auto finish_outputs = [&] {
    result.series.update_dissipation();
    compensate_spectra(result.spectra, result.series);
    if (!write) return;
    write_time_series_csv(result.series, options.out_dir / "timeseries.csv");
    for (const auto& s : result.spectra) write_spectrum_csv(s, options.out_dir / spectrum_filename(s.time));
  };
  const auto is_in = [](const std::vector<double>& v, double t) {
    return std::any_of(v.begin(), v.end(), [t](double x) { return std::abs(x - t) <= 1e-10 * std::max(1.0, std::abs(t)); });
  };

  try {
    for (double t : events) {
      sim.advance_to(t);
      if (is_in(sample_times, t)) {
        const auto s = sim.sample();
        result.series.add(s.t, s.e_kin, s.kappa_resolved);
        if (options.log) {
          std::ostringstream msg;
          msg << "t = " << s.t << "  steps = " << sim.steps() << "  E_kin = " << s.e_kin;
          options.log(msg.str());
        }
      }
      if (is_in(spectrum_times, t)) {
        auto spec = energy_spectrum(sim.field());
        spec.time = t;
        result.spectra.push_back(std::move(spec));
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    finish_outputs();
    std::ostringstream msg;
    msg << "simulation failed at t = " << sim.field().time() << " after " << sim.steps() << " steps: " << e.what();
    throw NumericalError(msg.str());
  }

  finish_outputs();
  if (write && config.output.checkpoint) write_checkpoint(sim.field(), options.out_dir / "final.chk");
  result.field = sim.field();
  result.steps = sim.steps();
  return result;
}

RunResult run_simulation(const RunConfig& config, const SimulationOptions& options) {
  return run_simulation(config, make_initial_field(config), options);
}

}  // namespace dgles
