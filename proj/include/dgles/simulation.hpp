#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgles/config.hpp"
#include "dgles/dg_operator.hpp"
#include "dgles/diagnostics.hpp"
#include "dgles/les_filter.hpp"
#include "dgles/time_integrator.hpp"

namespace dgles {

/// Solver state for one run: the field, the spatial operator and the LES model.
class Simulation {
public:
  Simulation(const RunConfig& config, SolutionField initial);

  SolutionField& field() { return field_; }
  const SolutionField& field() const { return field_; }
  const RunConfig& config() const { return config_; }
  const FilterKernel* kernel() const { return kernel_ ? &*kernel_ : nullptr; }
  long steps() const { return steps_; }

  /// Step size from the CFL condition, or the fixed step if one is configured.
  double next_dt() const;

  /// One Runge-Kutta step; the filter strengths are refreshed first.
  void step(double dt);

  /// Steps until field time equals t_target exactly, shortening the last step.
  void advance_to(double t_target);

  /// Kinetic energy and (for mu > 0) resolved dissipation of the current field.
  TimeSample sample() const;

private:
  RunConfig config_;
  SolutionField field_;
  DgOperator op_;
  LowStorageRK integrator_;
  std::optional<FilterKernel> kernel_;
  FilterStrengthField strengths_;
  long steps_ = 0;
};

struct SimulationOptions {
  /// Output directory; empty disables file output.
  std::filesystem::path out_dir;
  /// Sample at multiples of output.cadence (and at the end time).
  bool use_cadence = true;
  /// Additional sample times.
  std::vector<double> extra_samples;
  std::function<void(const std::string&)> log;
};

struct RunResult {
  SolutionField field;
  TimeSeries series;
  std::vector<Spectrum> spectra;
  long steps = 0;
};

/// Runs from `initial` to config.time.end. Writes timeseries.csv, one
/// spectrum file per requested time and final.chk into options.out_dir.
/// On failure the partial time series is written and a NumericalError with
/// the failure time is thrown.
RunResult run_simulation(const RunConfig& config, SolutionField initial, const SimulationOptions& options = {});
RunResult run_simulation(const RunConfig& config, const SimulationOptions& options = {});

/// Compensates each spectrum with the numerical dissipation of the series,
/// linearly interpolated to the spectrum time (nearest interior sample at the
/// ends of the series). Spectra whose dissipation is
/// not positive stay uncompensated.
void compensate_spectra(std::vector<Spectrum>& spectra, const TimeSeries& series);

}  // namespace dgles
