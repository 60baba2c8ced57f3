#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dgles/dg_operator.hpp"
#include "dgles/solution_field.hpp"

namespace dgles {

struct TimeSample {
  double t = 0.0;
  double e_kin = 0.0;
  double kappa_resolved = 0.0;
  /// -dE_kin/dt; NaN on the first and last sample.
  double eps_numerical = 0.0;
};

class TimeSeries {
public:
  /// Appends a sample; times must be strictly increasing.
  void add(double t, double e_kin, double kappa_resolved);
  /// Recomputes eps_numerical from the kinetic energy samples.
  void update_dissipation();

  const std::vector<TimeSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }

private:
  std::vector<TimeSample> samples_;
};

/// Volume average of rho |v|^2 / 2.
double integral_kinetic_energy(const SolutionField& field);

/// 2 nu int S_ij S_ij dOmega with nu = mu / rho evaluated at the nodes.
double resolved_dissipation(const SolutionField& field, const GradientField& grad, const GasModel& gas);
double resolved_dissipation(const SolutionField& field, const GasModel& gas);

/// -dE/dt by three-point differences on interior samples; the first and last
/// entries are NaN. Needs at least three samples.
std::vector<double> numerical_dissipation(std::span<const double> t, std::span<const double> e_kin);

struct Spectrum {
  double time = 0.0;
  std::vector<int> k;              // shells 1..k_max
  std::vector<double> energy;      // E(k)
  std::vector<double> compensated; // E(k) eps^(-2/3) k^(5/3), empty until compensated
  double mean_energy = 0.0;        // content of the k = 0 mode
};

/// Velocity on a uniform grid with N+1 cell-centred points per element and
/// direction; returns (cells (N+1))^3 x 3 values, x fastest.
std::vector<double> sample_velocity_uniform(const SolutionField& field);

/// Shell-binned kinetic energy spectrum of the velocity field. Needs a cubic
/// domain with equal cell counts.
Spectrum energy_spectrum(const SolutionField& field);
/// Same binning for a velocity field already on a uniform grid of side `points`.
Spectrum energy_spectrum_uniform(std::span<const double> velocity, int points);

Spectrum kolmogorov_compensate(Spectrum spectrum, double eps);

/// Least-squares slope of log E against log k over shells [k_lo, k_hi].
double loglog_slope(const Spectrum& spectrum, int k_lo, int k_hi);
/// Mean compensated value over shells [k_lo, k_hi].
double mean_compensated(const Spectrum& spectrum, int k_lo, int k_hi);

void write_time_series_csv(const TimeSeries& series, const std::filesystem::path& path);
void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);
std::string spectrum_filename(double time);

struct ReferenceSeries {
  std::vector<double> t;
  std::vector<double> e_kin;
  std::vector<double> kappa;
};

/// Reads `t,e_kin,kappa` (or the time-series output, using kappa_resolved).
ReferenceSeries read_reference_series(const std::filesystem::path& path);

}  // namespace dgles
