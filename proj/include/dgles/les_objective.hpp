#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dgles/config.hpp"
#include "dgles/diagnostics.hpp"
#include "dgles/solution_field.hpp"

namespace dgles {

/// Everything one objective evaluation needs besides the parameter vector.
struct ObjectiveSetup {
  /// Run template; its model block is replaced by the candidate kernel.
  RunConfig config;
  SolutionField initial;
  /// Reference values at `times` (E_kin and resolved dissipation).
  std::vector<double> times;
  std::vector<double> e_ref;
  std::vector<double> kappa_ref;
  std::function<void(const std::string&)> log;
};

/// Kernel diagonal (1, sigma_1, ..., sigma_{N-1}, 0) from x = (c, sigma_1, ..., sigma_{N-1}).
std::vector<double> kernel_from_params(std::span<const double> x);

/// sum_i (E_ref(t_i) - E_LES(t_i))^2 + (kappa_ref(t_i) - kappa_LES(t_i))^2.
/// A failed simulation yields +inf.
double les_objective(std::span<const double> x, const ObjectiveSetup& setup);

/// Reference values at the requested times by linear interpolation.
/// Throws ConfigError for times outside the series.
void interpolate_reference(const ReferenceSeries& series, std::span<const double> times, std::vector<double>& e_ref,
                           std::vector<double>& kappa_ref);

/// Default checkpoint times: three points evenly spaced over (t0, t0 + window].
std::vector<double> default_objective_times(double t0, double window);

/// L2 projection of a fine field onto degree `coarse_degree` on a coarser
/// mesh whose cells are unions of fine cells (integer ratio per direction).
SolutionField filter_reference_to_les(const SolutionField& fine, int coarse_degree, std::array<int, 3> coarse_cells);

}  // namespace dgles
