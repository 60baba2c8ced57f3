#pragma once

#include <cstdint>
#include <filesystem>

#include "dgles/config.hpp"
#include "dgles/diagnostics.hpp"
#include "dgles/gas.hpp"
#include "dgles/solution_field.hpp"

namespace dgles {

/// Taylor-Green vortex with velocity amplitude V0 = 1 and Mach number V0 / a0.
/// Uniform temperature; needs a cubic (2 pi)^3 box.
SolutionField init_tgv(const CartesianMesh& mesh, int degree, const GasModel& gas, double mach);

struct DhitSpec {
  double slope = -5.0 / 3.0;
  int k_min = 1;
  int k_max = 16;
  double mach = 0.1;
  std::uint64_t seed = 1;
};

/// Random solenoidal velocity with shell energy proportional to k^slope on
/// [k_min, k_max], normalised to u_rms = 1 (total kinetic energy 3/2 per unit mass).
/// Uniform density 1 and pressure 1 / (kappa M^2). Evaluated at the LGL nodes by
/// direct Fourier summation.
SolutionField init_dhit(const CartesianMesh& mesh, int degree, const GasModel& gas, const DhitSpec& spec);

SolutionField init_uniform(const CartesianMesh& mesh, int degree, const GasModel& gas, double rho,
                           const std::array<double, 3>& velocity, double p);

/// Builds the initial field described by a run configuration.
SolutionField make_initial_field(const RunConfig& config);

/// Large-eddy turnover time L_int / u' from a spectrum, with
/// u'^2 = (2/3) sum E(k) and L_int = pi / (2 u'^2) sum E(k) / k.
double eddy_turnover_time(const Spectrum& spectrum);

}  // namespace dgles
