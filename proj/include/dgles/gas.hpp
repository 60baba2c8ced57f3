#pragma once

#include <array>
#include <cmath>

#include "dgles/solution_field.hpp"

namespace dgles {

/// Calorically perfect gas with constant transport properties.
struct GasModel {
  double kappa = 1.4;
  double R = 1.0;
  double mu = 0.0;
  double Pr = 0.72;

  double cv() const { return R / (kappa - 1.0); }
  double cp() const { return kappa * cv(); }
  /// Heat conductivity c_p mu / Pr for a given (possibly eddy-augmented) viscosity.
  double conductivity(double viscosity) const { return cp() * viscosity / Pr; }

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

struct PrimitiveState {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double p = 0.0;
  double T = 0.0;
  double e = 0.0;  // specific total energy
  double h = 0.0;  // e + p / rho

  double velocity(int direction) const { return direction == 0 ? u : (direction == 1 ? v : w); }
  double speed2() const { return u * u + v * v + w * w; }
};

/// Throws InvalidStateError (with the given location) if rho <= 0 or p <= 0.
PrimitiveState cons_to_prim(const ConservedState& u, const GasModel& gas, std::int64_t element = -1,
                            std::int64_t node = -1);

ConservedState prim_to_cons(double rho, const std::array<double, 3>& velocity, double p, const GasModel& gas);

inline double sound_speed(const PrimitiveState& s, const GasModel& gas) {
  return std::sqrt(gas.kappa * s.p / s.rho);
}

/// Checks rho > 0 and p > 0 on every node; throws InvalidStateError with the location otherwise.
void check_positivity(const SolutionField& field, const GasModel& gas);

}  // namespace dgles
