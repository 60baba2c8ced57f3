#include "dgles/gas.hpp"

#include <string>

#include "dgles/errors.hpp"

namespace dgles {

void GasModel::validate() const {
  if (!(kappa > 1.0)) throw ConfigError("gas.kappa must be > 1");
  if (!(R > 0.0)) throw ConfigError("gas.R must be > 0");
  if (!(mu >= 0.0)) throw ConfigError("gas.mu must be >= 0");
  if (!(Pr > 0.0)) throw ConfigError("gas.Pr must be > 0");
}

PrimitiveState cons_to_prim(const ConservedState& u, const GasModel& gas, std::int64_t element,
                            std::int64_t node) {
  PrimitiveState s;
  s.rho = u[0];
  if (!(s.rho > 0.0) || !std::isfinite(s.rho))
    throw InvalidStateError("non-positive density " + std::to_string(s.rho), element, node);
  const double inv = 1.0 / s.rho;
  s.u = u[1] * inv;
  s.v = u[2] * inv;
  s.w = u[3] * inv;
  s.e = u[4] * inv;
  s.p = (gas.kappa - 1.0) * s.rho * (s.e - 0.5 * s.speed2());
  if (!(s.p > 0.0) || !std::isfinite(s.p))
    throw InvalidStateError("non-positive pressure " + std::to_string(s.p), element, node);
  s.T = s.p / (s.rho * gas.R);
  s.h = s.e + s.p * inv;
  return s;
}

ConservedState prim_to_cons(double rho, const std::array<double, 3>& velocity, double p, const GasModel& gas) {
  const double ke = 0.5 * (velocity[0] * velocity[0] + velocity[1] * velocity[1] + velocity[2] * velocity[2]);
  return {rho, rho * velocity[0], rho * velocity[1], rho * velocity[2], p / (gas.kappa - 1.0) + rho * ke};
}

void check_positivity(const SolutionField& field, const GasModel& gas) {
  for (int e = 0; e < field.num_elements(); ++e)
    for (int n = 0; n < field.nodes_per_element(); ++n) cons_to_prim(field.state(e, n), gas, e, n);
}

}  // namespace dgles
