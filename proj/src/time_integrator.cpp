#include "dgles/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

const RKScheme& RKScheme::carpenter_kennedy() {
  static const RKScheme scheme{
      {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
       -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0},
      {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0, 1720146321549.0 / 2090206949498.0,
       3134564353537.0 / 4481467310338.0, 2277821191437.0 / 14882151754819.0},
      {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
       2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0}};
  return scheme;
}

void LowStorageRK::step(std::span<double> u, double t, double dt, const RhsFunction& rhs,
                        const RhsAugment* filter_hook, const StageHook* post_stage) {
  if (!(dt > 0.0)) throw NumericalError("time step must be positive, got " + std::to_string(dt));
  k_.assign(u.size(), 0.0);
  dudt_.resize(u.size());
  for (int s = 0; s < RKScheme::kStages; ++s) {
    const auto us = static_cast<std::size_t>(s);
    rhs(u, t + scheme_.c[us] * dt, dudt_);
    if (filter_hook != nullptr) (*filter_hook)(u, dudt_);
    const double a = scheme_.a[us];
    const double b = scheme_.b[us];
    bool finite = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      k_[i] = a * k_[i] + dt * dudt_[i];
      const double inc = b * k_[i];
      if (inc != 0.0) u[i] += inc;
      finite = finite && std::isfinite(u[i]);
    }
    if (post_stage != nullptr) {
      (*post_stage)(u);
      finite = std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
    }
    if (!finite) throw NumericalError("non-finite solution after Runge-Kutta stage " + std::to_string(s + 1));
  }
}

void rk_step(SolutionField& field, double dt, LowStorageRK& integrator, const RhsFunction& rhs,
             const RhsAugment* filter_hook, const StageHook* post_stage) {
  integrator.step(field.data(), field.time(), dt, rhs, filter_hook, post_stage);
  field.set_time(field.time() + dt);
}

double compute_dt(const SolutionField& field, const GasModel& gas, double cfl, std::span<const double> extra_viscosity) {
  if (!(cfl > 0.0)) throw ConfigError("time.cfl must be > 0");
  const double n = field.degree();
  const double dx = field.mesh().min_dx();
  double max_speed = 0.0;
  double max_nu = 0.0;
  for (int e = 0; e < field.num_elements(); ++e) {
    for (int i = 0; i < field.nodes_per_element(); ++i) {
      const auto s = cons_to_prim(field.state(e, i), gas, e, i);
      const double lam = std::sqrt(s.speed2()) + sound_speed(s, gas);
      if (!std::isfinite(lam)) throw InvalidStateError("non-finite wave speed", e, i);
      max_speed = std::max(max_speed, lam);
      double mu = gas.mu;
      if (!extra_viscosity.empty())
        mu += extra_viscosity[static_cast<std::size_t>(e) * static_cast<std::size_t>(field.nodes_per_element()) + static_cast<std::size_t>(i)];
      max_nu = std::max(max_nu, mu / s.rho);
    }
  }
  double dt = cfl * dx / (n * n * max_speed);
  if (max_nu > 0.0) dt = std::min(dt, cfl * dx * dx / (n * n * n * n * max_nu));
  return dt;
}

}  // namespace dgles
