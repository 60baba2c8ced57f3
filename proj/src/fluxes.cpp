#include "dgles/fluxes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

FluxVariant parse_flux_variant(std::string_view name) {
  if (name == "kep_central") return FluxVariant::kep_central;
  if (name == "roe") return FluxVariant::roe;
  if (name == "l2roe") return FluxVariant::l2roe;
  throw ConfigError("scheme.flux must be one of kep_central, roe, l2roe (got '" + std::string(name) + "')");
}

std::string_view to_string(FluxVariant variant) {
  switch (variant) {
    case FluxVariant::kep_central: return "kep_central";
    case FluxVariant::roe: return "roe";
    case FluxVariant::l2roe: return "l2roe";
  }
  return "unknown";
}

Flux euler_flux(const ConservedState& u, int direction, const GasModel& gas) {
  const auto s = cons_to_prim(u, gas);
  return detail::kep_flux(s, s, detail::kAxis[direction]);
}

Flux two_point_kep_flux(const ConservedState& left, const ConservedState& right, int direction,
                        const GasModel& gas) {
  return detail::kep_flux(cons_to_prim(left, gas), cons_to_prim(right, gas), detail::kAxis[direction]);
}

Flux roe_dissipation(const PrimitiveState& l, const PrimitiveState& r, const Vec3& n, bool low_mach_fix,
                     const GasModel& gas) {
  const double sl = std::sqrt(l.rho);
  const double sr = std::sqrt(r.rho);
  const double inv = 1.0 / (sl + sr);
  const double rho = sl * sr;
  const double u = (sl * l.u + sr * r.u) * inv;
  const double v = (sl * l.v + sr * r.v) * inv;
  const double w = (sl * l.w + sr * r.w) * inv;
  const double h = (sl * l.h + sr * r.h) * inv;
  const double q2 = u * u + v * v + w * w;
  const double c2 = (gas.kappa - 1.0) * (h - 0.5 * q2);
  if (!(c2 > 0.0)) throw InvalidStateError("Roe average has non-positive sound speed squared");
  const double c = std::sqrt(c2);
  const double un = u * n[0] + v * n[1] + w * n[2];

  const double drho = r.rho - l.rho;
  const double dp = r.p - l.p;
  const double du = r.u - l.u;
  const double dv = r.v - l.v;
  const double dw = r.w - l.w;
  const double dun = du * n[0] + dv * n[1] + dw * n[2];
  // Tangential velocity jump.
  const double dut = du - dun * n[0];
  const double dvt = dv - dun * n[1];
  const double dwt = dw - dun * n[2];

  double dun_acoustic = dun;
  if (low_mach_fix) {
    const double mach_l = std::sqrt(l.speed2()) / sound_speed(l, gas);
    const double mach_r = std::sqrt(r.speed2()) / sound_speed(r, gas);
    dun_acoustic *= std::min(1.0, std::max(mach_l, mach_r));
  }

  double lam_minus = std::abs(un - c);
  double lam_plus = std::abs(un + c);
  const double lam_mid = std::abs(un);
  // Harten-Hyman type smoothing of the acoustic eigenvalues.
  const double delta = 0.05 * (std::sqrt(q2) + c);
  if (lam_minus < delta) lam_minus = (lam_minus * lam_minus + delta * delta) / (2.0 * delta);
  if (lam_plus < delta) lam_plus = (lam_plus * lam_plus + delta * delta) / (2.0 * delta);

  const double a_minus = lam_minus * (dp - rho * c * dun_acoustic) / (2.0 * c2);
  const double a_plus = lam_plus * (dp + rho * c * dun_acoustic) / (2.0 * c2);
  const double a_entropy = lam_mid * (drho - dp / c2);
  const double a_shear = lam_mid * rho;

  Flux d;
  d[0] = a_minus + a_entropy + a_plus;
  d[1] = a_minus * (u - c * n[0]) + a_entropy * u + a_plus * (u + c * n[0]) + a_shear * dut;
  d[2] = a_minus * (v - c * n[1]) + a_entropy * v + a_plus * (v + c * n[1]) + a_shear * dvt;
  d[3] = a_minus * (w - c * n[2]) + a_entropy * w + a_plus * (w + c * n[2]) + a_shear * dwt;
  d[4] = a_minus * (h - c * un) + a_entropy * 0.5 * q2 + a_plus * (h + c * un) +
         a_shear * (u * dut + v * dvt + w * dwt);
  for (auto& x : d) x *= 0.5;
  return d;
}

Flux riemann_flux(const ConservedState& left, const ConservedState& right, const Vec3& normal,
                  FluxVariant variant, const GasModel& gas) {
  const auto l = cons_to_prim(left, gas);
  const auto r = cons_to_prim(right, gas);
  Flux f = detail::kep_flux(l, r, normal);
  if (variant == FluxVariant::kep_central) return f;
  const Flux d = roe_dissipation(l, r, normal, variant == FluxVariant::l2roe, gas);
  for (int v = 0; v < kNumVars; ++v) f[static_cast<std::size_t>(v)] -= d[static_cast<std::size_t>(v)];
  return f;
}

Flux viscous_flux(const ConservedState& u, const NodeGradient& g, const GasModel& gas, int l,
                  double extra_viscosity) {
  const double mu = gas.mu + extra_viscosity;
  const double lambda = gas.conductivity(mu);
  const double inv = 1.0 / u[0];
  const double vel[3] = {u[1] * inv, u[2] * inv, u[3] * inv};
  const auto grad = [&g](int q, int d) { return g[static_cast<std::size_t>(3 * q + d)]; };
  const double div = grad(0, 0) + grad(1, 1) + grad(2, 2);
  double tau[3];
  for (int k = 0; k < 3; ++k) {
    tau[k] = mu * (grad(k, l) + grad(l, k));
    if (k == l) tau[k] -= mu * (2.0 / 3.0) * div;
  }
  const double q = -lambda * grad(3, l);
  return {0.0, tau[0], tau[1], tau[2], tau[0] * vel[0] + tau[1] * vel[1] + tau[2] * vel[2] - q};
}

}  // namespace dgles
