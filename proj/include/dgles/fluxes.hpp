#pragma once

#include <array>
#include <string_view>

#include "dgles/gas.hpp"

namespace dgles {

using Flux = std::array<double, kNumVars>;
using Vec3 = std::array<double, 3>;

enum class FluxVariant { kep_central, roe, l2roe };

FluxVariant parse_flux_variant(std::string_view name);
std::string_view to_string(FluxVariant variant);

/// Velocity and temperature gradients at one node: entry [3 * q + d] is
/// d(q)/dx_d with q = 0..3 for (u, v, w, T).
using NodeGradient = std::array<double, 12>;

/// Euler flux in Cartesian direction 0, 1 or 2.
Flux euler_flux(const ConservedState& u, int direction, const GasModel& gas);

/// Kinetic-energy-preserving two-point flux built from arithmetic means of
/// rho, velocity, p and h (Pirozzoli split form).
Flux two_point_kep_flux(const ConservedState& left, const ConservedState& right, int direction,
                        const GasModel& gas);

/// Interface flux for a unit normal pointing from `left` to `right`.
Flux riemann_flux(const ConservedState& left, const ConservedState& right, const Vec3& normal,
                  FluxVariant variant, const GasModel& gas);

/// The matrix dissipation 1/2 |A_Roe| (U_R - U_L) subtracted by the roe and l2roe variants.
Flux roe_dissipation(const PrimitiveState& left, const PrimitiveState& right, const Vec3& normal,
                     bool low_mach_fix, const GasModel& gas);

/// Viscous flux in direction l from the stress tensor and Fourier heat flux.
/// `extra_viscosity` is added to gas.mu (eddy viscosity).
Flux viscous_flux(const ConservedState& u, const NodeGradient& grad, const GasModel& gas, int direction,
                  double extra_viscosity = 0.0);

namespace detail {

/// Split-form flux from primitive states; the kernels call this directly.
inline Flux kep_flux(const PrimitiveState& a, const PrimitiveState& b, const Vec3& n) {
  const double rho = 0.5 * (a.rho + b.rho);
  const double u = 0.5 * (a.u + b.u);
  const double v = 0.5 * (a.v + b.v);
  const double w = 0.5 * (a.w + b.w);
  const double p = 0.5 * (a.p + b.p);
  const double h = 0.5 * (a.h + b.h);
  const double mass = rho * (u * n[0] + v * n[1] + w * n[2]);
  return {mass, mass * u + p * n[0], mass * v + p * n[1], mass * w + p * n[2], mass * h};
}

inline constexpr Vec3 kAxis[3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};

}  // namespace detail

}  // namespace dgles
