#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "dgles/gas.hpp"
#include "dgles/solution_field.hpp"

namespace dgles {

/// Fourth-order, five-stage, 2N-storage Runge-Kutta scheme of Carpenter and Kennedy.
struct RKScheme {
  static constexpr int kStages = 5;
  std::array<double, kStages> a;
  std::array<double, kStages> b;
  std::array<double, kStages> c;

  static const RKScheme& carpenter_kennedy();
};

/// dudt = L(u, t).
using RhsFunction = std::function<void(std::span<const double> u, double t, std::span<double> dudt)>;
/// Adds a term to dudt given the stage solution (the relaxation filter).
using RhsAugment = std::function<void(std::span<const double> u, std::span<double> dudt)>;
/// Modifies the stage solution after each stage (e.g. hard filtering).
using StageHook = std::function<void(std::span<double> u)>;

/// Low-storage integrator; owns the two scratch registers.
class LowStorageRK {
public:
  explicit LowStorageRK(const RKScheme& scheme = RKScheme::carpenter_kennedy()) : scheme_(scheme) {}

  /// Advances u from t to t + dt. Throws NumericalError naming the stage
  /// if a non-finite value appears.
  void step(std::span<double> u, double t, double dt, const RhsFunction& rhs, const RhsAugment* filter_hook = nullptr,
            const StageHook* post_stage = nullptr);

private:
  RKScheme scheme_;
  std::vector<double> k_;
  std::vector<double> dudt_;
};

/// Advances a SolutionField by one step and updates its time.
void rk_step(SolutionField& field, double dt, LowStorageRK& integrator, const RhsFunction& rhs,
             const RhsAugment* filter_hook = nullptr, const StageHook* post_stage = nullptr);

/// CFL-limited step: CFL * min(dx_min / (N^2 (|v| + a)), dx_min^2 / (N^4 mu / rho)).
/// `extra_viscosity` (per node, may be empty) is added to mu.
double compute_dt(const SolutionField& field, const GasModel& gas, double cfl,
                  std::span<const double> extra_viscosity = {});

}  // namespace dgles
