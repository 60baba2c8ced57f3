#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dgles/fluxes.hpp"
#include "dgles/solution_field.hpp"

namespace dgles {

/// Per-node gradients of (u, v, w, T) from the BR1 lifting, in field node order.
struct GradientField {
  std::vector<NodeGradient> nodes;
};

/// Fills a per-node eddy viscosity (field node order) from the current state and its gradients.
using EddyViscosityFn =
    std::function<void(std::span<const double> u, const GradientField& grad, std::vector<double>& mu_t)>;

struct DgSettings {
  GasModel gas;
  FluxVariant variant = FluxVariant::l2roe;
  /// Adds the BR1 viscous terms. Requires gas.mu > 0 unless an eddy viscosity is set.
  bool include_viscous = false;
  EddyViscosityFn eddy_viscosity;
};

/// Per-element scratch of the volume kernel.
struct VolumeScratch {
  std::vector<double> q;
  std::vector<double> f;
  std::vector<double> acc;
};

/// Split-form DGSEM right-hand side on a periodic Cartesian mesh.
///
/// Volume terms use the kinetic-energy-preserving two-point flux; the
/// surface terms use the configured interface flux. Scratch buffers are
/// owned by the operator, so one instance must not be shared between
/// concurrent evaluations.
class DgOperator {
public:
  DgOperator(CartesianMesh mesh, std::shared_ptr<const ReferenceElement> ref, DgSettings settings);

  const DgSettings& settings() const { return settings_; }
  const CartesianMesh& mesh() const { return mesh_; }
  const ReferenceElement& ref() const { return *ref_; }

  /// dudt = -div F^a + div F^v for the nodal data `u` (SolutionField layout).
  void evaluate(std::span<const double> u, std::span<double> dudt);

  /// BR1 lifted gradients of velocity and temperature.
  void gradients(std::span<const double> u, GradientField& out);

  /// The eddy viscosity from the most recent evaluate() (empty if none is configured).
  const std::vector<double>& last_eddy_viscosity() const { return mu_t_; }

private:
  void compute_primitives(std::span<const double> u);
  void lift_gradients(GradientField& out);
  void add_advection(std::span<double> dudt);
  void add_viscous(std::span<const double> u, std::span<double> dudt);

  CartesianMesh mesh_;
  std::shared_ptr<const ReferenceElement> ref_;
  DgSettings settings_;
  int n_;
  int nodes_per_elem_;
  std::vector<PrimitiveState> prim_;
  std::vector<double> face_left_;   // F* - F(U_L) on each element's + faces
  std::vector<double> face_right_;  // F* - F(U_R) on the same faces
  GradientField grad_;
  std::vector<double> mu_t_;
  std::vector<double> viscous_flux_;
  VolumeScratch scratch_;  // per node, 3 directions x 5 variables
};

GradientField br1_gradients(const SolutionField& field, const GasModel& gas);

SolutionField dg_rhs(const SolutionField& field, const GasModel& gas, FluxVariant variant, bool include_viscous);

}  // namespace dgles
