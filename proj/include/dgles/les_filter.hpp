#pragma once

#include <iosfwd>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "dgles/dg_operator.hpp"
#include "dgles/solution_field.hpp"

namespace dgles {

/// One row of the optimized kernel table: modal diagonal plus the strength
/// constants for decaying turbulence (c) and infinite Reynolds number (c_inf).
struct FilterPreset {
  int degree = 0;
  std::vector<double> sigma;
  double c = 0.0;
  double c_inf = 0.0;
};

/// Parses the plain-text preset format: `N sigma_0 ... sigma_N c c_inf` per
/// line, '#' starts a comment.
std::vector<FilterPreset> parse_presets(std::istream& in);
void write_preset(std::ostream& out, const FilterPreset& preset);

/// Table compiled in from data/filter_presets.txt (degrees 3 to 10).
const std::vector<FilterPreset>& shipped_presets();
const FilterPreset& preset_for_degree(int degree);

/// Modal filter K = V diag(sigma) V^-1, applied line by line in 3D.
class FilterKernel {
public:
  FilterKernel(std::vector<double> sigma, double c, std::shared_ptr<const ReferenceElement> ref,
               double l_ref = 2.0 * std::numbers::pi);

  int degree() const { return ref_->degree(); }
  const std::vector<double>& sigma() const { return sigma_; }
  double c() const { return c_; }
  double l_ref() const { return l_ref_; }
  const Eigen::MatrixXd& nodal() const { return k_; }
  const ReferenceElement& ref() const { return *ref_; }

  /// sigma_0 == 1 and sigma_N == 0.
  bool is_les_kernel() const;

  /// out = (K x K x K) in for one element with `ncomp` interleaved components per node.
  void apply(std::span<const double> in, std::span<double> out, int ncomp) const;

private:
  std::shared_ptr<const ReferenceElement> ref_;
  std::vector<double> sigma_;
  double c_;
  double l_ref_;
  Eigen::MatrixXd k_;
  std::vector<double> k_flat_;
};

FilterKernel build_filter_kernel(std::vector<double> sigma, double c, std::shared_ptr<const ReferenceElement> ref,
                                 double l_ref = 2.0 * std::numbers::pi);

/// Applies a row-major n x n matrix along all three directions of one element.
void apply_tensor_matrix(std::span<const double> matrix, int n, int ncomp, std::span<const double> in,
                         std::span<double> out);

/// High-pass part v - L v of nodal velocities (3 interleaved components),
/// where L zeroes every tensor mode with a 1D index equal to N.
void test_filter_highpass(const ReferenceElement& ref, std::span<const double> velocity, std::span<double> out);

/// Kinetic energy of the highest mode per element: sum |v~|^2 J w_p w_q w_r.
std::vector<double> highest_mode_energy(const SolutionField& field);

/// Smagorinsky-style width (element volume)^(1/3) / (N + 1).
double filter_width(const CartesianMesh& mesh, int degree);

/// Relaxation rate per element, c sqrt(E / L_ref) / delta^2.
std::vector<double> filter_strength(std::span<const double> energy, const FilterKernel& kernel, double delta);

/// Per-element relaxation rates, computed once per time step and reused by all stages.
struct FilterStrengthField {
  std::vector<double> sigma_f;
  std::vector<double> energy;
  double delta = 0.0;
  bool stale = true;

  void update(const SolutionField& field, const FilterKernel& kernel);
};

/// dudt += sigma_F (K u - u) element by element on all five conserved variables.
void apply_relaxation(std::span<double> dudt, std::span<const double> u, const CartesianMesh& mesh,
                      const FilterKernel& kernel, std::span<const double> sigma_f);

/// u = K u on every element (classical per-stage filtering).
void apply_hard_filter(std::span<double> u, const CartesianMesh& mesh, const FilterKernel& kernel);

/// mu_t = rho (C_s delta)^2 |S| with |S| = sqrt(2 S_ij S_ij), per node.
std::vector<double> smagorinsky_viscosity(const GradientField& grad, std::span<const double> u, double c_s,
                                          const CartesianMesh& mesh, int degree);

/// Eddy-viscosity hook for DgOperator.
EddyViscosityFn make_smagorinsky_model(double c_s, const CartesianMesh& mesh, int degree);

}  // namespace dgles
