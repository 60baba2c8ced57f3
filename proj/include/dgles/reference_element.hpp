#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

namespace dgles {

/// Legendre polynomial P_n and its derivative at x.
std::pair<double, double> legendre_and_derivative(int n, double x);

/// Orthonormal Legendre basis function sqrt(n + 1/2) * P_n(x).
double orthonormal_legendre(int n, double x);

/// Legendre-Gauss-Lobatto nodes (ascending) and weights for degree N >= 1.
std::pair<std::vector<double>, std::vector<double>> lgl_nodes_weights(int degree);

/// Vandermonde V_ij = phi_j(x_i) in the orthonormal Legendre basis, and its inverse.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> legendre_vandermonde(int degree,
                                                                 std::span<const double> nodes);

/// Lagrange derivative matrix D_ij = l_j'(x_i) on distinct nodes.
Eigen::MatrixXd derivative_matrix(std::span<const double> nodes);

/// Matrix evaluating the Lagrange interpolant on `nodes` at `points`.
Eigen::MatrixXd interpolation_matrix(std::span<const double> nodes, std::span<const double> points);

/// n points at the cell centres of n equal sub-intervals of [-1, 1].
std::vector<double> equispaced_cell_centres(int n);

struct DegreeChangeMatrices {
  /// (N_hi+1) x (N_lo+1): evaluates degree-N_lo nodal data on the degree-N_hi LGL nodes.
  Eigen::MatrixXd interp;
  /// (N_lo+1) x (N_hi+1): L2 projection by modal truncation.
  Eigen::MatrixXd project;
};

DegreeChangeMatrices change_degree_matrices(int degree_hi, int degree_lo);

/// One-dimensional LGL collocation element. Immutable after construction.
class ReferenceElement {
public:
  explicit ReferenceElement(int degree);

  int degree() const { return degree_; }
  int nodes_per_dir() const { return degree_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const Eigen::MatrixXd& derivative() const { return d_; }
  const Eigen::MatrixXd& vandermonde() const { return v_; }
  const Eigen::MatrixXd& vandermonde_inv() const { return vinv_; }

  /// Lumped mass entry M_ii = w_i.
  double mass(int i) const { return weights_[static_cast<std::size_t>(i)]; }

  /// Row-major copy of D for the inner kernels.
  const std::vector<double>& derivative_row_major() const { return d_flat_; }

  /// Nodal matrix V diag(sigma) V^-1 for a modal diagonal.
  Eigen::MatrixXd nodal_filter(std::span<const double> sigma) const;

private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Eigen::MatrixXd d_;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd vinv_;
  std::vector<double> d_flat_;
};

}  // namespace dgles
