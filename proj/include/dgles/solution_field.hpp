#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dgles/mesh.hpp"
#include "dgles/reference_element.hpp"

namespace dgles {

inline constexpr int kNumVars = 5;

/// Conserved variables (rho, rho u, rho v, rho w, rho e) at one node.
using ConservedState = std::array<double, kNumVars>;

/// Nodal conserved variables on every element of a CartesianMesh.
///
/// Storage is element-major; inside an element nodes are ordered
/// lexicographically with i (the x index) fastest, and the five variables
/// of a node are contiguous. The checkpoint format relies on this layout.
class SolutionField {
public:
  SolutionField(CartesianMesh mesh, int degree);
  SolutionField(CartesianMesh mesh, std::shared_ptr<const ReferenceElement> ref);

  const CartesianMesh& mesh() const { return mesh_; }
  const ReferenceElement& ref() const { return *ref_; }
  std::shared_ptr<const ReferenceElement> ref_ptr() const { return ref_; }
  int degree() const { return ref_->degree(); }
  int nodes_per_dir() const { return ref_->nodes_per_dir(); }
  int nodes_per_element() const { return nodes_per_elem_; }
  int num_elements() const { return mesh_.num_elements(); }
  std::size_t num_nodes() const { return static_cast<std::size_t>(num_elements()) * static_cast<std::size_t>(nodes_per_elem_); }

  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::span<double> element(int e) {
    return std::span<double>(data_).subspan(element_offset(e), element_size());
  }
  std::span<const double> element(int e) const {
    return std::span<const double>(data_).subspan(element_offset(e), element_size());
  }

  double* node(int e, int local) { return data_.data() + element_offset(e) + static_cast<std::size_t>(local) * kNumVars; }
  const double* node(int e, int local) const { return data_.data() + element_offset(e) + static_cast<std::size_t>(local) * kNumVars; }

  ConservedState state(int e, int local) const;
  void set_state(int e, int local, const ConservedState& u);

  int local_index(int i, int j, int k) const { return i + nodes_per_dir() * (j + nodes_per_dir() * k); }

  /// Physical coordinates of a node.
  std::array<double, 3> node_position(int e, int i, int j, int k) const;

  /// Fill every node from a function of position.
  void fill(const std::function<ConservedState(const std::array<double, 3>&)>& f);

  std::size_t element_size() const { return static_cast<std::size_t>(nodes_per_elem_) * kNumVars; }
  std::size_t element_offset(int e) const { return static_cast<std::size_t>(e) * element_size(); }

private:
  CartesianMesh mesh_;
  std::shared_ptr<const ReferenceElement> ref_;
  int nodes_per_elem_;
  std::vector<double> data_;
  double time_ = 0.0;
};

/// Sum over elements and nodes of f(U) * J * w_p * w_q * w_r.
double global_integral(const SolutionField& field,
                       const std::function<double(const ConservedState&)>& integrand);

/// Component-wise global integrals of all five conserved variables.
std::array<double, kNumVars> conserved_totals(const SolutionField& field);

void write_checkpoint(const SolutionField& field, const std::filesystem::path& path);
SolutionField read_checkpoint(const std::filesystem::path& path);

}  // namespace dgles
