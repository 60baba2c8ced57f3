#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace dgles {

/// Face numbering: 0 = -x, 1 = +x, 2 = -y, 3 = +y, 4 = -z, 5 = +z.
inline constexpr int opposite_face(int face) { return face ^ 1; }

/// Periodic box of equal axis-aligned hexahedra. Element index is
/// ex + cx * (ey + cy * ez).
class CartesianMesh {
public:
  CartesianMesh(std::array<int, 3> cells_per_dir, std::array<double, 3> domain_lengths);

  const std::array<int, 3>& cells() const { return cells_; }
  const std::array<double, 3>& lengths() const { return lengths_; }
  const std::array<double, 3>& dx() const { return dx_; }
  int num_elements() const { return cells_[0] * cells_[1] * cells_[2]; }

  /// Jacobian of the affine reference map, dx*dy*dz/8.
  double jacobian() const { return dx_[0] * dx_[1] * dx_[2] / 8.0; }
  double element_volume() const { return dx_[0] * dx_[1] * dx_[2]; }
  double volume() const { return lengths_[0] * lengths_[1] * lengths_[2]; }
  double min_dx() const;

  int neighbor(int element, int face) const { return neighbors_[static_cast<std::size_t>(element) * 6 + static_cast<std::size_t>(face)]; }
  std::array<int, 3> element_coords(int element) const;
  int element_index(int ex, int ey, int ez) const { return ex + cells_[0] * (ey + cells_[1] * ez); }
  /// Lower corner of an element in physical space (domain starts at the origin).
  std::array<double, 3> element_origin(int element) const;

  bool is_cubic() const;

private:
  std::array<int, 3> cells_;
  std::array<double, 3> lengths_;
  std::array<double, 3> dx_;
  std::vector<int> neighbors_;
};

CartesianMesh build_mesh(std::array<int, 3> cells_per_dir, std::array<double, 3> domain_lengths);

}  // namespace dgles
