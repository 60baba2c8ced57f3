#include "dgles/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

CartesianMesh::CartesianMesh(std::array<int, 3> cells_per_dir, std::array<double, 3> domain_lengths)
    : cells_(cells_per_dir), lengths_(domain_lengths) {
  for (int d = 0; d < 3; ++d) {
    if (cells_[d] < 1) throw ConfigError("mesh.cells must be >= 1 in every direction");
    if (!(lengths_[d] > 0.0) || !std::isfinite(lengths_[d]))
      throw ConfigError("mesh.lengths must be positive in every direction");
    dx_[d] = lengths_[d] / cells_[d];
  }
  neighbors_.resize(static_cast<std::size_t>(num_elements()) * 6);
  for (int e = 0; e < num_elements(); ++e) {
    const auto c = element_coords(e);
    for (int face = 0; face < 6; ++face) {
      auto n = c;
      const int d = face / 2;
      const int step = (face % 2 == 0) ? -1 : 1;
      n[d] = (n[d] + step + cells_[d]) % cells_[d];
      neighbors_[static_cast<std::size_t>(e) * 6 + static_cast<std::size_t>(face)] =
          element_index(n[0], n[1], n[2]);
    }
  }
}

double CartesianMesh::min_dx() const { return std::min({dx_[0], dx_[1], dx_[2]}); }

std::array<int, 3> CartesianMesh::element_coords(int element) const {
  return {element % cells_[0], (element / cells_[0]) % cells_[1], element / (cells_[0] * cells_[1])};
}

std::array<double, 3> CartesianMesh::element_origin(int element) const {
  const auto c = element_coords(element);
  return {c[0] * dx_[0], c[1] * dx_[1], c[2] * dx_[2]};
}

bool CartesianMesh::is_cubic() const {
  return cells_[0] == cells_[1] && cells_[1] == cells_[2] && lengths_[0] == lengths_[1] &&
         lengths_[1] == lengths_[2];
}

CartesianMesh build_mesh(std::array<int, 3> cells_per_dir, std::array<double, 3> domain_lengths) {
  return CartesianMesh(cells_per_dir, domain_lengths);
}

}  // namespace dgles
