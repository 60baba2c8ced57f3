#include "dgles/solution_field.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

SolutionField::SolutionField(CartesianMesh mesh, int degree)
    : SolutionField(std::move(mesh), std::make_shared<const ReferenceElement>(degree)) {}

SolutionField::SolutionField(CartesianMesh mesh, std::shared_ptr<const ReferenceElement> ref)
    : mesh_(std::move(mesh)), ref_(std::move(ref)) {
  const int n = ref_->nodes_per_dir();
  nodes_per_elem_ = n * n * n;
  data_.assign(num_nodes() * kNumVars, 0.0);
}

ConservedState SolutionField::state(int e, int local) const {
  ConservedState u;
  const double* p = node(e, local);
  for (int v = 0; v < kNumVars; ++v) u[static_cast<std::size_t>(v)] = p[v];
  return u;
}

void SolutionField::set_state(int e, int local, const ConservedState& u) {
  double* p = node(e, local);
  for (int v = 0; v < kNumVars; ++v) p[v] = u[static_cast<std::size_t>(v)];
}

std::array<double, 3> SolutionField::node_position(int e, int i, int j, int k) const {
  const auto origin = mesh_.element_origin(e);
  const auto& dx = mesh_.dx();
  const auto& x = ref_->nodes();
  const std::array<int, 3> idx{i, j, k};
  std::array<double, 3> pos{};
  for (int d = 0; d < 3; ++d)
    pos[static_cast<std::size_t>(d)] =
        origin[static_cast<std::size_t>(d)] +
        0.5 * (x[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])] + 1.0) * dx[static_cast<std::size_t>(d)];
  return pos;
}

void SolutionField::fill(const std::function<ConservedState(const std::array<double, 3>&)>& f) {
  const int n = nodes_per_dir();
  for (int e = 0; e < num_elements(); ++e)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) set_state(e, local_index(i, j, k), f(node_position(e, i, j, k)));
}

double global_integral(const SolutionField& field,
                       const std::function<double(const ConservedState&)>& integrand) {
  const int n = field.nodes_per_dir();
  const auto& w = field.ref().weights();
  const double jac = field.mesh().jacobian();
  double total = 0.0;
  for (int e = 0; e < field.num_elements(); ++e) {
    double elem = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          elem += integrand(field.state(e, field.local_index(i, j, k))) * w[static_cast<std::size_t>(i)] *
                  w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k)];
    total += elem * jac;
  }
  return total;
}

std::array<double, kNumVars> conserved_totals(const SolutionField& field) {
  std::array<double, kNumVars> totals{};
  for (int v = 0; v < kNumVars; ++v)
    totals[static_cast<std::size_t>(v)] =
        global_integral(field, [v](const ConservedState& u) { return u[static_cast<std::size_t>(v)]; });
  return totals;
}

namespace {

constexpr char kMagic[6] = {'D', 'G', 'L', 'E', 'S', '1'};

template <typename T>
T to_little_endian(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

template <typename T>
void put(std::ostream& out, T value) {
  value = to_little_endian(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::filesystem::path& path) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw ConfigError("checkpoint " + path.string() + " is truncated");
  return to_little_endian(value);
}

}  // namespace

void write_checkpoint(const SolutionField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open checkpoint for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::int64_t>(out, field.degree());
  for (int d = 0; d < 3; ++d) put<std::int64_t>(out, field.mesh().cells()[static_cast<std::size_t>(d)]);
  for (int d = 0; d < 3; ++d) put<double>(out, field.mesh().lengths()[static_cast<std::size_t>(d)]);
  put<double>(out, field.time());
  for (double v : field.data()) put<double>(out, v);
  if (!out) throw ConfigError("failed writing checkpoint: " + path.string());
}

SolutionField read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint: " + path.string());
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ConfigError("not a DGLES1 checkpoint (bad magic): " + path.string());
  const auto degree = get<std::int64_t>(in, path);
  std::array<int, 3> cells{};
  for (auto& c : cells) {
    const auto v = get<std::int64_t>(in, path);
    if (v < 1 || v > (1 << 20)) throw ConfigError("checkpoint header has invalid cell count: " + path.string());
    c = static_cast<int>(v);
  }
  if (degree < 1 || degree > 64) throw ConfigError("checkpoint header has invalid degree: " + path.string());
  std::array<double, 3> lengths{};
  for (auto& l : lengths) l = get<double>(in, path);
  const double time = get<double>(in, path);
  SolutionField field(CartesianMesh(cells, lengths), static_cast<int>(degree));
  field.set_time(time);
  for (double& v : field.data()) v = get<double>(in, path);
  if (in.peek() != std::char_traits<char>::eof())
    throw ConfigError("checkpoint has trailing bytes: " + path.string());
  return field;
}

}  // namespace dgles
