#include "dgles/les_filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> flat(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return flat;
}

// Applies matrix along direction d: out[.., i, ..] = sum_m A_im in[.., m, ..].
// For fixed index along d the remaining faster indices form one contiguous chunk.
void apply_along(const double* a, int n, int ncomp, int d, const double* in, double* out) {
  int chunk = ncomp;
  for (int k = 0; k < d; ++k) chunk *= n;
  int outer = 1;
  for (int k = d; k < 2; ++k) outer *= n;
  const int block = chunk * n;
  for (int o = 0; o < outer; ++o) {
    const double* src = in + o * block;
    double* dst = out + o * block;
    for (int i = 0; i < n; ++i) {
      double* oi = dst + i * chunk;
      for (int t = 0; t < chunk; ++t) oi[t] = 0.0;
      for (int m = 0; m < n; ++m) {
        const double aim = a[i * n + m];
        const double* xm = src + m * chunk;
#pragma GCC ivdep
        for (int t = 0; t < chunk; ++t) oi[t] += aim * xm[t];
      }
    }
  }
}

}  // namespace

void apply_tensor_matrix(std::span<const double> matrix, int n, int ncomp, std::span<const double> in,
                         std::span<double> out) {
  const auto size = static_cast<std::size_t>(n * n * n * ncomp);
  if (in.size() != size || out.size() != size || matrix.size() != static_cast<std::size_t>(n * n))
    throw std::invalid_argument("apply_tensor_matrix: size mismatch");
  thread_local std::vector<double> tmp;
  tmp.resize(size);
  apply_along(matrix.data(), n, ncomp, 0, in.data(), out.data());
  apply_along(matrix.data(), n, ncomp, 1, out.data(), tmp.data());
  apply_along(matrix.data(), n, ncomp, 2, tmp.data(), out.data());
}

FilterKernel::FilterKernel(std::vector<double> sigma, double c, std::shared_ptr<const ReferenceElement> ref,
                           double l_ref)
    : ref_(std::move(ref)), sigma_(std::move(sigma)), c_(c), l_ref_(l_ref) {
  if (sigma_.size() != static_cast<std::size_t>(ref_->nodes_per_dir()))
    throw ConfigError("filter kernel needs N+1 = " + std::to_string(ref_->nodes_per_dir()) +
                      " modal coefficients, got " + std::to_string(sigma_.size()));
  for (std::size_t i = 0; i < sigma_.size(); ++i)
    if (!(sigma_[i] >= 0.0 && sigma_[i] <= 1.0))
      throw ConfigError("filter coefficient sigma_" + std::to_string(i) + " = " + std::to_string(sigma_[i]) +
                        " is outside [0, 1]");
  if (!(c_ >= 0.0) || !std::isfinite(c_)) throw ConfigError("filter strength constant c must be >= 0");
  if (!(l_ref_ > 0.0)) throw ConfigError("filter reference length must be > 0");
  k_ = ref_->nodal_filter(sigma_);
  k_flat_ = row_major(k_);
}

bool FilterKernel::is_les_kernel() const { return sigma_.front() == 1.0 && sigma_.back() == 0.0; }

void FilterKernel::apply(std::span<const double> in, std::span<double> out, int ncomp) const {
  apply_tensor_matrix(k_flat_, ref_->nodes_per_dir(), ncomp, in, out);
}

FilterKernel build_filter_kernel(std::vector<double> sigma, double c, std::shared_ptr<const ReferenceElement> ref,
                                 double l_ref) {
  return FilterKernel(std::move(sigma), c, std::move(ref), l_ref);
}

void test_filter_highpass(const ReferenceElement& ref, std::span<const double> velocity, std::span<double> out) {
  const int n = ref.nodes_per_dir();
  std::vector<double> cutoff(static_cast<std::size_t>(n), 1.0);
  cutoff.back() = 0.0;
  // Cached per degree on this thread: the operator is rebuilt only when N changes.
  thread_local int cached_degree = -1;
  thread_local std::vector<double> lowpass;
  if (cached_degree != ref.degree()) {
    lowpass = row_major(ref.nodal_filter(cutoff));
    cached_degree = ref.degree();
  }
  apply_tensor_matrix(lowpass, n, 3, velocity, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = velocity[i] - out[i];
}

std::vector<double> highest_mode_energy(const SolutionField& field) {
  const int n = field.nodes_per_dir();
  const int np = field.nodes_per_element();
  const auto& w = field.ref().weights();
  const double jac = field.mesh().jacobian();
  std::vector<double> energy(static_cast<std::size_t>(field.num_elements()));
  std::vector<double> vel(static_cast<std::size_t>(np) * 3);
  std::vector<double> high(vel.size());
  for (int e = 0; e < field.num_elements(); ++e) {
    for (int i = 0; i < np; ++i) {
      const double* q = field.node(e, i);
      for (int d = 0; d < 3; ++d) vel[static_cast<std::size_t>(3 * i + d)] = q[d + 1] / q[0];
    }
    test_filter_highpass(field.ref(), vel, high);
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const auto node = static_cast<std::size_t>(field.local_index(i, j, k));
          const double v2 = high[3 * node] * high[3 * node] + high[3 * node + 1] * high[3 * node + 1] +
                            high[3 * node + 2] * high[3 * node + 2];
          sum += v2 * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k)];
        }
    energy[static_cast<std::size_t>(e)] = sum * jac;
  }
  return energy;
}

double filter_width(const CartesianMesh& mesh, int degree) {
  return std::cbrt(mesh.element_volume()) / (degree + 1);
}

std::vector<double> filter_strength(std::span<const double> energy, const FilterKernel& kernel, double delta) {
  std::vector<double> out(energy.size());
  const double scale = kernel.c() / (delta * delta);
  for (std::size_t e = 0; e < energy.size(); ++e) {
    const double en = std::max(energy[e], 0.0);
    out[e] = en == 0.0 ? 0.0 : scale * std::sqrt(en / kernel.l_ref());
  }
  return out;
}

void FilterStrengthField::update(const SolutionField& field, const FilterKernel& kernel) {
  energy = highest_mode_energy(field);
  delta = filter_width(field.mesh(), field.degree());
  sigma_f = filter_strength(energy, kernel, delta);
  stale = false;
}

void apply_relaxation(std::span<double> dudt, std::span<const double> u, const CartesianMesh& mesh,
                      const FilterKernel& kernel, std::span<const double> sigma_f) {
  const int n = kernel.ref().nodes_per_dir();
  const std::size_t elem_size = static_cast<std::size_t>(n * n * n) * kNumVars;
  if (u.size() != elem_size * static_cast<std::size_t>(mesh.num_elements()) || dudt.size() != u.size() ||
      sigma_f.size() != static_cast<std::size_t>(mesh.num_elements()))
    throw std::invalid_argument("apply_relaxation: size mismatch");
  std::vector<double> filtered(elem_size);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double rate = sigma_f[static_cast<std::size_t>(e)];
    if (rate == 0.0) continue;
    const auto in = u.subspan(static_cast<std::size_t>(e) * elem_size, elem_size);
    auto out = dudt.subspan(static_cast<std::size_t>(e) * elem_size, elem_size);
    kernel.apply(in, filtered, kNumVars);
    for (std::size_t i = 0; i < elem_size; ++i) out[i] += rate * (filtered[i] - in[i]);
  }
}

void apply_hard_filter(std::span<double> u, const CartesianMesh& mesh, const FilterKernel& kernel) {
  const int n = kernel.ref().nodes_per_dir();
  const std::size_t elem_size = static_cast<std::size_t>(n * n * n) * kNumVars;
  std::vector<double> filtered(elem_size);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto block = u.subspan(static_cast<std::size_t>(e) * elem_size, elem_size);
    kernel.apply(block, filtered, kNumVars);
    std::copy(filtered.begin(), filtered.end(), block.begin());
  }
}

std::vector<double> smagorinsky_viscosity(const GradientField& grad, std::span<const double> u, double c_s,
                                          const CartesianMesh& mesh, int degree) {
  const double length = c_s * filter_width(mesh, degree);
  std::vector<double> mu_t(grad.nodes.size(), 0.0);
  if (c_s == 0.0) return mu_t;
  for (std::size_t g = 0; g < grad.nodes.size(); ++g) {
    const auto& gr = grad.nodes[g];
    double ss = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double s = 0.5 * (gr[static_cast<std::size_t>(3 * a + b)] + gr[static_cast<std::size_t>(3 * b + a)]);
        ss += s * s;
      }
    mu_t[g] = u[g * kNumVars] * length * length * std::sqrt(2.0 * ss);
  }
  return mu_t;
}

EddyViscosityFn make_smagorinsky_model(double c_s, const CartesianMesh& mesh, int degree) {
  return [c_s, mesh, degree](std::span<const double> u, const GradientField& grad, std::vector<double>& mu_t) {
    mu_t = smagorinsky_viscosity(grad, u, c_s, mesh, degree);
  };
}

}  // namespace dgles
