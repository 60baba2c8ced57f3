#include "dgles/initial_conditions.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dgles/errors.hpp"

namespace dgles {

namespace {

using cplx = std::complex<double>;

void require_periodic_box(const CartesianMesh& mesh, const char* what) {
  const auto& c = mesh.cells();
  const auto& l = mesh.lengths();
  const double two_pi = 2.0 * std::numbers::pi;
  const bool ok = c[0] == c[1] && c[1] == c[2] && std::abs(l[0] - two_pi) < 1e-12 && std::abs(l[1] - two_pi) < 1e-12 &&
                  std::abs(l[2] - two_pi) < 1e-12;
  if (!ok) throw ConfigError(std::string(what) + " needs a cubic (2 pi)^3 box with equal cell counts");
}

/// Physical coordinate of 1D node i in element column ex along direction d.
std::vector<double> line_coordinates(const CartesianMesh& mesh, const ReferenceElement& ref, int d) {
  const int n = ref.nodes_per_dir();
  const int cells = mesh.cells()[static_cast<std::size_t>(d)];
  const double h = mesh.dx()[static_cast<std::size_t>(d)];
  std::vector<double> x(static_cast<std::size_t>(cells * n));
  for (int e = 0; e < cells; ++e)
    for (int i = 0; i < n; ++i)
      x[static_cast<std::size_t>(e * n + i)] = e * h + 0.5 * (ref.nodes()[i] + 1.0) * h;
  return x;
}

int shell_of(int kx, int ky, int kz) {
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(kx * kx + ky * ky + kz * kz)) + 0.5));
}

}  // namespace

SolutionField init_tgv(const CartesianMesh& mesh, int degree, const GasModel& gas, double mach) {
  require_periodic_box(mesh, "init_tgv");
  if (!(mach > 0.0)) throw ConfigError("init.mach must be > 0");
  const double rho0 = 1.0;
  const double v0 = 1.0;
  const double p0 = rho0 * v0 * v0 / (gas.kappa * mach * mach);
  const double t0 = p0 / (rho0 * gas.R);
  SolutionField field(mesh, degree);
  field.fill([&](const std::array<double, 3>& x) {
    const double u = v0 * std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]);
    const double v = -v0 * std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]);
    const double p = p0 + rho0 * v0 * v0 / 16.0 * (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1])) *
                              (std::cos(2.0 * x[2]) + 2.0);
    return prim_to_cons(p / (gas.R * t0), {u, v, 0.0}, p, gas);
  });
  return field;
}

SolutionField init_dhit(const CartesianMesh& mesh, int degree, const GasModel& gas, const DhitSpec& spec) {
  require_periodic_box(mesh, "init_dhit");
  const int nyquist = mesh.cells()[0] * (degree + 1) / 2;
  if (spec.k_min < 1 || spec.k_min > spec.k_max) throw ConfigError("init.k_min must satisfy 1 <= k_min <= k_max");
  if (spec.k_max >= nyquist)
    throw ConfigError("init.k_max = " + std::to_string(spec.k_max) + " must be below the grid Nyquist wavenumber " +
                      std::to_string(nyquist));
  if (!(spec.mach > 0.0)) throw ConfigError("init.mach must be > 0");

  const int kmax = spec.k_max;
  const int w = 2 * kmax + 1;
  // half space: kz > 0, or kz == 0 and ky > 0, or kz == ky == 0 and kx > 0
  const auto in_half = [](int kx, int ky, int kz) { return kz > 0 || (kz == 0 && (ky > 0 || (ky == 0 && kx > 0))); };
  const auto slot = [&](int kx, int ky, int kz) {
    return (static_cast<std::size_t>(kz) * w + static_cast<std::size_t>(ky + kmax)) * w +
           static_cast<std::size_t>(kx + kmax);
  };
  std::vector<std::array<cplx, 3>> uhat(static_cast<std::size_t>(kmax + 1) * w * w, {cplx{}, cplx{}, cplx{}});
  std::vector<double> shell_energy(static_cast<std::size_t>(kmax + 1), 0.0);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int kz = 0; kz <= kmax; ++kz)
    for (int ky = -kmax; ky <= kmax; ++ky)
      for (int kx = -kmax; kx <= kmax; ++kx) {
        if (!in_half(kx, ky, kz)) continue;
        const int s = shell_of(kx, ky, kz);
        if (s < spec.k_min || s > kmax) continue;
        std::array<cplx, 3> a;
        for (auto& c : a) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          c = cplx(re, im);
        }
        const double k[3] = {double(kx), double(ky), double(kz)};
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const cplx kdota = k[0] * a[0] + k[1] * a[1] + k[2] * a[2];
        for (int d = 0; d < 3; ++d) a[static_cast<std::size_t>(d)] -= k[d] * kdota / k2;
        uhat[slot(kx, ky, kz)] = a;
        // the mode and its conjugate each carry |a|^2 / 2
        shell_energy[static_cast<std::size_t>(s)] += std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
      }

  double target_total = 0.0;
  for (int s = spec.k_min; s <= kmax; ++s) target_total += std::pow(double(s), spec.slope);
  std::vector<double> scale(static_cast<std::size_t>(kmax + 1), 0.0);
  for (int s = spec.k_min; s <= kmax; ++s) {
    const double target = 1.5 * std::pow(double(s), spec.slope) / target_total;
    const double have = shell_energy[static_cast<std::size_t>(s)];
    if (have > 0.0) scale[static_cast<std::size_t>(s)] = std::sqrt(target / have);
  }
  for (int kz = 0; kz <= kmax; ++kz)
    for (int ky = -kmax; ky <= kmax; ++ky)
      for (int kx = -kmax; kx <= kmax; ++kx) {
        const int s = shell_of(kx, ky, kz);
        if (s > kmax) continue;
        for (auto& c : uhat[slot(kx, ky, kz)]) c *= scale[static_cast<std::size_t>(s)];
      }

  // Separable summation over the distinct 1D node coordinates.
  SolutionField field(mesh, degree);
  const auto& ref = field.ref();
  const auto xs = line_coordinates(mesh, ref, 0);
  const auto ys = line_coordinates(mesh, ref, 1);
  const auto zs = line_coordinates(mesh, ref, 2);
  const std::size_t nx = xs.size(), ny = ys.size(), nz = zs.size();
  const auto phase = [](const std::vector<double>& x, int kmin, int kmaxv) {
    std::vector<cplx> e(static_cast<std::size_t>(kmaxv - kmin + 1) * x.size());
    for (int k = kmin; k <= kmaxv; ++k)
      for (std::size_t i = 0; i < x.size(); ++i)
        e[static_cast<std::size_t>(k - kmin) * x.size() + i] = std::polar(1.0, k * x[i]);
    return e;
  };
  const auto ex = phase(xs, -kmax, kmax);
  const auto ey = phase(ys, -kmax, kmax);
  const auto ez = phase(zs, 0, kmax);

  // a[(kz, ky)][c][x] = sum_kx uhat e^{i kx x}
  std::vector<cplx> a(static_cast<std::size_t>(kmax + 1) * w * 3 * nx, cplx{});
  for (int kz = 0; kz <= kmax; ++kz)
    for (int ky = -kmax; ky <= kmax; ++ky) {
      cplx* row = &a[((static_cast<std::size_t>(kz) * w + static_cast<std::size_t>(ky + kmax)) * 3) * nx];
      for (int kx = -kmax; kx <= kmax; ++kx) {
        const auto& m = uhat[slot(kx, ky, kz)];
        if (m[0] == cplx{} && m[1] == cplx{} && m[2] == cplx{}) continue;
        const cplx* ph = &ex[static_cast<std::size_t>(kx + kmax) * nx];
        for (int c = 0; c < 3; ++c)
          for (std::size_t i = 0; i < nx; ++i) row[static_cast<std::size_t>(c) * nx + i] += m[static_cast<std::size_t>(c)] * ph[i];
      }
    }
  // b[kz][c][y][x] = sum_ky a e^{i ky y}
  std::vector<cplx> b(static_cast<std::size_t>(kmax + 1) * 3 * ny * nx, cplx{});
  for (int kz = 0; kz <= kmax; ++kz)
    for (int ky = -kmax; ky <= kmax; ++ky) {
      const cplx* row = &a[((static_cast<std::size_t>(kz) * w + static_cast<std::size_t>(ky + kmax)) * 3) * nx];
      const cplx* ph = &ey[static_cast<std::size_t>(ky + kmax) * ny];
      for (int c = 0; c < 3; ++c)
        for (std::size_t j = 0; j < ny; ++j) {
          cplx* out = &b[((static_cast<std::size_t>(kz) * 3 + static_cast<std::size_t>(c)) * ny + j) * nx];
          const cplx* in = row + static_cast<std::size_t>(c) * nx;
          for (std::size_t i = 0; i < nx; ++i) out[i] += in[i] * ph[j];
        }
    }
  // vel[c][z][y][x] = 2 Re sum_kz b e^{i kz z}
  std::vector<double> vel(3 * nz * ny * nx, 0.0);
  for (int kz = 0; kz <= kmax; ++kz) {
    const cplx* ph = &ez[static_cast<std::size_t>(kz) * nz];
    for (int c = 0; c < 3; ++c)
      for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j) {
          const cplx* in = &b[((static_cast<std::size_t>(kz) * 3 + static_cast<std::size_t>(c)) * ny + j) * nx];
          double* out = &vel[((static_cast<std::size_t>(c) * nz + k) * ny + j) * nx];
          for (std::size_t i = 0; i < nx; ++i) out[i] += 2.0 * (in[i] * ph[k]).real();
        }
  }

  const double p0 = 1.0 / (gas.kappa * spec.mach * spec.mach);
  const int n = field.nodes_per_dir();
  for (int e = 0; e < field.num_elements(); ++e) {
    const auto ec = mesh.element_coords(e);
    for (int kk = 0; kk < n; ++kk)
      for (int jj = 0; jj < n; ++jj)
        for (int ii = 0; ii < n; ++ii) {
          const std::size_t gi = static_cast<std::size_t>(ec[0] * n + ii);
          const std::size_t gj = static_cast<std::size_t>(ec[1] * n + jj);
          const std::size_t gk = static_cast<std::size_t>(ec[2] * n + kk);
          std::array<double, 3> v;
          for (std::size_t c = 0; c < 3; ++c) v[c] = vel[((c * nz + gk) * ny + gj) * nx + gi];
          field.set_state(e, field.local_index(ii, jj, kk), prim_to_cons(1.0, v, p0, gas));
        }
  }
  return field;
}

SolutionField init_uniform(const CartesianMesh& mesh, int degree, const GasModel& gas, double rho,
                           const std::array<double, 3>& velocity, double p) {
  if (!(rho > 0.0 && p > 0.0)) throw ConfigError("init.rho and init.p must be > 0");
  SolutionField field(mesh, degree);
  const auto u = prim_to_cons(rho, velocity, p, gas);
  field.fill([&u](const std::array<double, 3>&) { return u; });
  return field;
}

SolutionField make_initial_field(const RunConfig& config) {
  const auto mesh = build_mesh(config.cells, config.lengths);
  switch (config.init.type) {
    case InitType::tgv:
      return init_tgv(mesh, config.degree, config.gas, config.init.mach);
    case InitType::dhit:
      return init_dhit(mesh, config.degree, config.gas,
                       DhitSpec{config.init.slope, config.init.k_min, config.init.k_max, config.init.mach,
                                config.init.seed});
    case InitType::uniform:
      return init_uniform(mesh, config.degree, config.gas, config.init.rho, config.init.velocity, config.init.p);
    case InitType::checkpoint: {
      auto field = read_checkpoint(config.init.path);
      if (field.degree() != config.degree || field.mesh().cells() != config.cells)
        throw ConfigError("init.path: checkpoint mesh or degree does not match mesh.cells / mesh.degree");
      for (std::size_t d = 0; d < 3; ++d)
        if (std::abs(field.mesh().lengths()[d] - config.lengths[d]) > 1e-12 * config.lengths[d])
          throw ConfigError("init.path: checkpoint domain lengths do not match mesh.lengths");
      return field;
    }
  }
  throw ConfigError("init.type: unsupported");
}

double eddy_turnover_time(const Spectrum& spectrum) {
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
    total += spectrum.energy[i];
    weighted += spectrum.energy[i] / spectrum.k[i];
  }
  if (!(total > 0.0)) throw NumericalError("eddy_turnover_time: spectrum carries no energy");
  const double u2 = 2.0 / 3.0 * total;
  const double l_int = std::numbers::pi / (2.0 * u2) * weighted;
  return l_int / std::sqrt(u2);
}

}  // namespace dgles
