#include "dgles/diagnostics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "dgles/errors.hpp"
#include "dgles/gas.hpp"
#include "dgles/les_filter.hpp"

namespace dgles {

void TimeSeries::add(double t, double e_kin, double kappa_resolved) {
  if (!samples_.empty() && !(t > samples_.back().t))
    throw std::invalid_argument("TimeSeries::add: times must be strictly increasing");
  samples_.push_back({t, e_kin, kappa_resolved, std::numeric_limits<double>::quiet_NaN()});
}

void TimeSeries::update_dissipation() {
  for (auto& s : samples_) s.eps_numerical = std::numeric_limits<double>::quiet_NaN();
  if (samples_.size() < 3) return;
  std::vector<double> t, e;
  for (const auto& s : samples_) {
    t.push_back(s.t);
    e.push_back(s.e_kin);
  }
  const auto eps = numerical_dissipation(t, e);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i].eps_numerical = eps[i];
}

double integral_kinetic_energy(const SolutionField& field) {
  const double total = global_integral(field, [](const ConservedState& u) {
    return 0.5 * (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / u[0];
  });
  return total / field.mesh().volume();
}

double resolved_dissipation(const SolutionField& field, const GradientField& grad, const GasModel& gas) {
  const int n = field.nodes_per_dir();
  const int np = field.nodes_per_element();
  const auto& w = field.ref().weights();
  const double jac = field.mesh().jacobian();
  if (grad.nodes.size() != field.num_nodes()) throw std::invalid_argument("resolved_dissipation: gradient size mismatch");
  double total = 0.0;
  for (int e = 0; e < field.num_elements(); ++e) {
    double elem = 0.0;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const int local = field.local_index(i, j, k);
          const auto& g = grad.nodes[static_cast<std::size_t>(e) * static_cast<std::size_t>(np) + static_cast<std::size_t>(local)];
          double ss = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
              const double s = 0.5 * (g[static_cast<std::size_t>(3 * a + b)] + g[static_cast<std::size_t>(3 * b + a)]);
              ss += s * s;
            }
          const double nu = gas.mu / field.node(e, local)[0];
          elem += 2.0 * nu * ss * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k)];
        }
    total += elem * jac;
  }
  return total;
}

double resolved_dissipation(const SolutionField& field, const GasModel& gas) {
  return resolved_dissipation(field, br1_gradients(field, gas), gas);
}

std::vector<double> numerical_dissipation(std::span<const double> t, std::span<const double> e) {
  if (t.size() != e.size()) throw std::invalid_argument("numerical_dissipation: size mismatch");
  if (t.size() < 3) throw ConfigError("numerical dissipation needs at least 3 samples");
  std::vector<double> eps(t.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    // Derivative of the quadratic through three (possibly unequally spaced) samples.
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    const double d = -h1 / (h0 * (h0 + h1)) * e[i - 1] + (h1 - h0) / (h0 * h1) * e[i] +
                     h0 / (h1 * (h0 + h1)) * e[i + 1];
    eps[i] = -d;
  }
  return eps;
}

std::vector<double> sample_velocity_uniform(const SolutionField& field) {
  const int n = field.nodes_per_dir();
  const auto& cells = field.mesh().cells();
  const std::array<int, 3> pts{cells[0] * n, cells[1] * n, cells[2] * n};
  const auto centres = equispaced_cell_centres(n);
  const Eigen::MatrixXd interp = interpolation_matrix(field.ref().nodes(), centres);
  std::vector<double> flat(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flat[static_cast<std::size_t>(i * n + j)] = interp(i, j);

  std::vector<double> out(static_cast<std::size_t>(pts[0]) * static_cast<std::size_t>(pts[1]) * static_cast<std::size_t>(pts[2]) * 3);
  const int np = field.nodes_per_element();
  std::vector<double> vel(static_cast<std::size_t>(np) * 3);
  std::vector<double> sampled(vel.size());
  for (int e = 0; e < field.num_elements(); ++e) {
    for (int i = 0; i < np; ++i) {
      const double* q = field.node(e, i);
      for (int d = 0; d < 3; ++d) vel[static_cast<std::size_t>(3 * i + d)] = q[d + 1] / q[0];
    }
    apply_tensor_matrix(flat, n, 3, vel, sampled);
    const auto c = field.mesh().element_coords(e);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const std::size_t gx = static_cast<std::size_t>(c[0] * n + i);
          const std::size_t gy = static_cast<std::size_t>(c[1] * n + j);
          const std::size_t gz = static_cast<std::size_t>(c[2] * n + k);
          const std::size_t g = gx + static_cast<std::size_t>(pts[0]) * (gy + static_cast<std::size_t>(pts[1]) * gz);
          const auto local = static_cast<std::size_t>(field.local_index(i, j, k));
          for (int d = 0; d < 3; ++d) out[3 * g + static_cast<std::size_t>(d)] = sampled[3 * local + static_cast<std::size_t>(d)];
        }
  }
  return out;
}

Spectrum energy_spectrum_uniform(std::span<const double> velocity, int points) {
  const auto n = static_cast<std::size_t>(points);
  const std::size_t total = n * n * n;
  if (velocity.size() != total * 3) throw std::invalid_argument("energy_spectrum_uniform: size mismatch");

  const int k_max = static_cast<int>(std::ceil(std::sqrt(3.0) * (points / 2) + 0.5));
  std::vector<double> shells(static_cast<std::size_t>(k_max) + 1, 0.0);
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft_3d(points, points, points, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  const auto wavenumber = [points](std::size_t i) {
    const int ii = static_cast<int>(i);
    return ii <= points / 2 ? ii : ii - points;
  };
  const double norm = 1.0 / static_cast<double>(total);
  for (int comp = 0; comp < 3; ++comp) {
    // FFTW is row-major: the last index varies fastest, matching x fastest here.
    for (std::size_t g = 0; g < total; ++g) {
      buf[g][0] = velocity[3 * g + static_cast<std::size_t>(comp)];
      buf[g][1] = 0.0;
    }
    fftw_execute(plan);
    for (std::size_t kz = 0; kz < n; ++kz)
      for (std::size_t ky = 0; ky < n; ++ky)
        for (std::size_t kx = 0; kx < n; ++kx) {
          const std::size_t g = kx + n * (ky + n * kz);
          const double re = buf[g][0] * norm;
          const double im = buf[g][1] * norm;
          const double kk = std::sqrt(static_cast<double>(wavenumber(kx) * wavenumber(kx) + wavenumber(ky) * wavenumber(ky) +
                                                          wavenumber(kz) * wavenumber(kz)));
          const auto shell = static_cast<std::size_t>(std::floor(kk + 0.5));
          shells[shell] += 0.5 * (re * re + im * im);
        }
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);

  Spectrum s;
  s.mean_energy = shells[0];
  for (int k = 1; k <= k_max; ++k) {
    s.k.push_back(k);
    s.energy.push_back(shells[static_cast<std::size_t>(k)]);
  }
  return s;
}

Spectrum energy_spectrum(const SolutionField& field) {
  if (!field.mesh().is_cubic()) throw ConfigError("energy spectrum needs a cubic domain with equal cell counts");
  Spectrum s = energy_spectrum_uniform(sample_velocity_uniform(field), field.mesh().cells()[0] * field.nodes_per_dir());
  // Rescale shell indices if the box side is not 2 pi.
  const double scale = 2.0 * std::numbers::pi / field.mesh().lengths()[0];
  if (std::abs(scale - 1.0) > 1e-14)
    for (auto& k : s.k) k = static_cast<int>(std::lround(k * scale));
  s.time = field.time();
  return s;
}

Spectrum kolmogorov_compensate(Spectrum s, double eps) {
  if (!(eps > 0.0)) throw ConfigError("Kolmogorov compensation needs a positive dissipation rate");
  s.compensated.resize(s.energy.size());
  const double f = std::pow(eps, -2.0 / 3.0);
  for (std::size_t i = 0; i < s.energy.size(); ++i)
    s.compensated[i] = s.energy[i] * f * std::pow(static_cast<double>(s.k[i]), 5.0 / 3.0);
  return s;
}

double loglog_slope(const Spectrum& s, int k_lo, int k_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    if (s.k[i] < k_lo || s.k[i] > k_hi) continue;
    const double x = std::log(static_cast<double>(s.k[i]));
    const double y = std::log(s.energy[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw std::invalid_argument("loglog_slope: fewer than two shells in range");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double mean_compensated(const Spectrum& s, int k_lo, int k_hi) {
  if (s.compensated.size() != s.k.size()) throw std::invalid_argument("mean_compensated: spectrum is not compensated");
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < s.k.size(); ++i)
    if (s.k[i] >= k_lo && s.k[i] <= k_hi) {
      sum += s.compensated[i];
      ++count;
    }
  if (count == 0) throw std::invalid_argument("mean_compensated: no shells in range");
  return sum / count;
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_time_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "t,e_kin,kappa_resolved,eps_numerical\n";
  for (const auto& s : series.samples())
    out << fmt17(s.t) << ',' << fmt17(s.e_kin) << ',' << fmt17(s.kappa_resolved) << ',' << fmt17(s.eps_numerical) << '\n';
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "k,E,E_compensated\n";
  for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
    const double c = spectrum.compensated.empty() ? std::numeric_limits<double>::quiet_NaN() : spectrum.compensated[i];
    out << spectrum.k[i] << ',' << fmt17(spectrum.energy[i]) << ',' << fmt17(c) << '\n';
  }
}

std::string spectrum_filename(double time) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "spectrum_t%.6f.csv", time);
  return buf;
}

ReferenceSeries read_reference_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference series: " + path.string());
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) {
      while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) c.pop_back();
      cols.push_back(c);
    }
  }
  const auto find = [&cols, &path](std::initializer_list<const char*> names) -> std::size_t {
    for (const char* name : names)
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == name) return i;
    throw ConfigError("reference series " + path.string() + " lacks column " + *names.begin());
  };
  const std::size_t it = find({"t"});
  const std::size_t ie = find({"e_kin"});
  const std::size_t ik = find({"kappa", "kappa_resolved"});
  ReferenceSeries ref;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
    if (vals.size() < cols.size()) throw ConfigError("reference series " + path.string() + ": short row");
    ref.t.push_back(vals[it]);
    ref.e_kin.push_back(vals[ie]);
    ref.kappa.push_back(vals[ik]);
  }
  if (ref.t.empty()) throw ConfigError("reference series " + path.string() + " has no rows");
  return ref;
}

}  // namespace dgles
