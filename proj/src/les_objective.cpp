#include "dgles/les_objective.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dgles/errors.hpp"
#include "dgles/simulation.hpp"

namespace dgles {

std::vector<double> kernel_from_params(std::span<const double> x) {
  if (x.empty()) throw ConfigError("kernel_from_params: empty parameter vector");
  std::vector<double> sigma;
  sigma.reserve(x.size() + 1);
  sigma.push_back(1.0);
  sigma.insert(sigma.end(), x.begin() + 1, x.end());
  sigma.push_back(0.0);
  return sigma;
}

double les_objective(std::span<const double> x, const ObjectiveSetup& setup) {
  RunConfig cfg = setup.config;
  cfg.model.type = ModelType::filter;
  cfg.model.c = x[0];
  cfg.model.sigma = kernel_from_params(x);
  cfg.output.spectra.clear();
  cfg.output.checkpoint = false;
  double t_last = setup.initial.time();
  for (double t : setup.times) t_last = std::max(t_last, t);
  cfg.time.end = t_last;

  SimulationOptions options;
  options.use_cadence = false;
  options.extra_samples = setup.times;
  try {
    cfg.validate();
    const auto result = run_simulation(cfg, setup.initial, options);
    const auto& samples = result.series.samples();
    double f = 0.0;
    for (std::size_t i = 0; i < setup.times.size(); ++i) {
      const TimeSample* s = nullptr;
      for (const auto& cand : samples)
        if (std::abs(cand.t - setup.times[i]) <= 1e-10 * std::max(1.0, std::abs(cand.t))) s = &cand;
      if (!s) throw NumericalError("objective: missing sample at t = " + std::to_string(setup.times[i]));
      const double de = setup.e_ref[i] - s->e_kin;
      const double dk = setup.kappa_ref[i] - s->kappa_resolved;
      f += de * de + dk * dk;
    }
    return f;
  } catch (const std::exception& e) {
    if (setup.log) setup.log(std::string("objective evaluation failed: ") + e.what());
    return std::numeric_limits<double>::infinity();
  }
}

void interpolate_reference(const ReferenceSeries& series, std::span<const double> times, std::vector<double>& e_ref,
                           std::vector<double>& kappa_ref) {
  e_ref.clear();
  kappa_ref.clear();
  const auto& t = series.t;
  for (double ti : times) {
    if (t.empty() || ti < t.front() - 1e-12 || ti > t.back() + 1e-12) {
      std::ostringstream msg;
      msg << "optimize.reference does not cover t = " << ti;
      throw ConfigError(msg.str());
    }
    std::size_t j = 0;
    while (j + 1 < t.size() && t[j + 1] < ti) ++j;
    if (j + 1 >= t.size() || std::abs(t[j] - ti) <= 1e-12) {
      e_ref.push_back(series.e_kin[j]);
      kappa_ref.push_back(series.kappa[j]);
      continue;
    }
    const double w = std::clamp((ti - t[j]) / (t[j + 1] - t[j]), 0.0, 1.0);
    e_ref.push_back((1.0 - w) * series.e_kin[j] + w * series.e_kin[j + 1]);
    kappa_ref.push_back((1.0 - w) * series.kappa[j] + w * series.kappa[j + 1]);
  }
}

std::vector<double> default_objective_times(double t0, double window) {
  return {t0 + window / 3.0, t0 + 2.0 * window / 3.0, t0 + window};
}

namespace {

/// Row-major (n_c) x (ratio n_f) matrix: fine nodal values along one coarse
/// element line -> L2 projection onto degree N_c, sampled at the coarse nodes.
std::vector<double> line_projection(const ReferenceElement& fine, const ReferenceElement& coarse, int ratio) {
  const int nf = fine.nodes_per_dir();
  const int nc = coarse.nodes_per_dir();
  // sub-cell quadrature exact for degree N_f + N_c
  const int q_degree = std::max(2, (fine.degree() + coarse.degree() + 3) / 2 + 1);
  const auto [eta, omega] = lgl_nodes_weights(q_degree);
  const Eigen::MatrixXd interp = interpolation_matrix(fine.nodes(), eta);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nc, ratio * nf);
  for (int s = 0; s < ratio; ++s)
    for (int q = 0; q < static_cast<int>(eta.size()); ++q) {
      const double xi = -1.0 + (2.0 * s + eta[static_cast<std::size_t>(q)] + 1.0) / ratio;
      for (int j = 0; j < nc; ++j) {
        const double phi = orthonormal_legendre(j, xi);
        for (int i = 0; i < nf; ++i) w(j, s * nf + i) += omega[static_cast<std::size_t>(q)] / ratio * phi * interp(q, i);
      }
    }
  const Eigen::MatrixXd p = coarse.vandermonde() * w;
  std::vector<double> out(static_cast<std::size_t>(nc * ratio * nf));
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b < ratio * nf; ++b) out[static_cast<std::size_t>(a * ratio * nf + b)] = p(a, b);
  return out;
}

}  // namespace

SolutionField filter_reference_to_les(const SolutionField& fine, int coarse_degree, std::array<int, 3> coarse_cells) {
  const auto& fm = fine.mesh();
  std::array<int, 3> ratio{};
  for (std::size_t d = 0; d < 3; ++d) {
    if (coarse_cells[d] < 1 || fm.cells()[d] % coarse_cells[d] != 0)
      throw ConfigError("filter_reference_to_les: fine cells must be an integer multiple of the coarse cells");
    ratio[d] = fm.cells()[d] / coarse_cells[d];
  }
  SolutionField coarse(build_mesh(coarse_cells, fm.lengths()), coarse_degree);
  coarse.set_time(fine.time());
  const int nf = fine.nodes_per_dir();
  const int nc = coarse.nodes_per_dir();

  // Global arrays [z][y][x][var]: fine -> project x -> project y -> project z.
  std::array<std::size_t, 3> dims{};
  for (std::size_t d = 0; d < 3; ++d) dims[d] = static_cast<std::size_t>(fm.cells()[d] * nf);
  std::vector<double> buf(dims[0] * dims[1] * dims[2] * kNumVars);
  for (int e = 0; e < fine.num_elements(); ++e) {
    const auto ec = fm.element_coords(e);
    for (int k = 0; k < nf; ++k)
      for (int j = 0; j < nf; ++j)
        for (int i = 0; i < nf; ++i) {
          const std::size_t gx = static_cast<std::size_t>(ec[0] * nf + i);
          const std::size_t gy = static_cast<std::size_t>(ec[1] * nf + j);
          const std::size_t gz = static_cast<std::size_t>(ec[2] * nf + k);
          const double* src = fine.node(e, fine.local_index(i, j, k));
          std::copy(src, src + kNumVars, &buf[((gz * dims[1] + gy) * dims[0] + gx) * kNumVars]);
        }
  }

  for (std::size_t d = 0; d < 3; ++d) {
    const auto p = line_projection(fine.ref(), coarse.ref(), ratio[d]);
    const std::size_t m = static_cast<std::size_t>(ratio[d] * nf);
    auto out_dims = dims;
    out_dims[d] = static_cast<std::size_t>(coarse_cells[d] * nc);
    std::vector<double> out(out_dims[0] * out_dims[1] * out_dims[2] * kNumVars, 0.0);
    const std::array<std::size_t, 3> in_stride{kNumVars, dims[0] * kNumVars, dims[0] * dims[1] * kNumVars};
    const std::array<std::size_t, 3> out_stride{kNumVars, out_dims[0] * kNumVars, out_dims[0] * out_dims[1] * kNumVars};
    // the two directions not being projected
    const std::size_t d1 = (d + 1) % 3, d2 = (d + 2) % 3;
    for (std::size_t b = 0; b < dims[d2]; ++b)
      for (std::size_t a = 0; a < dims[d1]; ++a)
        for (int ce = 0; ce < coarse_cells[d]; ++ce)
          for (int r = 0; r < nc; ++r) {
            double* o = &out[a * out_stride[d1] + b * out_stride[d2] + static_cast<std::size_t>(ce * nc + r) * out_stride[d]];
            for (std::size_t s = 0; s < m; ++s) {
              const double coef = p[static_cast<std::size_t>(r) * m + s];
              const double* in = &buf[a * in_stride[d1] + b * in_stride[d2] + (static_cast<std::size_t>(ce) * m + s) * in_stride[d]];
              for (int v = 0; v < kNumVars; ++v) o[v] += coef * in[v];
            }
          }
    buf = std::move(out);
    dims = out_dims;
  }

  for (int e = 0; e < coarse.num_elements(); ++e) {
    const auto ec = coarse.mesh().element_coords(e);
    for (int k = 0; k < nc; ++k)
      for (int j = 0; j < nc; ++j)
        for (int i = 0; i < nc; ++i) {
          const std::size_t gx = static_cast<std::size_t>(ec[0] * nc + i);
          const std::size_t gy = static_cast<std::size_t>(ec[1] * nc + j);
          const std::size_t gz = static_cast<std::size_t>(ec[2] * nc + k);
          const double* src = &buf[((gz * dims[1] + gy) * dims[0] + gx) * kNumVars];
          std::copy(src, src + kNumVars, coarse.node(e, coarse.local_index(i, j, k)));
        }
  }
  return coarse;
}

}  // namespace dgles
