#include "dgles/dg_operator.hpp"

#include <algorithm>
#include <string>

#include "dgles/errors.hpp"

namespace dgles {

namespace {

/// Local node index of point i along direction d, with (a, b) the remaining
/// two indices in increasing direction order.
inline int line_index(int n, int d, int i, int a, int b) {
  switch (d) {
    case 0: return i + n * (a + n * b);
    case 1: return a + n * (i + n * b);
    default: return a + n * (b + n * i);
  }
}

template <int D>
inline void kep_axis(const PrimitiveState& x, const PrimitiveState& y, double* f) {
  const double rho = 0.5 * (x.rho + y.rho);
  const double u = 0.5 * (x.u + y.u);
  const double v = 0.5 * (x.v + y.v);
  const double w = 0.5 * (x.w + y.w);
  const double p = 0.5 * (x.p + y.p);
  const double h = 0.5 * (x.h + y.h);
  const double vn = D == 0 ? u : (D == 1 ? v : w);
  const double mass = rho * vn;
  f[0] = mass;
  f[1] = mass * u + (D == 0 ? p : 0.0);
  f[2] = mass * v + (D == 1 ? p : 0.0);
  f[3] = mass * w + (D == 2 ? p : 0.0);
  f[4] = mass * h;
}

/// Split-form volume term along direction D for one element:
///   dudt_i -= scale * sum_m 2 D_im (F#(U_i, U_m) - F(U_i)).
/// The subtracted consistent flux vanishes analytically (rows of D sum to
/// zero) and makes constant states an exact fixed point.
/// Data is gathered into [var][b][i][a] arrays so the inner loop runs over
/// the n parallel lines a.
template <int D>
void volume_direction(const PrimitiveState* prim, const double* dmat, int n, double scale, double* dudt,
                      VolumeScratch& s) {
  const int n3 = n * n * n;
  s.q.resize(static_cast<std::size_t>(6 * n3));
  s.f.resize(static_cast<std::size_t>(kNumVars * n3));
  s.acc.assign(static_cast<std::size_t>(kNumVars * n3), 0.0);
  double* q = s.q.data();
  double* f = s.f.data();
  double* acc = s.acc.data();
  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        const int l = (b * n + i) * n + a;
        const PrimitiveState& p = prim[line_index(n, D, i, a, b)];
        q[l] = p.rho;
        q[n3 + l] = p.u;
        q[2 * n3 + l] = p.v;
        q[3 * n3 + l] = p.w;
        q[4 * n3 + l] = p.p;
        q[5 * n3 + l] = p.h;
        double g[kNumVars];
        kep_axis<D>(p, p, g);
        for (int v = 0; v < kNumVars; ++v) f[v * n3 + l] = g[v];
      }

  for (int b = 0; b < n; ++b) {
    for (int i = 0; i < n; ++i) {
      const int ri = (b * n + i) * n;
      for (int m = i + 1; m < n; ++m) {
        const int rm = (b * n + m) * n;
        const double dim = 2.0 * dmat[i * n + m];
        const double dmi = 2.0 * dmat[m * n + i];
#pragma GCC ivdep
        for (int a = 0; a < n; ++a) {
          const int li = ri + a;
          const int lm = rm + a;
          const double rho = 0.5 * (q[li] + q[lm]);
          const double u = 0.5 * (q[n3 + li] + q[n3 + lm]);
          const double v = 0.5 * (q[2 * n3 + li] + q[2 * n3 + lm]);
          const double w = 0.5 * (q[3 * n3 + li] + q[3 * n3 + lm]);
          const double p = 0.5 * (q[4 * n3 + li] + q[4 * n3 + lm]);
          const double h = 0.5 * (q[5 * n3 + li] + q[5 * n3 + lm]);
          const double mass = rho * (D == 0 ? u : (D == 1 ? v : w));
          const double g0 = mass;
          const double g1 = mass * u + (D == 0 ? p : 0.0);
          const double g2 = mass * v + (D == 1 ? p : 0.0);
          const double g3 = mass * w + (D == 2 ? p : 0.0);
          const double g4 = mass * h;
          acc[li] += dim * (g0 - f[li]);
          acc[lm] += dmi * (g0 - f[lm]);
          acc[n3 + li] += dim * (g1 - f[n3 + li]);
          acc[n3 + lm] += dmi * (g1 - f[n3 + lm]);
          acc[2 * n3 + li] += dim * (g2 - f[2 * n3 + li]);
          acc[2 * n3 + lm] += dmi * (g2 - f[2 * n3 + lm]);
          acc[3 * n3 + li] += dim * (g3 - f[3 * n3 + li]);
          acc[3 * n3 + lm] += dmi * (g3 - f[3 * n3 + lm]);
          acc[4 * n3 + li] += dim * (g4 - f[4 * n3 + li]);
          acc[4 * n3 + lm] += dmi * (g4 - f[4 * n3 + lm]);
        }
      }
    }
  }

  for (int b = 0; b < n; ++b)
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        const int l = (b * n + i) * n + a;
        double* out = dudt + line_index(n, D, i, a, b) * kNumVars;
        for (int v = 0; v < kNumVars; ++v) out[v] -= scale * acc[v * n3 + l];
      }
}

}  // namespace

DgOperator::DgOperator(CartesianMesh mesh, std::shared_ptr<const ReferenceElement> ref, DgSettings settings)
    : mesh_(std::move(mesh)), ref_(std::move(ref)), settings_(std::move(settings)) {
  settings_.gas.validate();
  n_ = ref_->nodes_per_dir();
  if (n_ > 32) throw ConfigError("mesh.degree above 31 is not supported");
  nodes_per_elem_ = n_ * n_ * n_;
  if (settings_.include_viscous && !(settings_.gas.mu > 0.0) && !settings_.eddy_viscosity)
    throw ConfigError("viscous terms requested with gas.mu = 0 and no eddy viscosity model");
  const auto nodes = static_cast<std::size_t>(mesh_.num_elements()) * static_cast<std::size_t>(nodes_per_elem_);
  prim_.resize(nodes);
  const auto face = static_cast<std::size_t>(mesh_.num_elements()) * 3 * static_cast<std::size_t>(n_ * n_) * kNumVars;
  face_left_.resize(face);
  face_right_.resize(face);
}

void DgOperator::compute_primitives(std::span<const double> u) {
  const int ne = mesh_.num_elements();
  const auto& gas = settings_.gas;
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < nodes_per_elem_; ++i) {
      const std::size_t g = static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_elem_) + static_cast<std::size_t>(i);
      const double* q = u.data() + g * kNumVars;
      prim_[g] = cons_to_prim({q[0], q[1], q[2], q[3], q[4]}, gas, e, i);
    }
  }
}

void DgOperator::evaluate(std::span<const double> u, std::span<double> dudt) {
  if (u.size() != prim_.size() * kNumVars || dudt.size() != u.size())
    throw std::invalid_argument("DgOperator::evaluate: field size mismatch");
  compute_primitives(u);
  std::fill(dudt.begin(), dudt.end(), 0.0);
  add_advection(dudt);
  if (settings_.include_viscous) add_viscous(u, dudt);
}

void DgOperator::add_advection(std::span<double> dudt) {
  const int ne = mesh_.num_elements();
  const int n = n_;
  const int nf = n * n;
  const double* dmat = ref_->derivative_row_major().data();
  const auto& dx = mesh_.dx();
  const double w_end = ref_->mass(0);  // w_0 == w_N
  const auto variant = settings_.variant;
  const auto& gas = settings_.gas;

  // Phase 1: interface fluxes on every element's +x, +y, +z face.
  for (int e = 0; e < ne; ++e) {
    const PrimitiveState* pl = prim_.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_elem_);
    for (int d = 0; d < 3; ++d) {
      const int nb = mesh_.neighbor(e, 2 * d + 1);
      const PrimitiveState* pr = prim_.data() + static_cast<std::size_t>(nb) * static_cast<std::size_t>(nodes_per_elem_);
      const Vec3& normal = detail::kAxis[d];
      double* fl = face_left_.data() + ((static_cast<std::size_t>(e) * 3 + static_cast<std::size_t>(d)) * static_cast<std::size_t>(nf)) * kNumVars;
      double* fr = face_right_.data() + ((static_cast<std::size_t>(e) * 3 + static_cast<std::size_t>(d)) * static_cast<std::size_t>(nf)) * kNumVars;
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
          const PrimitiveState& sl = pl[line_index(n, d, n - 1, a, b)];
          const PrimitiveState& sr = pr[line_index(n, d, 0, a, b)];
          Flux fstar = detail::kep_flux(sl, sr, normal);
          if (variant != FluxVariant::kep_central) {
            const Flux diss = roe_dissipation(sl, sr, normal, variant == FluxVariant::l2roe, gas);
            for (int v = 0; v < kNumVars; ++v) fstar[static_cast<std::size_t>(v)] -= diss[static_cast<std::size_t>(v)];
          }
          const Flux f_l = detail::kep_flux(sl, sl, normal);
          const Flux f_r = detail::kep_flux(sr, sr, normal);
          const int slot = (a + n * b) * kNumVars;
          for (int v = 0; v < kNumVars; ++v) {
            fl[slot + v] = fstar[static_cast<std::size_t>(v)] - f_l[static_cast<std::size_t>(v)];
            fr[slot + v] = fstar[static_cast<std::size_t>(v)] - f_r[static_cast<std::size_t>(v)];
          }
        }
      }
    }
  }

  // Phase 2: element-local volume terms and surface corrections.
  for (int e = 0; e < ne; ++e) {
    const PrimitiveState* p = prim_.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_elem_);
    double* out = dudt.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_elem_) * kNumVars;
    volume_direction<0>(p, dmat, n, 2.0 / dx[0], out, scratch_);
    volume_direction<1>(p, dmat, n, 2.0 / dx[1], out, scratch_);
    volume_direction<2>(p, dmat, n, 2.0 / dx[2], out, scratch_);
    for (int d = 0; d < 3; ++d) {
      const double scale = 2.0 / dx[static_cast<std::size_t>(d)] / w_end;
      const int lower = mesh_.neighbor(e, 2 * d);
      const double* fl = face_left_.data() + ((static_cast<std::size_t>(e) * 3 + static_cast<std::size_t>(d)) * static_cast<std::size_t>(nf)) * kNumVars;
      const double* fr = face_right_.data() + ((static_cast<std::size_t>(lower) * 3 + static_cast<std::size_t>(d)) * static_cast<std::size_t>(nf)) * kNumVars;
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
          const int slot = (a + n * b) * kNumVars;
          double* hi = out + line_index(n, d, n - 1, a, b) * kNumVars;
          double* lo = out + line_index(n, d, 0, a, b) * kNumVars;
          for (int v = 0; v < kNumVars; ++v) {
            hi[v] -= scale * fl[slot + v];
            lo[v] += scale * fr[slot + v];
          }
        }
      }
    }
  }
}

void DgOperator::lift_gradients(GradientField& out) {
  const int ne = mesh_.num_elements();
  const int n = n_;
  const double* dmat = ref_->derivative_row_major().data();
  const auto& dx = mesh_.dx();
  const double w_end = ref_->mass(0);
  out.nodes.assign(prim_.size(), NodeGradient{});
  const auto value = [](const PrimitiveState& s, int q) {
    switch (q) {
      case 0: return s.u;
      case 1: return s.v;
      case 2: return s.w;
      default: return s.T;
    }
  };

  for (int e = 0; e < ne; ++e) {
    const std::size_t base = static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_elem_);
    const PrimitiveState* p = prim_.data() + base;
    NodeGradient* g = out.nodes.data() + base;
    for (int d = 0; d < 3; ++d) {
      const double scale = 2.0 / dx[static_cast<std::size_t>(d)];
      const PrimitiveState* upper = prim_.data() + static_cast<std::size_t>(mesh_.neighbor(e, 2 * d + 1)) * static_cast<std::size_t>(nodes_per_elem_);
      const PrimitiveState* lower = prim_.data() + static_cast<std::size_t>(mesh_.neighbor(e, 2 * d)) * static_cast<std::size_t>(nodes_per_elem_);
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
          for (int i = 0; i < n; ++i) {
            const int node = line_index(n, d, i, a, b);
            for (int q = 0; q < 4; ++q) {
              double s = 0.0;
              for (int m = 0; m < n; ++m) s += dmat[i * n + m] * value(p[line_index(n, d, m, a, b)], q);
              g[node][static_cast<std::size_t>(3 * q + d)] = scale * s;
            }
          }
          const int hi = line_index(n, d, n - 1, a, b);
          const int lo = line_index(n, d, 0, a, b);
          for (int q = 0; q < 4; ++q) {
            const double own_hi = value(p[hi], q);
            const double own_lo = value(p[lo], q);
            const double star_hi = 0.5 * (own_hi + value(upper[lo], q));
            const double star_lo = 0.5 * (own_lo + value(lower[hi], q));
            g[hi][static_cast<std::size_t>(3 * q + d)] += scale * (star_hi - own_hi) / w_end;
            g[lo][static_cast<std::size_t>(3 * q + d)] -= scale * (star_lo - own_lo) / w_end;
          }
        }
      }
    }
  }
}

void DgOperator::gradients(std::span<const double> u, GradientField& out) {
  if (u.size() != prim_.size() * kNumVars) throw std::invalid_argument("DgOperator::gradients: field size mismatch");
  compute_primitives(u);
  lift_gradients(out);
}

void DgOperator::add_viscous(std::span<const double> u, std::span<double> dudt) {
  lift_gradients(grad_);
  const std::size_t nodes = prim_.size();
  if (settings_.eddy_viscosity) {
    mu_t_.assign(nodes, 0.0);
    settings_.eddy_viscosity(u, grad_, mu_t_);
  }
  viscous_flux_.resize(nodes * 3 * kNumVars);
  const auto& gas = settings_.gas;
  for (std::size_t g = 0; g < nodes; ++g) {
    const double* q = u.data() + g * kNumVars;
    const ConservedState state{q[0], q[1], q[2], q[3], q[4]};
    const double extra = mu_t_.empty() ? 0.0 : mu_t_[g];
    for (int d = 0; d < 3; ++d) {
      const Flux f = viscous_flux(state, grad_.nodes[g], gas, d, extra);
      std::copy(f.begin(), f.end(), viscous_flux_.begin() + static_cast<std::ptrdiff_t>((g * 3 + static_cast<std::size_t>(d)) * kNumVars));
    }
  }

  const int ne = mesh_.num_elements();
  const int n = n_;
  const double* dmat = ref_->derivative_row_major().data();
  const auto& dx = mesh_.dx();
  const double w_end = ref_->mass(0);
  const auto flux_at = [this](int elem, int node, int d) {
    return viscous_flux_.data() +
           ((static_cast<std::size_t>(elem) * static_cast<std::size_t>(nodes_per_elem_) + static_cast<std::size_t>(node)) * 3 +
            static_cast<std::size_t>(d)) * kNumVars;
  };

  for (int e = 0; e < ne; ++e) {
    double* out = dudt.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(nodes_per_elem_) * kNumVars;
    for (int d = 0; d < 3; ++d) {
      const double scale = 2.0 / dx[static_cast<std::size_t>(d)];
      const int upper = mesh_.neighbor(e, 2 * d + 1);
      const int lower = mesh_.neighbor(e, 2 * d);
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
          for (int i = 0; i < n; ++i) {
            double* o = out + line_index(n, d, i, a, b) * kNumVars;
            for (int m = 0; m < n; ++m) {
              const double dim = scale * dmat[i * n + m];
              const double* f = flux_at(e, line_index(n, d, m, a, b), d);
              for (int v = 1; v < kNumVars; ++v) o[v] += dim * f[v];
            }
          }
          const int hi = line_index(n, d, n - 1, a, b);
          const int lo = line_index(n, d, 0, a, b);
          const double* f_hi = flux_at(e, hi, d);
          const double* f_lo = flux_at(e, lo, d);
          const double* f_up = flux_at(upper, lo, d);
          const double* f_down = flux_at(lower, hi, d);
          for (int v = 1; v < kNumVars; ++v) {
            out[hi * kNumVars + v] += scale * (0.5 * (f_hi[v] + f_up[v]) - f_hi[v]) / w_end;
            out[lo * kNumVars + v] -= scale * (0.5 * (f_lo[v] + f_down[v]) - f_lo[v]) / w_end;
          }
        }
      }
    }
  }
}

GradientField br1_gradients(const SolutionField& field, const GasModel& gas) {
  DgSettings settings;
  settings.gas = gas;
  DgOperator op(field.mesh(), field.ref_ptr(), settings);
  GradientField out;
  op.gradients(field.data(), out);
  return out;
}

SolutionField dg_rhs(const SolutionField& field, const GasModel& gas, FluxVariant variant, bool include_viscous) {
  DgSettings settings;
  settings.gas = gas;
  settings.variant = variant;
  settings.include_viscous = include_viscous;
  DgOperator op(field.mesh(), field.ref_ptr(), settings);
  SolutionField out(field.mesh(), field.ref_ptr());
  out.set_time(field.time());
  op.evaluate(field.data(), out.data());
  return out;
}

}  // namespace dgles
