#include "dgles/reference_element.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dgles/errors.hpp"

namespace dgles {

std::pair<double, double> legendre_and_derivative(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  double dp_prev = 0.0;
  double dp = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    const double dp_next = dp_prev + (2 * k + 1) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
  return {p, dp};
}

double orthonormal_legendre(int n, double x) {
  return std::sqrt(n + 0.5) * legendre_and_derivative(n, x).first;
}

std::pair<std::vector<double>, std::vector<double>> lgl_nodes_weights(int degree) {
  if (degree < 1) throw ConfigError("LGL nodes need polynomial degree >= 1, got " + std::to_string(degree));
  const int n = degree;
  std::vector<double> x(static_cast<std::size_t>(n + 1));
  std::vector<double> w(x.size());
  x.front() = -1.0;
  x.back() = 1.0;

  // Interior nodes are the roots of P_N'. Newton with the Legendre ODE for P_N''.
  for (int i = 1; i < n; ++i) {
    double xi = -std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_and_derivative(n, xi);
      const double d2p = (2.0 * xi * dp - n * (n + 1.0) * p) / (1.0 - xi * xi);
      const double step = dp / d2p;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = xi;
  }
  for (int i = 0; i < n / 2 + 1; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - i);
    const double a = 0.5 * (x[hi] - x[lo]);
    x[lo] = -a;
    x[hi] = a;
  }
  if (n % 2 == 0) x[static_cast<std::size_t>(n / 2)] = 0.0;

  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = legendre_and_derivative(n, x[i]).first;
    w[i] = 2.0 / (n * (n + 1.0) * p * p);
  }
  return {x, w};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> legendre_vandermonde(int degree,
                                                                 std::span<const double> nodes) {
  const auto n = static_cast<Eigen::Index>(degree + 1);
  if (static_cast<Eigen::Index>(nodes.size()) != n)
    throw std::invalid_argument("legendre_vandermonde: node count must be degree + 1");
  Eigen::MatrixXd v(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      v(i, j) = orthonormal_legendre(static_cast<int>(j), nodes[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (!lu.isInvertible()) throw std::logic_error("legendre_vandermonde: singular Vandermonde matrix");
  return {v, lu.inverse()};
}

namespace {

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  std::vector<double> bw(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (k != j) bw[j] /= (nodes[j] - nodes[k]);
  return bw;
}

}  // namespace

Eigen::MatrixXd derivative_matrix(std::span<const double> nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  const auto bw = barycentric_weights(nodes);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      d(i, j) = (bw[uj] / bw[ui]) / (nodes[ui] - nodes[uj]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

Eigen::MatrixXd interpolation_matrix(std::span<const double> nodes, std::span<const double> points) {
  const auto bw = barycentric_weights(nodes);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()),
                                            static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto row = static_cast<Eigen::Index>(p);
    bool hit = false;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (points[p] == nodes[j]) {
        m(row, static_cast<Eigen::Index>(j)) = 1.0;
        hit = true;
        break;
      }
    }
    if (hit) continue;
    double denom = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double t = bw[j] / (points[p] - nodes[j]);
      m(row, static_cast<Eigen::Index>(j)) = t;
      denom += t;
    }
    m.row(row) /= denom;
  }
  return m;
}

std::vector<double> equispaced_cell_centres(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = -1.0 + (2.0 * i + 1.0) / n;
  return x;
}

DegreeChangeMatrices change_degree_matrices(int degree_hi, int degree_lo) {
  if (degree_lo < 1 || degree_hi <= degree_lo)
    throw ConfigError("change_degree_matrices needs N_hi > N_lo >= 1, got N_hi=" +
                      std::to_string(degree_hi) + " N_lo=" + std::to_string(degree_lo));
  const auto [x_hi, w_hi] = lgl_nodes_weights(degree_hi);
  const auto [x_lo, w_lo] = lgl_nodes_weights(degree_lo);
  const auto [v_hi, vinv_hi] = legendre_vandermonde(degree_hi, x_hi);
  const auto [v_lo, vinv_lo] = legendre_vandermonde(degree_lo, x_lo);
  const Eigen::Index n_lo = degree_lo + 1;

  DegreeChangeMatrices out;
  out.interp = v_hi.leftCols(n_lo) * vinv_lo;
  out.project = v_lo * vinv_hi.topRows(n_lo);
  return out;
}

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  std::tie(nodes_, weights_) = lgl_nodes_weights(degree);
  d_ = derivative_matrix(nodes_);
  std::tie(v_, vinv_) = legendre_vandermonde(degree, nodes_);
  const auto n = static_cast<std::size_t>(degree + 1);
  d_flat_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d_flat_[i * n + j] = d_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

Eigen::MatrixXd ReferenceElement::nodal_filter(std::span<const double> sigma) const {
  const Eigen::Index n = degree_ + 1;
  if (static_cast<Eigen::Index>(sigma.size()) != n)
    throw ConfigError("filter diagonal needs N+1 = " + std::to_string(n) + " entries, got " +
                      std::to_string(sigma.size()));
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = sigma[static_cast<std::size_t>(i)];
  return v_ * s.asDiagonal() * vinv_;
}

}  // namespace dgles
