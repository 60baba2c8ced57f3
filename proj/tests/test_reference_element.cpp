#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dgles/errors.hpp"
#include "dgles/reference_element.hpp"
#include "test_support.hpp"

using namespace dgles;

namespace {

/// Interior LGL nodes as eigenvalues of the Jacobi matrix of the
/// Gegenbauer(3/2) polynomials, whose degree N-1 member is proportional to P_N'.
std::vector<double> oracle_nodes(int n) {
  std::vector<double> x{-1.0};
  if (n >= 2) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n - 1, n - 1);
    for (int k = 1; k <= n - 2; ++k) {
      const double beta = std::sqrt(k * (k + 2.0) / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
      j(k - 1, k) = beta;
      j(k, k - 1) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    for (int i = 0; i < n - 1; ++i) x.push_back(es.eigenvalues()(i));
  }
  x.push_back(1.0);
  return x;
}

/// Weights from the moment equations sum_i w_i x_i^k = int x^k, k = 0..N.
std::vector<double> oracle_weights(const std::vector<double>& x) {
  const int m = static_cast<int>(x.size());
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd rhs(m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) a(k, i) = std::pow(x[static_cast<std::size_t>(i)], k);
    rhs(k) = k % 2 == 0 ? 2.0 / (k + 1.0) : 0.0;
  }
  const Eigen::VectorXd w = a.fullPivLu().solve(rhs);
  return {w.data(), w.data() + m};
}

}  // namespace

TEST_CASE("lgl nodes and weights for small degrees") {
  {
    const auto [x, w] = lgl_nodes_weights(1);
    REQUIRE(x.size() == 2);
    CHECK(x[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    const auto [x, w] = lgl_nodes_weights(2);
    CHECK(std::abs(x[1]) < 1e-15);
    CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  {
    const auto [x, w] = lgl_nodes_weights(3);
    CHECK(x[1] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(x[2] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  }
}

TEST_CASE("lgl nodes and weights agree with eigenvalue and moment oracles") {
  for (int n = 1; n <= 16; ++n) {
    const auto [x, w] = lgl_nodes_weights(n);
    const auto xo = oracle_nodes(n);
    REQUIRE(x.size() == static_cast<std::size_t>(n + 1));
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      CHECK(std::abs(x[static_cast<std::size_t>(i)] - xo[static_cast<std::size_t>(i)]) < 1e-13);
      CHECK(std::abs(x[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(n - i)]) < 1e-15);
      if (i > 0) CHECK(x[static_cast<std::size_t>(i)] > x[static_cast<std::size_t>(i - 1)]);
      CHECK(w[static_cast<std::size_t>(i)] > 0.0);
      sum += w[static_cast<std::size_t>(i)];
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    if (n <= 10) {
      const auto wo = oracle_weights(xo);
      for (int i = 0; i <= n; ++i) CHECK(std::abs(w[static_cast<std::size_t>(i)] - wo[static_cast<std::size_t>(i)]) < 1e-11);
    }
  }
}

TEST_CASE("degree zero is rejected") { CHECK_THROWS_AS(lgl_nodes_weights(0), ConfigError); }

TEST_CASE("quadrature is exact for random polynomials of degree 2N-1") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int n = 1; n <= 12; ++n) {
    const auto [x, w] = lgl_nodes_weights(n);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(static_cast<std::size_t>(2 * n));
      for (auto& v : c) v = coef(rng);
      double exact = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k)
        if (k % 2 == 0) exact += c[k] * 2.0 / (k + 1.0);
      double quad = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) p = p * x[i] + c[k];
        quad += w[i] * p;
      }
      CHECK(std::abs(quad - exact) < 1e-12);
    }
  }
}

TEST_CASE("orthonormal Legendre Vandermonde") {
  CHECK(orthonormal_legendre(0, 0.3) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  const double expected = std::sqrt(2.5) * (3.0 * 0.25 - 1.0) / 2.0;
  CHECK(orthonormal_legendre(2, 0.5) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(orthonormal_legendre(2, 0.5) == doctest::Approx(-0.197642).epsilon(1e-5));
  for (int j = 0; j < 12; ++j)
    CHECK(orthonormal_legendre(j, 0.37) == doctest::Approx(std::sqrt(j + 0.5) * testsupport::legendre(j, 0.37)).epsilon(1e-13));

  const auto [x, w] = lgl_nodes_weights(7);
  const auto [v, vinv] = legendre_vandermonde(7, x);
  const Eigen::MatrixXd id = v * vinv;
  CHECK((id - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("derivative matrix") {
  for (int n = 1; n <= 12; ++n) {
    const ReferenceElement ref(n);
    const auto& d = ref.derivative();
    const Eigen::Map<const Eigen::VectorXd> x(ref.nodes().data(), n + 1);
    CHECK((d * Eigen::VectorXd::Ones(n + 1)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(((d * x) - Eigen::VectorXd::Ones(n + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
  const ReferenceElement ref(4);
  Eigen::VectorXd f(5), df(5);
  for (int i = 0; i < 5; ++i) {
    const double xi = ref.nodes()[static_cast<std::size_t>(i)];
    f(i) = std::pow(xi, 4);
    df(i) = 4.0 * std::pow(xi, 3);
  }
  CHECK((ref.derivative() * f - df).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("summation-by-parts property") {
  for (int n = 1; n <= 14; ++n) {
    const ReferenceElement ref(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) m(i, i) = ref.mass(i);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 1, n + 1);
    b(0, 0) = -1.0;
    b(n, n) = 1.0;
    const Eigen::MatrixXd q = m * ref.derivative() + ref.derivative().transpose() * m;
    CHECK((q - b).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("nodal filter does not depend on the basis scaling") {
  const ReferenceElement ref(7);
  const std::vector<double> sigma{1.0, 0.925, 1.0, 0.853, 0.557, 0.889, 0.896, 0.0};
  const Eigen::MatrixXd k = ref.nodal_filter(sigma);
  // unit-endpoint scaling: phi_j(1) = 1
  Eigen::MatrixXd v = ref.vandermonde();
  for (int j = 0; j < 8; ++j) v.col(j) /= orthonormal_legendre(j, 1.0);
  Eigen::VectorXd s(8);
  for (int j = 0; j < 8; ++j) s(j) = sigma[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd k2 = v * s.asDiagonal() * v.inverse();
  CHECK((k - k2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degree change matrices") {
  for (auto [hi, lo] : {std::pair{5, 3}, std::pair{9, 7}, std::pair{2, 1}}) {
    const auto m = change_degree_matrices(hi, lo);
    CHECK(m.interp.rows() == hi + 1);
    CHECK(m.interp.cols() == lo + 1);
    CHECK(m.project.rows() == lo + 1);
    CHECK(m.project.cols() == hi + 1);
    const Eigen::MatrixXd id = m.project * m.interp;
    CHECK((id - Eigen::MatrixXd::Identity(lo + 1, lo + 1)).cwiseAbs().maxCoeff() < 1e-12);

    const ReferenceElement rh(hi);
    Eigen::VectorXd top(hi + 1);
    for (int i = 0; i <= hi; ++i) top(i) = orthonormal_legendre(hi, rh.nodes()[static_cast<std::size_t>(i)]);
    CHECK((m.project * top).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::VectorXd c = m.project * Eigen::VectorXd::Constant(hi + 1, 3.5);
    CHECK((c - Eigen::VectorXd::Constant(lo + 1, 3.5)).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS_AS(change_degree_matrices(3, 3), ConfigError);
  CHECK_THROWS_AS(change_degree_matrices(3, 5), ConfigError);
  CHECK_THROWS_AS(change_degree_matrices(3, 0), ConfigError);
}

TEST_CASE("interpolation reproduces polynomials") {
  const ReferenceElement ref(6);
  const auto pts = equispaced_cell_centres(9);
  const auto im = interpolation_matrix(ref.nodes(), pts);
  Eigen::VectorXd f(7);
  for (int i = 0; i < 7; ++i) {
    const double x = ref.nodes()[static_cast<std::size_t>(i)];
    f(i) = 1.0 - 2.0 * x + std::pow(x, 6);
  }
  const Eigen::VectorXd g = im * f;
  for (int i = 0; i < 9; ++i) {
    const double x = pts[static_cast<std::size_t>(i)];
    CHECK(g(i) == doctest::Approx(1.0 - 2.0 * x + std::pow(x, 6)).epsilon(1e-13));
  }
  CHECK(pts.front() == doctest::Approx(-1.0 + 1.0 / 9.0));
}
