#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "radau/errors.hpp"
#include "radau/linalg.hpp"

using namespace radau;

TEST_CASE("lu solves a hand-checked 3x3 system") {
  Matrix a(3, 3);
  a(0, 0) = 2;  a(0, 1) = 1;  a(0, 2) = -1;
  a(1, 0) = -3; a(1, 1) = -1; a(1, 2) = 2;
  a(2, 0) = -2; a(2, 1) = 1;  a(2, 2) = 2;
  const std::vector<double> b{8, -11, -3};
  const auto x = solve_dense(a, b);
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(x[2] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("lu determinant with pivot sign") {
  Matrix a(2, 2);
  a(0, 0) = 0; a(0, 1) = 1;
  a(1, 0) = 1; a(1, 1) = 0;
  CHECK(lu_determinant(lu_factor(a)) == doctest::Approx(-1.0));

  Matrix d = Matrix::identity(3);
  d(1, 1) = 4.0;
  CHECK(lu_determinant(lu_factor(d)) == doctest::Approx(4.0));
}

TEST_CASE("singular matrix is flagged, solve_dense throws") {
  Matrix a(2, 2);
  a(0, 0) = 1; a(0, 1) = 2;
  a(1, 0) = 2; a(1, 1) = 4;
  CHECK(lu_factor(a).singular);
  const std::vector<double> b{1, 1};
  CHECK_THROWS_AS(solve_dense(a, b), NumericalError);
}

TEST_CASE("vandermonde dual solve reproduces the hand-solved C(2) row") {
  // sum_j a_j c_j^k = rhs_k with c = (1/3, 1), rhs = (c_i, c_i^2/2) at c_i = 1/3
  const std::vector<double> nodes{1.0 / 3.0, 1.0};
  const std::vector<double> rhs{1.0 / 3.0, 1.0 / 18.0};
  const auto x = solve_vandermonde_dual(nodes, rhs);
  CHECK(x[0] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("vandermonde dual solve matches dense LU on random systems") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::vector<double> nodes(n);
    for (auto& x : nodes) x = u(rng);
    std::sort(nodes.begin(), nodes.end());
    bool distinct = true;
    for (int i = 1; i < n; ++i)
      if (nodes[i] - nodes[i - 1] < 1e-3) distinct = false;
    if (!distinct) continue;

    std::vector<double> rhs(n);
    for (auto& x : rhs) x = u(rng);

    Matrix v(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) v(k, j) = std::pow(nodes[j], k);

    const auto x_bp = solve_vandermonde_dual(nodes, rhs);
    const auto x_lu = solve_dense(v, rhs);
    for (int j = 0; j < n; ++j) CHECK(x_bp[j] == doctest::Approx(x_lu[j]).epsilon(1e-9));
  }
}

TEST_CASE("vandermonde dual solve rejects duplicate nodes") {
  const std::vector<double> nodes{0.5, 0.5};
  const std::vector<double> rhs{1.0, 1.0};
  CHECK_THROWS_AS(solve_vandermonde_dual(nodes, rhs), NumericalError);
}
