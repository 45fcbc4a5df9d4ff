#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "radau/errors.hpp"
#include "radau/tableau.hpp"

using namespace radau;

TEST_CASE("one stage is backward Euler") {
  const auto t = radau_tableau(1);
  CHECK(t.c == std::vector<double>{1.0});
  CHECK(t.b == std::vector<double>{1.0});
  CHECK(t.a(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.order == 1);

  const auto r = verify_order_conditions(t);
  CHECK(r.b == doctest::Approx(0.0));
  CHECK(r.c == doctest::Approx(0.0));
  CHECK(r.d == 0.0);  // empty family
}

TEST_CASE("two-stage nodes are roots of 3x^2 - 4x + 1") {
  const auto c = radau_nodes(2);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c[1] == 1.0);
}

TEST_CASE("two-stage tableau matches the hand-solved C(2) systems") {
  const auto t = radau_tableau(2);
  CHECK(std::abs(t.a(0, 0) - 5.0 / 12.0) <= 1e-14);
  CHECK(std::abs(t.a(0, 1) + 1.0 / 12.0) <= 1e-14);
  CHECK(std::abs(t.a(1, 0) - 3.0 / 4.0) <= 1e-14);
  CHECK(std::abs(t.a(1, 1) - 1.0 / 4.0) <= 1e-14);
  CHECK(std::abs(t.b[0] - 3.0 / 4.0) <= 1e-14);
  CHECK(std::abs(t.b[1] - 1.0 / 4.0) <= 1e-14);
  CHECK(std::abs(t.c[0] - 1.0 / 3.0) <= 1e-14);
  CHECK(t.c[1] == 1.0);
  CHECK(t.order == 3);

  const auto r = verify_order_conditions(t);
  CHECK(r.max() <= 1e-15);
}

TEST_CASE("three-stage nodes are (4 -/+ sqrt(6))/10 and 1") {
  const auto c = radau_nodes(3);
  const double s6 = std::sqrt(6.0);
  REQUIRE(c.size() == 3);
  CHECK(std::abs(c[0] - (4.0 - s6) / 10.0) <= 1e-14);
  CHECK(std::abs(c[1] - (4.0 + s6) / 10.0) <= 1e-14);
  CHECK(c[2] == 1.0);

  const auto r = verify_order_conditions(radau_tableau(3));
  CHECK(r.b <= 1e-14);
  CHECK(r.c <= 1e-14);
  CHECK(r.d <= 1e-14);
}

TEST_CASE("order condition residuals stay below 1e-12 for v = 1..7") {
  for (int v = 1; v <= 7; ++v) {
    const auto t = radau_tableau(v);
    const auto r = verify_order_conditions(t);
    INFO("stages = ", v, " B=", r.b, " C=", r.c, " D=", r.d);
    CHECK(r.b <= 1e-12);
    CHECK(r.c <= 1e-12);
    CHECK(r.d <= 1e-12);
  }
}

TEST_CASE("tableau structural invariants for v = 1..10") {
  for (int v = 1; v <= 10; ++v) {
    const auto t = radau_tableau(v);
    REQUIRE(t.stages == v);
    CHECK(t.order == 2 * v - 1);

    // b is row v bit-for-bit (copied, not solved twice)
    for (int j = 0; j < v; ++j) CHECK(t.b[j] == t.a(v - 1, j));

    // nodes distinct, strictly increasing, in (0, 1], last exactly 1
    CHECK(t.c[0] > 0.0);
    for (int i = 1; i < v; ++i) CHECK(t.c[i] > t.c[i - 1]);
    CHECK(t.c[v - 1] == 1.0);

    // row sums reproduce c
    for (int i = 0; i < v; ++i) {
      double s = 0.0;
      for (int j = 0; j < v; ++j) s += t.a(i, j);
      CHECK(std::abs(s - t.c[i]) <= 1e-13);
    }
  }
}

TEST_CASE("radau_nodes is deterministic across calls") {
  for (int v : {2, 5, 10}) {
    const auto a = radau_nodes(v);
    const auto b = radau_nodes(v);
    CHECK(a == b);
  }
}

TEST_CASE("stage count out of range is a domain error") {
  CHECK_THROWS_AS(radau_nodes(0), std::invalid_argument);
  CHECK_THROWS_AS(radau_nodes(11), std::invalid_argument);
  CHECK_THROWS_AS(radau_tableau(-3), std::invalid_argument);
}

TEST_CASE("verify_order_conditions flags a broken weight vector") {
  auto t = radau_tableau(2);
  t.b = {1.0, 0.0};  // violates B(3) at k = 2 and k = 3
  const auto r = verify_order_conditions(t);
  // residual at k=2 is |1/3 - 1/2| = 1/6; the max over k is 2/9 at k=3
  CHECK(r.b == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
  CHECK(r.b >= 1.0 / 6.0);
}
