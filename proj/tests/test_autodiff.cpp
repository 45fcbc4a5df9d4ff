#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "radau/autodiff.hpp"

using namespace radau;
using ad::Tape;
using ad::Var;

namespace {

// central finite differences over the leaf values of a re-recorded scalar
double fd_gradient(const std::function<double(std::span<const double>)>& f,
                   std::vector<double> x, std::size_t i, double step = 1e-6) {
  const double saved = x[i];
  x[i] = saved + step;
  const double up = f(x);
  x[i] = saved - step;
  const double dn = f(x);
  return (up - dn) / (2.0 * step);
}

}  // namespace

TEST_CASE("hand-checked gradients of x*y + sin(x)") {
  Tape t;
  const Var x = ad::make_var(t, 1.3);
  const Var y = ad::make_var(t, -0.7);
  const Var out = x * y + sin(x);
  CHECK(out.value() == doctest::Approx(1.3 * -0.7 + std::sin(1.3)));

  t.backward(out.id);
  CHECK(x.adjoint() == doctest::Approx(-0.7 + std::cos(1.3)).epsilon(1e-14));
  CHECK(y.adjoint() == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("division gradients") {
  Tape t;
  const Var x = ad::make_var(t, 2.0);
  const Var y = ad::make_var(t, 4.0);
  const Var out = x / y;
  t.backward(out.id);
  CHECK(out.value() == doctest::Approx(0.5));
  CHECK(x.adjoint() == doctest::Approx(0.25));
  CHECK(y.adjoint() == doctest::Approx(-0.125));
}

TEST_CASE("fma records a*b + c with exact partials") {
  Tape t;
  const Var a = ad::make_var(t, 3.0);
  const Var b = ad::make_var(t, 5.0);
  const Var c = ad::make_var(t, -1.0);
  const Var out = ad::fmadd(a, b, c);
  CHECK(out.value() == 14.0);
  t.backward(out.id);
  CHECK(a.adjoint() == 5.0);
  CHECK(b.adjoint() == 3.0);
  CHECK(c.adjoint() == 1.0);
}

TEST_CASE("constant-folded ops") {
  Tape t;
  const Var x = ad::make_var(t, 0.8);
  const Var out = (2.0 * x + 1.0) / 4.0 - (1.0 - x);
  CHECK(out.value() == doctest::Approx((2.0 * 0.8 + 1.0) / 4.0 - 0.2));
  t.backward(out.id);
  CHECK(x.adjoint() == doctest::Approx(0.5 + 1.0));
}

TEST_CASE("elementary function partials against finite differences") {
  auto replay = [](std::span<const double> x) {
    Tape t;
    const Var a = ad::make_var(t, x[0]);
    const Var b = ad::make_var(t, x[1]);
    const Var r = sigmoid(a * b) + tanh(a) * exp(-b) + square(sin(a) - cos(b)) + a / (2.0 + b * b);
    return r.value();
  };

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<double> x{u(rng), u(rng)};

    Tape t;
    const Var a = ad::make_var(t, x[0]);
    const Var b = ad::make_var(t, x[1]);
    const Var r = sigmoid(a * b) + tanh(a) * exp(-b) + square(sin(a) - cos(b)) + a / (2.0 + b * b);
    t.backward(r.id);

    for (std::size_t i = 0; i < 2; ++i) {
      const double fd = fd_gradient(replay, x, i);
      const double rev = i == 0 ? a.adjoint() : b.adjoint();
      CHECK(rev == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("constant objective has zero gradient") {
  Tape t;
  const Var x = ad::make_var(t, 2.5);
  const Var c = 0.0 * x + 7.0;
  t.backward(c.id);
  CHECK(x.adjoint() == 0.0);
}

TEST_CASE("leaf_block lays out contiguous leaves") {
  Tape t;
  const std::vector<double> vals{1.0, 2.0, 3.0};
  const int base = t.leaf_block(vals);
  CHECK(base == 0);
  for (int i = 0; i < 3; ++i) CHECK(t.value(base + i) == vals[i]);

  // sum of squares: d/dx_i = 2 x_i
  int acc = t.square(base);
  for (int i = 1; i < 3; ++i) acc = t.add(acc, t.square(base + i));
  t.backward(acc);
  for (int i = 0; i < 3; ++i) CHECK(t.adjoint(base + i) == 2.0 * vals[i]);
}

TEST_CASE("rewind keeps the tape reusable and deterministic") {
  Tape t;
  double first = 0.0;
  for (int round = 0; round < 3; ++round) {
    t.rewind();
    const Var x = ad::make_var(t, 1.1);
    const Var y = exp(sin(x)) * x;
    if (round == 0)
      first = y.value();
    else
      CHECK(y.value() == first);
    t.backward(y.id);
  }
}

TEST_CASE("backward rejects an out-of-range root") {
  Tape t;
  ad::make_var(t, 1.0);
  CHECK_THROWS_AS(t.backward(5), std::invalid_argument);
}
