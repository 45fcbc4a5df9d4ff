#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "radau/problems.hpp"
#include "radau/solver.hpp"

using namespace radau;

TEST_CASE("hessenberg initial data is consistent") {
  const auto p = hessenberg_problem();
  REQUIRE(p.dim_y == 4);
  REQUIRE(p.dim_z == 1);

  const auto rep = check_consistency(p, State{p.t0, p.y0, p.z0});
  CHECK(rep.g_residual == 0.0);
  CHECK(rep.gyfz_det == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("hessenberg exact solution values") {
  const auto p = hessenberg_problem();
  const State s = p.exact(0.05);
  CHECK(s.y[0] == doctest::Approx(1.105170918).epsilon(1e-9));
  CHECK(s.z[0] == doctest::Approx(1.051271096).epsilon(1e-9));
}

TEST_CASE("hessenberg exact solution satisfies both equations") {
  const auto p = hessenberg_problem();
  std::vector<double> fv(4), gv(1);
  for (double t : {0.0, 0.17, 0.5, 0.83, 1.0}) {
    const State s = p.exact(t);
    p.f(t, s.y, s.z, fv);
    // closed-form derivatives of (e^{2t}, e^{-t}, e^{2t}, e^{-t})
    const double dy[4] = {2.0 * std::exp(2.0 * t), -std::exp(-t), 2.0 * std::exp(2.0 * t),
                          -std::exp(-t)};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(dy[i] - fv[i]) <= 1e-9);
    p.g(t, s.y, gv);
    CHECK(std::abs(gv[0]) <= 1e-12);
  }
}

TEST_CASE("pendulum initial data is consistent") {
  const auto p = pendulum_problem();
  const auto rep = check_consistency(p, State{p.t0, p.y0, p.z0});
  CHECK(rep.g_residual == 0.0);
  CHECK(rep.gyfz_det == doctest::Approx(-1.0).epsilon(1e-12));

  std::vector<double> z(1);
  p.reduced_z(p.t0, p.y0, z);
  CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pendulum off-manifold state reports the constraint gap") {
  const auto p = pendulum_problem();
  const auto rep = check_consistency(p, State{0.0, {1.0, 0.0, 1.0, 0.0}, {0.3}});
  CHECK(rep.g_residual == doctest::Approx(1.0));
}

TEST_CASE("pendulum reduced_z is exactly the hidden constraint") {
  const auto p = pendulum_problem();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> fv(4), z(1);
  for (int trial = 0; trial < 50; ++trial) {
    // g(y) = y1 y3 + y2 y4 = 0 by construction: (y3, y4) = s * (-y2, y1)
    const double y1 = u(rng), y2 = u(rng), s = u(rng);
    if (y1 * y1 + y2 * y2 < 0.1) continue;
    const std::vector<double> y{y1, y2, -s * y2, s * y1};
    p.reduced_z(0.0, y, z);
    p.f(0.0, y, z, fv);
    const Matrix gy = eval_g_y(p, 0.0, y);
    double dgdt = 0.0;
    for (int i = 0; i < 4; ++i) dgdt += gy(0, i) * fv[i];
    CHECK(std::abs(dgdt) <= 1e-10);
  }
}

TEST_CASE("pendulum with general mass keeps reduced_z consistent") {
  const auto p = pendulum_problem(2.5, 0.7);
  std::vector<double> fv(4), z(1);
  const std::vector<double> y{0.9, -0.4, 0.8, 1.8};  // g = 0.9*0.8 - 0.4*1.8 = 0
  p.reduced_z(0.0, y, z);
  p.f(0.0, y, z, fv);
  const Matrix gy = eval_g_y(p, 0.0, y);
  double dgdt = 0.0;
  for (int i = 0; i < 4; ++i) dgdt += gy(0, i) * fv[i];
  CHECK(std::abs(dgdt) <= 1e-12);
}

TEST_CASE("zero pendulum mass is a domain error") {
  CHECK_THROWS_AS(pendulum_problem(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("finite-difference Jacobians agree with the analytic ones") {
  for (auto p : {hessenberg_problem(), pendulum_problem()}) {
    DaeProblem fd = p;
    fd.jac_f_y = nullptr;
    fd.jac_f_z = nullptr;
    fd.jac_g_y = nullptr;

    const std::vector<double> y{1.2, 0.8, 0.9, 1.1};
    const std::vector<double> z{1.3};
    const Matrix ay = eval_f_y(p, 0.3, y, z), ny = eval_f_y(fd, 0.3, y, z);
    const Matrix az = eval_f_z(p, 0.3, y, z), nz = eval_f_z(fd, 0.3, y, z);
    const Matrix ag = eval_g_y(p, 0.3, y), ng = eval_g_y(fd, 0.3, y);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) CHECK(ny(r, c) == doctest::Approx(ay(r, c)).epsilon(5e-7));
      CHECK(nz(r, 0) == doctest::Approx(az(r, 0)).epsilon(5e-7));
    }
    for (int c = 0; c < 4; ++c) CHECK(ng(0, c) == doctest::Approx(ag(0, c)).epsilon(5e-7));
  }
}

TEST_CASE("recorded f and g match the double path") {
  for (auto p : {hessenberg_problem(), pendulum_problem()}) {
    const std::vector<double> y{1.2, 0.8, 0.9, 1.1};
    const std::vector<double> z{1.3};
    std::vector<double> fv(4), gv(1);
    p.f(0.0, y, z, fv);
    p.g(0.0, y, gv);

    ad::Tape tape;
    std::vector<ad::Var> yv, zv;
    for (double v : y) yv.push_back(ad::make_var(tape, v));
    for (double v : z) zv.push_back(ad::make_var(tape, v));
    const auto fr = p.f_record(tape, 0.0, yv, zv);
    const auto gr = p.g_record(tape, 0.0, yv);
    for (int i = 0; i < 4; ++i) CHECK(fr[i].value() == fv[i]);
    CHECK(gr[0].value() == gv[0]);
  }
}

TEST_CASE("index-2 condition holds along the benchmark trajectories") {
  // both benchmarks keep det(g_y f_z) constant along their solutions
  const auto hess = hessenberg_problem();
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto rep = check_consistency(hess, hess.exact(t));
    CHECK(rep.gyfz_det == doctest::Approx(3.0).epsilon(1e-9));
  }

  const auto pend = pendulum_problem();
  const Trajectory traj = integrate(pend, radau_tableau(3), 0.0, 1.0, 0.05);
  REQUIRE(traj.ok());
  for (std::size_t k = 0; k < traj.states.size(); k += 4) {
    const auto rep = check_consistency(pend, traj.states[k]);
    CHECK(std::abs(rep.gyfz_det) > 0.5);
    CHECK(rep.gyfz_det == doctest::Approx(-1.0).epsilon(1e-7));
  }
}

TEST_CASE("state dimension mismatch is rejected") {
  const auto p = hessenberg_problem();
  CHECK_THROWS_AS(check_consistency(p, State{0.0, {1.0, 1.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("problem lookup by name") {
  CHECK(make_problem("hessenberg").name == "hessenberg");
  const auto p = make_problem("pendulum", {{"m", 2.0}, {"lambda", 0.5}});
  CHECK(p.params.at("m") == 2.0);
  CHECK(p.params.at("lambda") == 0.5);
  CHECK_THROWS_WITH_AS(make_problem("lorenz"),
                       "unknown problem 'lorenz' (valid: hessenberg, pendulum)",
                       std::invalid_argument);
}
