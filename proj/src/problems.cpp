#include "radau/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace radau {
namespace {

// The benchmark right-hand sides are written once as templates over the
// scalar type and instantiated for double (classical solver) and ad::Var
// (PINN loss recording). Both paths evaluate the same expressions in the
// same order.

template <class S>
void hessenberg_rhs(std::span<const S> y, std::span<const S> z, std::span<S> out) {
  out[0] = (y[2] * y[3] + y[0] * y[1]) * z[0];
  out[1] = -(y[2] * y[3] * y[3] * y[1] * y[1] * z[0]);
  out[2] = 2.0 * y[2] * y[3] * y[0] * y[1];
  out[3] = -(y[2] * y[3] * y[1] * y[1]);
}

template <class S>
void hessenberg_constraint(std::span<const S> y, std::span<S> out) {
  out[0] = y[0] * y[3] - y[1] * y[2];
}

template <class S>
void pendulum_rhs(double mass, double lambda, std::span<const S> y, std::span<const S> z,
                  std::span<S> out) {
  out[0] = y[2];
  out[1] = y[3];
  out[2] = -(y[0] * z[0]);
  out[3] = (-(y[1] * z[0]) - lambda) / mass;
}

template <class S>
void pendulum_constraint(std::span<const S> y, std::span<S> out) {
  out[0] = y[0] * y[2] + y[1] * y[3];
}

}  // namespace

DaeProblem hessenberg_problem() {
  DaeProblem p;
  p.name = "hessenberg";
  p.dim_y = 4;
  p.dim_z = 1;
  p.t0 = 0.0;
  p.y0 = {1.0, 1.0, 1.0, 1.0};
  p.z0 = {1.0};

  p.f = [](double, std::span<const double> y, std::span<const double> z, std::span<double> out) {
    hessenberg_rhs<double>(y, z, out);
  };
  p.g = [](double, std::span<const double> y, std::span<double> out) {
    hessenberg_constraint<double>(y, out);
  };

  p.jac_f_y = [](double, std::span<const double> y, std::span<const double> z, Matrix& j) {
    const double w = z[0];
    j = Matrix(4, 4);
    j(0, 0) = y[1] * w;
    j(0, 1) = y[0] * w;
    j(0, 2) = y[3] * w;
    j(0, 3) = y[2] * w;
    j(1, 1) = -2.0 * y[2] * y[3] * y[3] * y[1] * w;
    j(1, 2) = -y[3] * y[3] * y[1] * y[1] * w;
    j(1, 3) = -2.0 * y[2] * y[3] * y[1] * y[1] * w;
    j(2, 0) = 2.0 * y[2] * y[3] * y[1];
    j(2, 1) = 2.0 * y[2] * y[3] * y[0];
    j(2, 2) = 2.0 * y[3] * y[0] * y[1];
    j(2, 3) = 2.0 * y[2] * y[0] * y[1];
    j(3, 1) = -2.0 * y[2] * y[3] * y[1];
    j(3, 2) = -y[3] * y[1] * y[1];
    j(3, 3) = -y[2] * y[1] * y[1];
  };
  p.jac_f_z = [](double, std::span<const double> y, std::span<const double>, Matrix& j) {
    j = Matrix(4, 1);
    j(0, 0) = y[2] * y[3] + y[0] * y[1];
    j(1, 0) = -y[2] * y[3] * y[3] * y[1] * y[1];
  };
  p.jac_g_y = [](double, std::span<const double> y, Matrix& j) {
    j = Matrix(1, 4);
    j(0, 0) = y[3];
    j(0, 1) = -y[2];
    j(0, 2) = -y[1];
    j(0, 3) = y[0];
  };

  p.exact = [](double t) {
    return State{t,
                 {std::exp(2.0 * t), std::exp(-t), std::exp(2.0 * t), std::exp(-t)},
                 {std::exp(t)}};
  };

  p.f_record = [](ad::Tape&, double, std::span<const ad::Var> y, std::span<const ad::Var> z) {
    std::vector<ad::Var> out(4);
    hessenberg_rhs<ad::Var>(y, z, out);
    return out;
  };
  p.g_record = [](ad::Tape&, double, std::span<const ad::Var> y) {
    std::vector<ad::Var> out(1);
    hessenberg_constraint<ad::Var>(y, out);
    return out;
  };
  return p;
}

DaeProblem pendulum_problem(double mass, double lambda) {
  if (mass == 0.0) throw std::invalid_argument("pendulum_problem: m must be nonzero");

  DaeProblem p;
  p.name = "pendulum";
  p.dim_y = 4;
  p.dim_z = 1;
  p.t0 = 0.0;
  p.y0 = {1.0, 0.0, 0.0, 1.0};
  p.z0 = {1.0};
  p.params = {{"m", mass}, {"lambda", lambda}};

  p.f = [mass, lambda](double, std::span<const double> y, std::span<const double> z,
                       std::span<double> out) {
    pendulum_rhs<double>(mass, lambda, y, z, out);
  };
  p.g = [](double, std::span<const double> y, std::span<double> out) {
    pendulum_constraint<double>(y, out);
  };

  p.jac_f_y = [mass](double, std::span<const double>, std::span<const double> z, Matrix& j) {
    j = Matrix(4, 4);
    j(0, 2) = 1.0;
    j(1, 3) = 1.0;
    j(2, 0) = -z[0];
    j(3, 1) = -z[0] / mass;
  };
  p.jac_f_z = [mass](double, std::span<const double> y, std::span<const double>, Matrix& j) {
    j = Matrix(4, 1);
    j(2, 0) = -y[0];
    j(3, 0) = -y[1] / mass;
  };
  p.jac_g_y = [](double, std::span<const double> y, Matrix& j) {
    j = Matrix(1, 4);
    j(0, 0) = y[2];
    j(0, 1) = y[3];
    j(0, 2) = y[0];
    j(0, 3) = y[1];
  };

  // One time-differentiation of g along f determines z:
  //   0 = y3^2 + y4^2 - y1^2 z - (y2^2 z + lambda y2)/m
  p.reduced_z = [mass, lambda](double, std::span<const double> y, std::span<double> out) {
    out[0] = (mass * (y[2] * y[2] + y[3] * y[3]) - lambda * y[1]) /
             (mass * y[0] * y[0] + y[1] * y[1]);
  };

  p.f_record = [mass, lambda](ad::Tape&, double, std::span<const ad::Var> y,
                              std::span<const ad::Var> z) {
    std::vector<ad::Var> out(4);
    pendulum_rhs<ad::Var>(mass, lambda, y, z, out);
    return out;
  };
  p.g_record = [](ad::Tape&, double, std::span<const ad::Var> y) {
    std::vector<ad::Var> out(1);
    pendulum_constraint<ad::Var>(y, out);
    return out;
  };
  return p;
}

DaeProblem make_problem(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "hessenberg") return hessenberg_problem();
  if (name == "pendulum") return pendulum_problem(get("m", 1.0), get("lambda", 1.0));
  throw std::invalid_argument("unknown problem '" + name + "' (valid: hessenberg, pendulum)");
}

DaeProblem index_reduced_ode(const DaeProblem& p) {
  if (!p.has_reduced_z())
    throw std::invalid_argument("index_reduced_ode: problem has no reduced_z map");

  DaeProblem ode;
  ode.name = p.name + "_reduced";
  ode.dim_y = p.dim_y;
  ode.dim_z = 0;
  ode.t0 = p.t0;
  ode.y0 = p.y0;
  ode.params = p.params;

  const auto f = p.f;
  const auto reduced = p.reduced_z;
  const int dim_z = p.dim_z;
  ode.f = [f, reduced, dim_z](double t, std::span<const double> y, std::span<const double>,
                              std::span<double> out) {
    std::vector<double> z(dim_z);
    reduced(t, y, z);
    f(t, y, z, out);
  };
  ode.g = [](double, std::span<const double>, std::span<double>) {};
  return ode;
}

}  // namespace radau
