#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "radau/autodiff.hpp"
#include "radau/linalg.hpp"

namespace radau {

struct State {
  double t = 0.0;
  std::vector<double> y;
  std::vector<double> z;
};

// Semi-explicit index-2 DAE:
//   y' = f(t, y, z),   0 = g(t, y),   with g_y * f_z nonsingular.
//
// Problems are immutable after construction. Analytic Jacobians are
// optional; eval_* falls back to forward finite differences. The *_record
// callbacks re-express f and g on an autodiff tape so the PINN loss can
// backpropagate through them; they are absent for problems that only ever
// meet the classical solver.
struct DaeProblem {
  std::string name;
  int dim_y = 0;
  int dim_z = 0;
  double t0 = 0.0;
  std::vector<double> y0;
  std::vector<double> z0;

  std::function<void(double, std::span<const double>, std::span<const double>, std::span<double>)> f;
  std::function<void(double, std::span<const double>, std::span<double>)> g;

  std::function<void(double, std::span<const double>, std::span<const double>, Matrix&)> jac_f_y;
  std::function<void(double, std::span<const double>, std::span<const double>, Matrix&)> jac_f_z;
  std::function<void(double, std::span<const double>, Matrix&)> jac_g_y;

  std::function<State(double)> exact;  // closed-form solution, when known
  std::function<void(double, std::span<const double>, std::span<double>)> reduced_z;  // hidden constraint solved for z

  std::map<std::string, double> params;

  std::function<std::vector<ad::Var>(ad::Tape&, double, std::span<const ad::Var>, std::span<const ad::Var>)> f_record;
  std::function<std::vector<ad::Var>(ad::Tape&, double, std::span<const ad::Var>)> g_record;

  bool has_exact() const { return static_cast<bool>(exact); }
  bool has_reduced_z() const { return static_cast<bool>(reduced_z); }
};

// Jacobians of f and g: analytic when the problem supplies them, otherwise
// forward finite differences with step sqrt(eps) * max(1, |x_i|).
Matrix eval_f_y(const DaeProblem& p, double t, std::span<const double> y, std::span<const double> z);
Matrix eval_f_z(const DaeProblem& p, double t, std::span<const double> y, std::span<const double> z);
Matrix eval_g_y(const DaeProblem& p, double t, std::span<const double> y);

struct ConsistencyReport {
  double g_residual = 0.0;  // ||g(t, y)||_inf
  double gyfz_det = 0.0;    // det(g_y * f_z), nonzero along index-2 trajectories
};

ConsistencyReport check_consistency(const DaeProblem& p, const State& s);

}  // namespace radau
