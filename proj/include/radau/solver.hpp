#pragma once

#include <span>
#include <string>
#include <vector>

#include "radau/dae.hpp"
#include "radau/tableau.hpp"

namespace radau {

struct NewtonConfig {
  double tol = 1e-12;   // scaled max-norm residual tolerance
  int max_iters = 50;
};

enum class StepStatus { ok, no_convergence, singular_matrix };

// One Radau IIA step. Stiff accuracy makes the endpoint the last stage:
// y_next and z_next are copies of row v of xi / zeta.
struct StepSolution {
  Matrix xi;    // v x n stage differential values
  Matrix zeta;  // v x m stage algebraic values
  std::vector<double> y_next;
  std::vector<double> z_next;
  int newton_iters = 0;
  double residual = 0.0;
};

struct StepResult {
  StepStatus status = StepStatus::ok;
  StepSolution solution;
  std::string message;
  bool ok() const { return status == StepStatus::ok; }
};

// Full Newton iteration on the stacked v*(n+m) stage system
//   xi_i - y_n - h sum_j a_ij f(t_n + c_j h, xi_j, zeta_j) = 0
//   g(t_n + c_i h, xi_i) / h = 0
// with dense LU on the iteration matrix and initial guess xi_i = y_n,
// zeta_i = z_n. Convergence is measured in a scaled max norm: differential
// residuals relative to 1 + |y_n|_inf, constraint residuals in g units
// relative to 1 + |z_n|_inf (so the criterion stays meaningful as h -> 0
// even though the solve itself uses the 1/h-scaled rows).
StepResult radau_step(const DaeProblem& p, const Tableau& tab, double t_n,
                      std::span<const double> y_n, std::span<const double> z_n, double h,
                      const NewtonConfig& cfg = {});

// Iteration matrix at the given stage values, stage-major ordering
// [xi_1, zeta_1, ..., xi_v, zeta_v]: differential blocks
// delta_ij I - h a_ij f_y, algebraic columns -h a_ij f_z, constraint rows
// g_y / h on the diagonal stage.
Matrix newton_iteration_matrix(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                               const Matrix& xi, const Matrix& zeta);

struct Trajectory {
  std::vector<double> grid;
  std::vector<State> states;       // states[0] is the initial state
  std::vector<StepSolution> steps; // one per grid interval
  StepStatus status = StepStatus::ok;
  std::string diagnostic;
  bool ok() const { return status == StepStatus::ok; }
};

// Number of uniform steps covering [t0, t_end]; (t_end - t0)/h must be an
// integer up to rounding slop.
int step_count(double t0, double t_end, double h);

// Fixed-step integration chaining radau_step. On a step failure the partial
// trajectory is returned with status and diagnostics set.
Trajectory integrate(const DaeProblem& p, const Tableau& tab, double t0, double t_end, double h,
                     const NewtonConfig& cfg = {});

}  // namespace radau
