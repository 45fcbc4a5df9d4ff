#include "radau/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace radau {
namespace {

struct StageResidual {
  std::vector<double> rows;   // v*(n+m), constraint rows divided by h
  double err_diff = 0.0;      // max |F| over differential rows
  double err_alg = 0.0;       // max |g| over constraint rows (unscaled by h)
};

StageResidual stage_residual(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                             std::span<const double> y_n, const Matrix& xi, const Matrix& fvals) {
  const int v = tab.stages, n = p.dim_y, m = p.dim_z;
  StageResidual r;
  r.rows.assign(static_cast<std::size_t>(v) * (n + m), 0.0);
  std::vector<double> gv(m);
  for (int i = 0; i < v; ++i) {
    double* row = r.rows.data() + static_cast<std::size_t>(i) * (n + m);
    for (int c = 0; c < n; ++c) {
      double acc = xi(i, c) - y_n[c];
      for (int j = 0; j < v; ++j) acc -= h * tab.a(i, j) * fvals(j, c);
      row[c] = acc;
      r.err_diff = std::max(r.err_diff, std::abs(acc));
    }
    if (m > 0) {
      p.g(tab.time_for_stage(t_n, h, i), xi.row(i), gv);
      for (int c = 0; c < m; ++c) {
        row[n + c] = gv[c] / h;
        r.err_alg = std::max(r.err_alg, std::abs(gv[c]));
      }
    }
  }
  return r;
}

void eval_stage_f(const DaeProblem& p, const Tableau& tab, double t_n, double h, const Matrix& xi,
                  const Matrix& zeta, Matrix& fvals) {
  std::vector<double> fv(p.dim_y);
  for (int j = 0; j < tab.stages; ++j) {
    p.f(tab.time_for_stage(t_n, h, j), xi.row(j), zeta.row(j), fv);
    for (int c = 0; c < p.dim_y; ++c) fvals(j, c) = fv[c];
  }
}

}  // namespace

Matrix newton_iteration_matrix(const DaeProblem& p, const Tableau& tab, double t_n, double h,
                               const Matrix& xi, const Matrix& zeta) {
  const int v = tab.stages, n = p.dim_y, m = p.dim_z;
  const int dim = v * (n + m);
  Matrix jac(dim, dim);

  for (int j = 0; j < v; ++j) {
    const double tj = tab.time_for_stage(t_n, h, j);
    const Matrix fy = eval_f_y(p, tj, xi.row(j), zeta.row(j));
    const Matrix fz = m > 0 ? eval_f_z(p, tj, xi.row(j), zeta.row(j)) : Matrix(n, 0);
    for (int i = 0; i < v; ++i) {
      const int row0 = i * (n + m);
      const int col0 = j * (n + m);
      const double w = h * tab.a(i, j);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) jac(row0 + r, col0 + c) = -w * fy(r, c);
        for (int c = 0; c < m; ++c) jac(row0 + r, col0 + n + c) = -w * fz(r, c);
      }
      if (i == j)
        for (int r = 0; r < n; ++r) jac(row0 + r, col0 + r) += 1.0;
    }
  }
  for (int i = 0; i < v && m > 0; ++i) {
    const Matrix gy = eval_g_y(p, tab.time_for_stage(t_n, h, i), xi.row(i));
    const int row0 = i * (n + m) + n;
    const int col0 = i * (n + m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < n; ++c) jac(row0 + r, col0 + c) = gy(r, c) / h;
  }
  return jac;
}

StepResult radau_step(const DaeProblem& p, const Tableau& tab, double t_n,
                      std::span<const double> y_n, std::span<const double> z_n, double h,
                      const NewtonConfig& cfg) {
  if (h <= 0.0) throw std::invalid_argument("radau_step: h must be positive");
  const int v = tab.stages, n = p.dim_y, m = p.dim_z;

  StepResult res;
  Matrix xi(v, n), zeta(v, m);
  for (int i = 0; i < v; ++i) {
    for (int c = 0; c < n; ++c) xi(i, c) = y_n[c];
    for (int c = 0; c < m; ++c) zeta(i, c) = z_n[c];
  }

  const double scale_y = 1.0 + max_abs(y_n);
  const double scale_z = 1.0 + max_abs(z_n);

  Matrix fvals(v, n);
  int iters = 0;
  double err = 0.0;
  while (true) {
    eval_stage_f(p, tab, t_n, h, xi, zeta, fvals);
    const StageResidual r = stage_residual(p, tab, t_n, h, y_n, xi, fvals);
    err = std::max(r.err_diff / scale_y, r.err_alg / scale_z);
    if (err <= cfg.tol) break;
    if (iters >= cfg.max_iters) {
      res.status = StepStatus::no_convergence;
      res.message = "Newton did not converge in " + std::to_string(cfg.max_iters) +
                    " iterations (scaled residual " + std::to_string(err) + ")";
      break;
    }

    const Matrix jac = newton_iteration_matrix(p, tab, t_n, h, xi, zeta);
    const LuFactors lu = lu_factor(jac);
    if (lu.singular) {
      res.status = StepStatus::singular_matrix;
      res.message = "singular Newton iteration matrix (index or step-size problem)";
      break;
    }
    std::vector<double> delta(r.rows.size());
    for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = -r.rows[k];
    lu_solve_inplace(lu, delta);
    for (int i = 0; i < v; ++i) {
      const double* d = delta.data() + static_cast<std::size_t>(i) * (n + m);
      for (int c = 0; c < n; ++c) xi(i, c) += d[c];
      for (int c = 0; c < m; ++c) zeta(i, c) += d[n + c];
    }
    ++iters;
  }

  StepSolution& sol = res.solution;
  sol.xi = std::move(xi);
  sol.zeta = std::move(zeta);
  const auto last_y = sol.xi.row(v - 1);
  const auto last_z = sol.zeta.row(v - 1);
  sol.y_next.assign(last_y.begin(), last_y.end());
  sol.z_next.assign(last_z.begin(), last_z.end());
  sol.newton_iters = iters;
  sol.residual = err;
  return res;
}

int step_count(double t0, double t_end, double h) {
  if (h <= 0.0) throw std::invalid_argument("step_count: h must be positive");
  if (t_end < t0) throw std::invalid_argument("step_count: t_end must be >= t0");
  const double ratio = (t_end - t0) / h;
  const auto steps = static_cast<long long>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-6 * std::max(1.0, std::abs(ratio)))
    throw std::invalid_argument("step_count: (t_end - t0)/h is not an integer number of steps");
  return static_cast<int>(steps);
}

Trajectory integrate(const DaeProblem& p, const Tableau& tab, double t0, double t_end, double h,
                     const NewtonConfig& cfg) {
  const int steps = step_count(t0, t_end, h);

  Trajectory traj;
  traj.grid.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.steps.reserve(steps);
  traj.grid.push_back(t0);
  traj.states.push_back(State{t0, p.y0, p.z0});

  std::vector<double> y = p.y0, z = p.z0;
  for (int k = 0; k < steps; ++k) {
    const double t_n = t0 + k * h;
    StepResult step = radau_step(p, tab, t_n, y, z, h, cfg);
    if (!step.ok()) {
      traj.status = step.status;
      traj.diagnostic =
          "step " + std::to_string(k) + " at t = " + std::to_string(t_n) + ": " + step.message;
      return traj;
    }
    y = step.solution.y_next;
    z = step.solution.z_next;
    const double t_next = t0 + (k + 1) * h;
    traj.grid.push_back(t_next);
    traj.states.push_back(State{t_next, y, z});
    traj.steps.push_back(std::move(step.solution));
  }
  return traj;
}

}  // namespace radau
