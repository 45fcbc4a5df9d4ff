#include "radau/dae.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace radau {
namespace {

double fd_step(double x) {
  static const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return sqrt_eps * std::max(1.0, std::abs(x));
}

}  // namespace

Matrix eval_f_y(const DaeProblem& p, double t, std::span<const double> y, std::span<const double> z) {
  Matrix j(p.dim_y, p.dim_y);
  if (p.jac_f_y) {
    p.jac_f_y(t, y, z, j);
    return j;
  }
  std::vector<double> yp(y.begin(), y.end());
  std::vector<double> base(p.dim_y), bumped(p.dim_y);
  p.f(t, y, z, base);
  for (int c = 0; c < p.dim_y; ++c) {
    const double h = fd_step(yp[c]);
    const double saved = yp[c];
    yp[c] += h;
    p.f(t, yp, z, bumped);
    yp[c] = saved;
    for (int r = 0; r < p.dim_y; ++r) j(r, c) = (bumped[r] - base[r]) / h;
  }
  return j;
}

Matrix eval_f_z(const DaeProblem& p, double t, std::span<const double> y, std::span<const double> z) {
  Matrix j(p.dim_y, p.dim_z);
  if (p.jac_f_z) {
    p.jac_f_z(t, y, z, j);
    return j;
  }
  std::vector<double> zp(z.begin(), z.end());
  std::vector<double> base(p.dim_y), bumped(p.dim_y);
  p.f(t, y, z, base);
  for (int c = 0; c < p.dim_z; ++c) {
    const double h = fd_step(zp[c]);
    const double saved = zp[c];
    zp[c] += h;
    p.f(t, y, zp, bumped);
    zp[c] = saved;
    for (int r = 0; r < p.dim_y; ++r) j(r, c) = (bumped[r] - base[r]) / h;
  }
  return j;
}

Matrix eval_g_y(const DaeProblem& p, double t, std::span<const double> y) {
  Matrix j(p.dim_z, p.dim_y);
  if (p.jac_g_y) {
    p.jac_g_y(t, y, j);
    return j;
  }
  std::vector<double> yp(y.begin(), y.end());
  std::vector<double> base(p.dim_z), bumped(p.dim_z);
  p.g(t, y, base);
  for (int c = 0; c < p.dim_y; ++c) {
    const double h = fd_step(yp[c]);
    const double saved = yp[c];
    yp[c] += h;
    p.g(t, yp, bumped);
    yp[c] = saved;
    for (int r = 0; r < p.dim_z; ++r) j(r, c) = (bumped[r] - base[r]) / h;
  }
  return j;
}

ConsistencyReport check_consistency(const DaeProblem& p, const State& s) {
  if (static_cast<int>(s.y.size()) != p.dim_y || static_cast<int>(s.z.size()) != p.dim_z)
    throw std::invalid_argument("check_consistency: state dimensions do not match problem");

  ConsistencyReport rep;
  std::vector<double> gv(p.dim_z);
  p.g(s.t, s.y, gv);
  rep.g_residual = max_abs(gv);

  const Matrix gy = eval_g_y(p, s.t, s.y);
  const Matrix fz = eval_f_z(p, s.t, s.y, s.z);
  Matrix prod(p.dim_z, p.dim_z);
  for (int i = 0; i < p.dim_z; ++i)
    for (int j = 0; j < p.dim_z; ++j) {
      double acc = 0.0;
      for (int k = 0; k < p.dim_y; ++k) acc += gy(i, k) * fz(k, j);
      prod(i, j) = acc;
    }
  rep.gyfz_det = lu_determinant(lu_factor(prod));
  return rep;
}

}  // namespace radau
