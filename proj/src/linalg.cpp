#include "radau/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "radau/errors.hpp"

namespace radau {

LuFactors lu_factor(Matrix a) {
  const int n = a.rows();
  LuFactors f;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      continue;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    const double inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv;
      a(i, k) = l;
      for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

void lu_solve_inplace(const LuFactors& f, std::span<double> b) {
  const int n = f.lu.rows();
  // apply permutation
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  // forward substitution, unit lower triangle
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  // back substitution
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  for (int i = 0; i < n; ++i) b[i] = x[i];
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b) {
  std::vector<double> x(b.begin(), b.end());
  lu_solve_inplace(f, x);
  return x;
}

double lu_determinant(const LuFactors& f) {
  if (f.singular) return 0.0;
  double d = static_cast<double>(f.sign);
  for (int i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
  return d;
}

std::vector<double> solve_dense(const Matrix& a, std::span<const double> b) {
  LuFactors f = lu_factor(a);
  if (f.singular) throw NumericalError("solve_dense: singular matrix");
  return lu_solve(f, b);
}

std::vector<double> solve_vandermonde_dual(std::span<const double> nodes,
                                           std::span<const double> rhs) {
  const int n = static_cast<int>(nodes.size());
  if (rhs.size() != nodes.size()) throw std::invalid_argument("solve_vandermonde_dual: size mismatch");
  std::vector<double> z(rhs.begin(), rhs.end());
  for (int k = 0; k < n - 1; ++k)
    for (int i = n - 1; i >= k + 1; --i) z[i] -= nodes[k] * z[i - 1];
  for (int k = n - 2; k >= 0; --k) {
    for (int i = k + 1; i < n; ++i) {
      const double d = nodes[i] - nodes[i - k - 1];
      if (d == 0.0) throw NumericalError("solve_vandermonde_dual: duplicate nodes");
      z[i] /= d;
    }
    for (int i = k; i < n - 1; ++i) z[i] -= z[i + 1];
  }
  return z;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace radau
