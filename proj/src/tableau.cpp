#include "radau/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "radau/errors.hpp"

namespace radau {
namespace {

// Coefficients (ascending powers) of x^{v-1} (x-1)^v followed by v-1
// differentiations. All intermediate coefficients are integers; the largest
// (v = 10) is ~8.4e12, well inside the int64 range, so the expansion is exact.
std::vector<std::int64_t> radau_polynomial(int v) {
  std::vector<std::int64_t> p(2 * v, 0);
  // binomial expansion of (x-1)^v, shifted up by x^{v-1}
  std::int64_t binom = 1;
  for (int k = 0; k <= v; ++k) {
    const std::int64_t sign = ((v - k) % 2 == 0) ? 1 : -1;
    p[static_cast<std::size_t>(v - 1 + k)] = sign * binom;
    binom = binom * (v - k) / (k + 1);
  }
  for (int d = 0; d < v - 1; ++d) {
    for (std::size_t k = 1; k < p.size(); ++k) p[k - 1] = static_cast<std::int64_t>(k) * p[k];
    p.pop_back();
  }
  return p;  // degree v
}

// Synthetic division by (x - 1); exact for integer coefficients. The
// remainder is zero by construction ((x-1) divides every Leibniz term).
std::vector<std::int64_t> deflate_root_one(const std::vector<std::int64_t>& p) {
  const std::size_t n = p.size() - 1;  // degree
  std::vector<std::int64_t> q(n);
  std::int64_t carry = p[n];
  for (std::size_t k = n; k-- > 0;) {
    q[k] = carry;
    carry = p[k] + carry;
  }
  return q;  // degree n-1; `carry` is the (zero) remainder
}

double poly_eval(std::span<const double> coeff, double x) {
  double s = 0.0;
  for (std::size_t k = coeff.size(); k-- > 0;) s = s * x + coeff[k];
  return s;
}

double poly_eval_abs(std::span<const double> coeff, double x) {
  double s = 0.0;
  const double ax = std::abs(x);
  for (std::size_t k = coeff.size(); k-- > 0;) s = s * ax + std::abs(coeff[k]);
  return s;
}

std::vector<double> poly_derivative(std::span<const double> coeff) {
  std::vector<double> d(coeff.size() - 1);
  for (std::size_t k = 1; k < coeff.size(); ++k) d[k - 1] = static_cast<double>(k) * coeff[k];
  return d;
}

// Bisection on a bracketing interval followed by a Newton polish. The interior
// Radau nodes are simple and well separated, so this converges to full double
// precision without safeguards beyond the bracket.
double refine_root(std::span<const double> q, std::span<const double> dq, double lo, double hi) {
  double flo = poly_eval(q, lo);
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = poly_eval(q, mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double fx = poly_eval(q, x);
    const double dfx = poly_eval(dq, x);
    if (dfx == 0.0) break;
    const double step = fx / dfx;
    x -= step;
    if (std::abs(step) < 1e-17) break;
  }
  return x;
}

}  // namespace

std::vector<double> radau_nodes(int stages) {
  if (stages < 1 || stages > 10)
    throw std::invalid_argument("radau_nodes: stages must be in [1, 10], got " + std::to_string(stages));

  const std::vector<std::int64_t> p_int = radau_polynomial(stages);
  const std::vector<std::int64_t> q_int = deflate_root_one(p_int);
  std::vector<double> q(q_int.begin(), q_int.end());
  const std::vector<double> dq = q.size() > 1 ? poly_derivative(q) : std::vector<double>{0.0};

  // q has exactly stages-1 simple roots in (0,1); bracket them on a uniform scan.
  std::vector<double> roots;
  const int wanted = stages - 1;
  for (int gridsize : {2048, 16384, 131072}) {
    roots.clear();
    double x_prev = 0.0;
    double f_prev = poly_eval(q, x_prev);
    for (int i = 1; i <= gridsize && static_cast<int>(roots.size()) < wanted; ++i) {
      const double x = static_cast<double>(i) / gridsize;
      const double f = poly_eval(q, x);
      if (f == 0.0) {
        roots.push_back(x);
      } else if ((f_prev < 0.0) != (f < 0.0)) {
        roots.push_back(refine_root(q, dq, x_prev, x));
      }
      x_prev = x;
      f_prev = f;
    }
    if (static_cast<int>(roots.size()) == wanted) break;
  }
  if (static_cast<int>(roots.size()) != wanted)
    throw NumericalError("radau_nodes: failed to bracket all roots of the degree-" +
                         std::to_string(q.size() - 1) + " deflated collocation polynomial");

  for (double r : roots) {
    const double rel = std::abs(poly_eval(q, r)) / std::max(poly_eval_abs(q, r), 1e-300);
    if (rel > 1e-14)
      throw NumericalError("radau_nodes: root refinement residual " + std::to_string(rel) +
                           " exceeds 1e-14 (polynomial degree " + std::to_string(q.size() - 1) + ")");
  }

  std::sort(roots.begin(), roots.end());
  roots.push_back(1.0);  // c_v = 1 exactly; (x-1) was deflated analytically
  return roots;
}

Tableau radau_tableau(int stages) {
  Tableau t;
  t.stages = stages;
  t.order = 2 * stages - 1;
  t.c = radau_nodes(stages);
  t.a = Matrix(stages, stages);

  // Row i of a solves C(v): sum_j a_ij c_j^{k-1} = c_i^k / k, k = 1..v.
  std::vector<double> rhs(stages);
  for (int i = 0; i < stages; ++i) {
    double cpow = 1.0;
    for (int k = 1; k <= stages; ++k) {
      cpow *= t.c[i];
      rhs[k - 1] = cpow / k;
    }
    const std::vector<double> row = solve_vandermonde_dual(t.c, rhs);
    std::copy(row.begin(), row.end(), t.a.row(i).begin());
  }

  // Stiff accuracy: b is row v, copied rather than solved again.
  const auto last = t.a.row(stages - 1);
  t.b.assign(last.begin(), last.end());
  return t;
}

OrderConditionResiduals verify_order_conditions(const Tableau& t) {
  const int v = t.stages;
  OrderConditionResiduals r;

  for (int k = 1; k <= 2 * v - 1; ++k) {
    double s = 0.0;
    for (int i = 0; i < v; ++i) s += t.b[i] * std::pow(t.c[i], k - 1);
    r.b = std::max(r.b, std::abs(s - 1.0 / k));
  }
  for (int i = 0; i < v; ++i) {
    for (int k = 1; k <= v; ++k) {
      double s = 0.0;
      for (int j = 0; j < v; ++j) s += t.a(i, j) * std::pow(t.c[j], k - 1);
      r.c = std::max(r.c, std::abs(s - std::pow(t.c[i], k) / k));
    }
  }
  for (int k = 1; k <= v - 1; ++k) {
    for (int j = 0; j < v; ++j) {
      double s = 0.0;
      for (int i = 0; i < v; ++i) s += t.b[i] * std::pow(t.c[i], k - 1) * t.a(i, j);
      r.d = std::max(r.d, std::abs(s - t.b[j] / k * (1.0 - std::pow(t.c[j], k))));
    }
  }
  return r;
}

}  // namespace radau
