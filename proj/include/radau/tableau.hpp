#pragma once

#include <span>
#include <vector>

#include "radau/linalg.hpp"

namespace radau {

// Butcher tableau of the v-stage Radau IIA collocation method. The scheme is
// stiffly accurate: c[v-1] == 1 and b is the last row of a, so the step
// endpoint coincides with the last stage. Classical order is 2v - 1.
struct Tableau {
  int stages = 0;
  std::vector<double> c;  // abscissae, strictly increasing in (0, 1]
  Matrix a;               // stage coefficients a_ij
  std::vector<double> b;  // quadrature weights, equal to row v of a
  int order = 0;          // 2 * stages - 1

  double time_for_stage(double t_n, double h, int i) const { return t_n + c[i] * h; }
};

// Maximum absolute residuals of the simplifying order conditions:
//   B(2v-1):  sum_i b_i c_i^{k-1} = 1/k                       k = 1..2v-1
//   C(v):     sum_j a_ij c_j^{k-1} = c_i^k / k                k = 1..v
//   D(v-1):   sum_i b_i c_i^{k-1} a_ij = (b_j/k)(1 - c_j^k)   k = 1..v-1
// Empty families (e.g. D for v = 1) report 0.
struct OrderConditionResiduals {
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double max() const { return b > c ? (b > d ? b : d) : (c > d ? c : d); }
};

// Radau IIA abscissae for 1 <= stages <= 10: the roots of
// d^{v-1}/dx^{v-1} [ x^{v-1} (x-1)^v ], sorted ascending, last entry exactly 1.
std::vector<double> radau_nodes(int stages);

// Full tableau: a is assembled row by row from the C(v) conditions (a dual
// Vandermonde solve per row), b is copied from the last row.
Tableau radau_tableau(int stages);

OrderConditionResiduals verify_order_conditions(const Tableau& t);

}  // namespace radau
