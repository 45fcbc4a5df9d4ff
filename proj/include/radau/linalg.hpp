#pragma once

#include <span>
#include <vector>

namespace radau {

// Dense row-major matrix. Everything in this project is small (the largest
// system is the stacked Newton matrix, v*(n+m) <= 70 rows), so a plain
// vector-backed type with LU solves is all we need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<double> row(int i) { return {a_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<const double> row(int i) const { return {a_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

// Partial-pivoting LU factorization. `singular` is set instead of throwing so
// callers can map it onto their own failure reporting (Newton steps report a
// singular iteration matrix as a step failure, not an exception).
struct LuFactors {
  Matrix lu;
  std::vector<int> perm;
  int sign = 1;
  bool singular = false;
};

LuFactors lu_factor(Matrix a);
void lu_solve_inplace(const LuFactors& f, std::span<double> b);
std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b);
double lu_determinant(const LuFactors& f);

// Convenience solve; throws NumericalError when the matrix is singular.
std::vector<double> solve_dense(const Matrix& a, std::span<const double> b);

// Solves the dual Vandermonde system sum_j x[j] * nodes[j]^k = rhs[k],
// k = 0..n-1, with the Bjorck-Pereyra recurrences (Golub & Van Loan,
// Alg. 4.6.2). For distinct increasing nodes in (0,1] this is far more
// accurate than LU on the explicitly formed Vandermonde matrix.
std::vector<double> solve_vandermonde_dual(std::span<const double> nodes,
                                           std::span<const double> rhs);

double max_abs(std::span<const double> v);

}  // namespace radau
