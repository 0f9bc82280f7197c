#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "chsd/fe_space.hpp"

namespace chsd {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;
using Triplets = std::vector<Triplet>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& triplets);

struct SolveReport {
  double residual = 0.0;  // ||Ax - b||_2 / max(||b||_2, 1)
  double min_pivot = 0.0;
  int refinements = 0;
  bool reused_factorization = false;
};

/// Running maximum of the relative residual over every solve since the last
/// reset. Used by audits that need a bound over a whole run.
struct SolveStatistics {
  long solves = 0;
  double max_residual = 0.0;
};
const SolveStatistics& solve_statistics();
void reset_solve_statistics();

/// Sparse LU (COLAMD ordering, partial pivoting) with pivot screening and
/// iterative refinement. Keeps the factorization of the last matrix so that
/// repeated solves with an identical matrix skip the factorization.
class LinearSolver {
 public:
  static constexpr double kPivotTolerance = 1e-14;
  static constexpr double kResidualTolerance = 1e-10;

  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Throws SingularMatrix if a pivot falls below kPivotTolerance * max|A|.
  void factorize(const SparseMatrix& a);
  bool holds(const SparseMatrix& a) const;
  Vector solve(const Vector& b, SolveReport* report = nullptr) const;
  /// Refactorizes only when `a` differs from the held matrix.
  Vector solve(const SparseMatrix& a, const Vector& b, SolveReport* report = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Vector solve_sparse(const SparseMatrix& a, const Vector& b, SolveReport* report = nullptr);

/// One `row col value` line per stored entry, column-major order.
void write_coordinate(std::ostream& out, const SparseMatrix& a);

}  // namespace chsd
