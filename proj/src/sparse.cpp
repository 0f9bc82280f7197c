#include "chsd/sparse.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "chsd/errors.hpp"

namespace chsd {

SparseMatrix from_triplets(int rows, int cols, const Triplets& triplets) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

namespace {

SolveStatistics g_statistics;

class PivotedLU : public Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  double min_abs_pivot() const {
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < this->cols(); ++j) {
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          smallest = std::min(smallest, std::abs(it.value()));
          break;
        }
      }
    }
    return smallest;
  }
};

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

bool identical(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  const int nnz = static_cast<int>(a.nonZeros());
  return std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1, b.outerIndexPtr()) &&
         std::equal(a.innerIndexPtr(), a.innerIndexPtr() + nnz, b.innerIndexPtr()) &&
         std::equal(a.valuePtr(), a.valuePtr() + nnz, b.valuePtr());
}

}  // namespace

const SolveStatistics& solve_statistics() { return g_statistics; }
void reset_solve_statistics() { g_statistics = {}; }

struct LinearSolver::Impl {
  SparseMatrix matrix;
  PivotedLU lu;
  double min_pivot = 0.0;
  bool ready = false;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("solve_sparse needs a square matrix");
  impl_->ready = false;
  impl_->matrix = a;
  impl_->matrix.makeCompressed();
  const double scale = max_abs(impl_->matrix);
  if (a.rows() == 0) {
    impl_->ready = true;
    return;
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularMatrix("matrix is zero or not finite");
  impl_->lu.analyzePattern(impl_->matrix);
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrix("LU factorization failed: " + impl_->lu.lastErrorMessage());
  }
  impl_->min_pivot = impl_->lu.min_abs_pivot();
  if (!(impl_->min_pivot >= kPivotTolerance * scale)) {
    std::ostringstream msg;
    msg << "pivot " << impl_->min_pivot << " below " << kPivotTolerance << " x " << scale;
    throw SingularMatrix(msg.str());
  }
  impl_->ready = true;
}

bool LinearSolver::holds(const SparseMatrix& a) const {
  return impl_->ready && identical(impl_->matrix, a);
}

Vector LinearSolver::solve(const Vector& b, SolveReport* report) const {
  const SparseMatrix& a = impl_->matrix;
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length differs from matrix size");
  if (a.rows() == 0) return Vector();
  const double denom = std::max(b.norm(), 1.0);
  Vector x = impl_->lu.solve(b);
  Vector r = b - a * x;
  double residual = r.norm() / denom;
  int refinements = 0;
  while (residual > 0.01 * kResidualTolerance && refinements < 4) {
    const Vector dx = impl_->lu.solve(r);
    const Vector candidate = x + dx;
    const Vector r_new = b - a * candidate;
    const double res_new = r_new.norm() / denom;
    ++refinements;
    if (!(res_new < residual)) break;
    x = candidate;
    r = r_new;
    residual = res_new;
  }
  if (!std::isfinite(residual) || residual > kResidualTolerance) {
    std::ostringstream msg;
    msg << "relative residual " << residual << " exceeds " << kResidualTolerance;
    throw SingularMatrix(msg.str());
  }
  ++g_statistics.solves;
  g_statistics.max_residual = std::max(g_statistics.max_residual, residual);
  if (report) {
    report->residual = residual;
    report->min_pivot = impl_->min_pivot;
    report->refinements = refinements;
  }
  return x;
}

Vector LinearSolver::solve(const SparseMatrix& a, const Vector& b, SolveReport* report) {
  const bool reuse = holds(a);
  if (!reuse) factorize(a);
  Vector x = solve(b, report);
  if (report) report->reused_factorization = reuse;
  return x;
}

Vector solve_sparse(const SparseMatrix& a, const Vector& b, SolveReport* report) {
  LinearSolver solver;
  solver.factorize(a);
  return solver.solve(b, report);
}

void write_coordinate(std::ostream& out, const SparseMatrix& a) {
  out << std::setprecision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace chsd
