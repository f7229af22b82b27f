#include "gpwtdg/solver.hpp"

#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <limits>

namespace gpwtdg {

namespace {

constexpr int kDenseLimit = 2000;

double norm1(const Eigen::SparseMatrix<Complex>& m) {
  double best = 0.0;
  for (int col = 0; col < m.outerSize(); ++col) {
    double sum = 0.0;
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, col); it; ++it)
      sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace

struct DirectFactorization::Impl {
  Eigen::SparseMatrix<Complex> matrix;
  bool dense = false;
  bool singular = false;
  Eigen::PartialPivLU<Eigen::MatrixXcd> dense_lu;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> sparse_lu;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> sparse_lu_adjoint;
};

DirectFactorization::DirectFactorization(Eigen::SparseMatrix<Complex> matrix)
    : impl_(std::make_unique<Impl>()) {
  if (matrix.rows() != matrix.cols()) throw SolverError("system matrix is not square");
  impl_->matrix = std::move(matrix);
  impl_->matrix.makeCompressed();
  const int n = static_cast<int>(impl_->matrix.rows());
  impl_->dense = n < kDenseLimit;
  if (impl_->dense) {
    const Eigen::MatrixXcd full(impl_->matrix);
    impl_->dense_lu.compute(full);
    const auto& u = impl_->dense_lu.matrixLU();
    for (int i = 0; i < n; ++i)
      if (u(i, i) == Complex(0.0, 0.0)) impl_->singular = true;
  } else {
    impl_->sparse_lu.isSymmetric(false);
    impl_->sparse_lu.compute(impl_->matrix);
    if (impl_->sparse_lu.info() != Eigen::Success) {
      impl_->singular = true;
    } else {
      const Eigen::SparseMatrix<Complex> adj = impl_->matrix.adjoint();
      impl_->sparse_lu_adjoint.compute(adj);
      if (impl_->sparse_lu_adjoint.info() != Eigen::Success) impl_->singular = true;
    }
  }
}

DirectFactorization::~DirectFactorization() = default;

bool DirectFactorization::singular() const { return impl_->singular; }

const Eigen::SparseMatrix<Complex>& DirectFactorization::matrix() const { return impl_->matrix; }

Eigen::VectorXcd DirectFactorization::solve(const Eigen::VectorXcd& b) const {
  if (impl_->singular) throw SolverError("singular factorization");
  if (impl_->dense) return impl_->dense_lu.solve(b);
  return impl_->sparse_lu.solve(b);
}

Eigen::VectorXcd DirectFactorization::solve_adjoint(const Eigen::VectorXcd& b) const {
  if (impl_->singular) throw SolverError("singular factorization");
  if (impl_->dense) return impl_->dense_lu.adjoint().solve(b);
  return impl_->sparse_lu_adjoint.solve(b);
}

double DirectFactorization::condition_estimate() const {
  if (impl_->singular) return std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(impl_->matrix.rows());
  if (n == 0) return 1.0;

  // Hager's algorithm for ||A^{-1}||_1 with the complex sign vector variant.
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, Complex(1.0 / n, 0.0));
  double inv_norm = 0.0;
  for (int iter = 0; iter < 6; ++iter) {
    const Eigen::VectorXcd y = solve(x);
    inv_norm = std::max(inv_norm, y.lpNorm<1>());
    Eigen::VectorXcd xi(n);
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(y[i]);
      xi[i] = a > 0.0 ? y[i] / a : Complex(1.0, 0.0);
    }
    const Eigen::VectorXcd z = solve_adjoint(xi);
    int j = 0;
    double zmax = 0.0;
    for (int i = 0; i < n; ++i)
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        j = i;
      }
    if (zmax <= std::abs(z.dot(x))) break;
    x.setZero();
    x[j] = Complex(1.0, 0.0);
  }
  return std::max(1.0, norm1(impl_->matrix) * inv_norm);
}

SolveReport solve_direct(const BlockSystem& system) {
  using Clock = std::chrono::steady_clock;
  const Eigen::SparseMatrix<Complex> m = system.to_sparse();
  const Eigen::VectorXcd& b = system.rhs();
  if (b.size() != m.rows()) throw SolverError("rhs dimension mismatch");

  const auto t0 = Clock::now();
  DirectFactorization fact(m);
  if (fact.singular()) throw SolverError("singular factorization");
  const auto t1 = Clock::now();

  Eigen::VectorXcd x = fact.solve(b);
  // one step of iterative refinement
  const Eigen::VectorXcd r = b - m * x;
  x += fact.solve(r);
  const auto t2 = Clock::now();

  SolveReport report;
  report.solution = std::move(x);
  const double bnorm = b.norm();
  const double rnorm = (b - m * report.solution).norm();
  report.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  report.condition_estimate = fact.condition_estimate();
  report.factor_seconds = std::chrono::duration<double>(t1 - t0).count();
  report.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
  return report;
}

double condition_estimate(const BlockSystem& system) {
  DirectFactorization fact(system.to_sparse());
  if (fact.singular()) return std::numeric_limits<double>::infinity();
  return fact.condition_estimate();
}

}  // namespace gpwtdg
