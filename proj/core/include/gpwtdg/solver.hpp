#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <memory>
#include <stdexcept>

#include "gpwtdg/assembly.hpp"

namespace gpwtdg {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  Eigen::VectorXcd solution;
  double relative_residual = 0.0;  // recomputed from the assembled operator
  double condition_estimate = 0.0;
  double factor_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// LU factorization of a complex system: dense with partial pivoting below
/// 2000 unknowns, sparse LU above. Reentrant for distinct systems.
class DirectFactorization {
 public:
  explicit DirectFactorization(Eigen::SparseMatrix<Complex> matrix);
  ~DirectFactorization();

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd solve_adjoint(const Eigen::VectorXcd& b) const;

  /// Hager-style 1-norm condition estimate; +infinity for a singular system.
  double condition_estimate() const;

  bool singular() const;
  const Eigen::SparseMatrix<Complex>& matrix() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Factorizes, solves, polishes with one step of iterative refinement and
/// reports the residual recomputed from the sparse operator. Throws
/// SolverError on an exactly singular factorization.
SolveReport solve_direct(const BlockSystem& system);

double condition_estimate(const BlockSystem& system);

}  // namespace gpwtdg
