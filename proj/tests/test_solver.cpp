#include <doctest.h>

#include <limits>
#include <random>

#include "gpwtdg/solver.hpp"

using namespace gpwtdg;

namespace {

// wrap a dense matrix into a one-block system
BlockSystem block_wrap(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& b) {
  BlockSystem system(1, static_cast<int>(m.rows()));
  system.add_block(0, 0) = m;
  system.rhs() = b;
  return system;
}

}  // namespace

TEST_CASE("identity and diagonal systems") {
  const int n = 6;
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b[i] = Complex(i + 1, -i);
  const auto identity = block_wrap(Eigen::MatrixXcd::Identity(n, n), b);
  const SolveReport r = solve_direct(identity);
  CHECK((r.solution - b).norm() == 0.0);
  CHECK(r.relative_residual == 0.0);
  CHECK(r.condition_estimate == doctest::Approx(1.0));

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = Complex(2, 0);
  m(1, 1) = Complex(0, 1);
  Eigen::VectorXcd rhs(2);
  rhs << Complex(2, 0), Complex(0, 1);
  const SolveReport r2 = solve_direct(block_wrap(m, rhs));
  CHECK(std::abs(r2.solution[0] - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(r2.solution[1] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("condition estimate of diag(1, 1e-6)") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(1, 1) = Complex(1e-6, 0);
  const auto system = block_wrap(m, Eigen::VectorXcd::Ones(2));
  const double cond = condition_estimate(system);
  CHECK(cond > 1e6 / 3);
  CHECK(cond < 3e6);
}

TEST_CASE("random well-conditioned recovery") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const int n = 50;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng)) + (i == j ? 10.0 : 0.0);
  Eigen::VectorXcd x_known(n);
  for (int i = 0; i < n; ++i) x_known[i] = Complex(dist(rng), dist(rng));
  const Eigen::VectorXcd b = m * x_known;

  const SolveReport r = solve_direct(block_wrap(m, b));
  CHECK(r.relative_residual < 1e-12);
  CHECK((r.solution - x_known).norm() / x_known.norm() < 1e-10);

  // residual recomputation invariant
  const Eigen::SparseMatrix<Complex> sp = block_wrap(m, b).to_sparse();
  const double recomputed = (b - sp * r.solution).norm() / b.norm();
  CHECK(std::abs(recomputed - r.relative_residual) < 1e-14);
}

TEST_CASE("singular systems are reported") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;  // third row/column identically zero
  const auto system = block_wrap(m, Eigen::VectorXcd::Ones(3));
  CHECK_THROWS_AS(solve_direct(system), SolverError);
  CHECK(condition_estimate(system) == std::numeric_limits<double>::infinity());
}

TEST_CASE("sparse path agrees with the dense path") {
  // block tridiagonal system large enough for the sparse branch
  const int blocks = 500, p = 5;  // 2500 unknowns
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  BlockSystem system(blocks, p);
  for (int k = 0; k < blocks; ++k) {
    Eigen::MatrixXcd diag(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) diag(i, j) = Complex(dist(rng), dist(rng)) + (i == j ? 8.0 : 0.0);
    system.add_block(k, k) = diag;
    if (k > 0) {
      Eigen::MatrixXcd off(p, p);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) off(i, j) = 0.1 * Complex(dist(rng), dist(rng));
      system.add_block(k, k - 1) = off;
      system.add_block(k - 1, k) = off.adjoint();
    }
  }
  Eigen::VectorXcd x_known(system.dimension());
  for (int i = 0; i < system.dimension(); ++i) x_known[i] = Complex(dist(rng), dist(rng));
  system.rhs() = system.to_sparse() * x_known;

  const SolveReport r = solve_direct(system);
  CHECK(r.relative_residual < 1e-12);
  CHECK((r.solution - x_known).norm() / x_known.norm() < 1e-9);
  CHECK(r.condition_estimate >= 1.0);
}
