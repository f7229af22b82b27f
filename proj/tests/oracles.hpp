#pragma once

// Test-side oracles, independent of the code paths they check: polynomial
// Taylor algebra for the basis residual, and quadrature-based best
// approximations.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "gpwtdg/analytic.hpp"
#include "gpwtdg/geometry.hpp"
#include "gpwtdg/gpw.hpp"

namespace gpwtdg::testing {

using Complex = std::complex<double>;

/// Dense bivariate polynomial in centered coordinates, coefficient of
/// X^i Y^j at c[i][j].
struct Poly2 {
  explicit Poly2(int degree) : degree(degree) {
    c.assign(degree + 1, std::vector<Complex>(degree + 1, Complex(0, 0)));
  }
  int degree;
  std::vector<std::vector<Complex>> c;
};

Poly2 poly_dx(const Poly2& p);
Poly2 poly_dy(const Poly2& p);
Poly2 poly_mul(const Poly2& a, const Poly2& b, int max_degree);
Poly2 poly_add(const Poly2& a, const Poly2& b);

/// Taylor polynomial (through max_degree) of lap P + grad P . grad P +
/// kappa^2 eps about the centroid, assembled purely by polynomial calculus on
/// the coefficient table plus the field's Taylor data.
Poly2 helmholtz_residual_taylor(const GpwFunction& gpw, const CoefficientField& field,
                                int max_degree);

/// Best L2([0,1]^2) approximation error of f from span{basis}, by normal
/// equations with an m x m tensor Gauss rule; the returned error is re-
/// measured by quadrature of the residual.
double best_approx_error_square(const std::vector<GpwFunction>& basis,
                                const std::function<Complex(Point)>& f, int quad_points);

/// Weighted least-squares fit of f at triangle quadrature points; returns the
/// max pointwise deviation at those points.
double linf_fit_error_triangle(const GpwBasisSet& basis, const std::array<Point, 3>& tri,
                               const std::function<Complex(Point)>& f, int quad_degree);

/// Element-wise L2 projection of an exact solution onto the discrete space
/// (block-diagonal Gram solves with an elevated rule).
Eigen::VectorXcd l2_projection(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                               const std::function<Complex(Point)>& f, int quad_degree);

}  // namespace gpwtdg::testing
