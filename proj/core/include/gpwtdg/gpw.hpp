#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "gpwtdg/coefficient.hpp"
#include "gpwtdg/geometry.hpp"

namespace gpwtdg {

using Complex = std::complex<double>;

/// Dense triangular table of complex coefficients c_{ij}, 0 <= i+j <= degree.
class PolyCoeffs {
 public:
  explicit PolyCoeffs(int degree);

  int degree() const { return degree_; }
  Complex& at(int i, int j) { return c_[offset(i, j)]; }
  const Complex& at(int i, int j) const { return c_[offset(i, j)]; }

 private:
  size_t offset(int i, int j) const;
  int degree_;
  std::vector<Complex> c_;
};

struct WaveSample {
  Complex value{};
  std::array<Complex, 2> gradient{};
  Complex laplacian{};
};

/// A generalized plane wave exp(P(x, y)) with P a complex polynomial of total
/// degree q+1 in coordinates centered at the element centroid. The
/// coefficients cancel the Taylor expansion of (Delta + kappa^2 eps) exp(P)
/// through total order q-1. Immutable; evaluation is thread-safe.
class GpwFunction {
 public:
  GpwFunction(PolyCoeffs coeffs, Point centroid, double theta, Complex normalization,
              double kappa, int order);

  const PolyCoeffs& coeffs() const { return coeffs_; }
  Point centroid() const { return centroid_; }
  double theta() const { return theta_; }
  Complex normalization() const { return normalization_; }
  double kappa() const { return kappa_; }
  int order() const { return order_; }           // q
  int degree() const { return coeffs_.degree(); }  // d_P = q + 1

  /// value = e^P, gradient = e^P grad(P), laplacian = e^P (lap(P) + grad(P).grad(P)).
  WaveSample evaluate(Point p) const;

  /// (Delta + kappa^2 eps) e^P at a point, with eps evaluated exactly.
  Complex helmholtz_residual(Point p, const CoefficientField& field) const;

  /// Bound on |P(x) - P(centroid)| over the disk of the given radius; this is
  /// what quadrature orders must resolve (oscillation and growth of e^P).
  double phase_bound(double radius) const;

 private:
  PolyCoeffs coeffs_;
  Point centroid_;
  double theta_;
  Complex normalization_;
  double kappa_;
  int order_;
};

/// Computes the polynomial coefficients by the explicit recursion: for each
/// (i, j) with i+j <= q-1, in order of increasing first index,
///   lambda_{i+2,j} = -[ kappa^2 d_x^i d_y^j eps / (i! j!)
///                      + (j+2)(j+1) lambda_{i,j+2}
///                      + sum of first-derivative products ] / ((i+2)(i+1)),
/// starting from lambda_{0,0} = 0, (lambda_{1,0}, lambda_{0,1}) = N (cos, sin) theta
/// and lambda_{i,j} = 0 for i in {0,1}, 1 < i+j <= q+1.
GpwFunction build_gpw(const CoefficientField& field, Point centroid, double kappa, int q,
                      double theta, Complex normalization);

/// N = i kappa sqrt(eps(centroid)) with the principal square root (real N for
/// negative eps); falls back to N = i kappa when |eps(centroid)| < 1e-12.
Complex default_normalization(const CoefficientField& field, Point centroid, double kappa);

/// The p = 2n+1 basis functions of one element, equi-spaced directions
/// theta_l = 2 pi (l-1) / p, shared centroid and normalization.
class GpwBasisSet {
 public:
  GpwBasisSet(int element, std::vector<GpwFunction> functions, int n, int q, double kappa,
              bool degenerate_normalization);

  int element() const { return element_; }
  int size() const { return static_cast<int>(functions_.size()); }  // p
  const GpwFunction& function(int l) const { return functions_[l]; }
  const std::vector<GpwFunction>& functions() const { return functions_; }
  int n() const { return n_; }
  int q() const { return q_; }
  double kappa() const { return kappa_; }
  bool degenerate_normalization() const { return degenerate_normalization_; }

  /// Worst phase bound over the p functions (see GpwFunction::phase_bound).
  double phase_bound(double radius) const;

 private:
  int element_;
  std::vector<GpwFunction> functions_;
  int n_, q_;
  double kappa_;
  bool degenerate_normalization_;
};

GpwBasisSet build_basis_set(const CoefficientField& field, Point centroid, int element,
                            double kappa, int n, int q);

/// Bases for every mesh element (independent per element, runs in parallel).
std::vector<GpwBasisSet> build_all_bases(const CoefficientField& field, const Mesh& mesh,
                                         double kappa, int n, int q, int threads = 0);

struct ResidualOrderReport {
  bool exact = false;  // residual below 1e-12 * max(1, kappa^2) at every radius
  double slope = 0.0;  // least-squares slope of log max-residual vs log radius
  std::vector<double> radii;
  std::vector<double> max_residual;
};

/// Samples |(Delta + kappa^2 eps) e^P| on circles around the centroid and fits
/// the decay order.
ResidualOrderReport residual_order(const GpwFunction& gpw, const CoefficientField& field,
                                   std::span<const double> radii, int samples_per_circle = 32);

/// Debug export, one line per coefficient: "i j re im".
void write_coefficients(const GpwFunction& gpw, std::ostream& out);

}  // namespace gpwtdg
