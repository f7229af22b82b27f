#include "gpwtdg/gpw.hpp"

#include <cassert>
#include <limits>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "gpwtdg/parallel.hpp"

namespace gpwtdg {

PolyCoeffs::PolyCoeffs(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree");
  c_.assign(static_cast<size_t>(degree + 1) * (degree + 2) / 2, Complex(0.0, 0.0));
}

size_t PolyCoeffs::offset(int i, int j) const {
  assert(i >= 0 && j >= 0 && i + j <= degree_);
  // rows by first index: row i holds degree_ - i + 1 entries
  return static_cast<size_t>(i) * (degree_ + 1) - static_cast<size_t>(i) * (i - 1) / 2 + j;
}

GpwFunction::GpwFunction(PolyCoeffs coeffs, Point centroid, double theta, Complex normalization,
                         double kappa, int order)
    : coeffs_(std::move(coeffs)),
      centroid_(centroid),
      theta_(theta),
      normalization_(normalization),
      kappa_(kappa),
      order_(order) {}

WaveSample GpwFunction::evaluate(Point p) const {
  const double X = p.x - centroid_.x;
  const double Y = p.y - centroid_.y;
  const int d = coeffs_.degree();

  // Monomial accumulation in centered coordinates keeps |X|,|Y| <= h_K.
  double xp[16], yp[16];
  assert(d + 1 <= 16);
  xp[0] = yp[0] = 1.0;
  for (int i = 1; i <= d; ++i) {
    xp[i] = xp[i - 1] * X;
    yp[i] = yp[i - 1] * Y;
  }

  Complex P(0.0, 0.0), Px(0.0, 0.0), Py(0.0, 0.0), Pxx(0.0, 0.0), Pyy(0.0, 0.0);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d - i; ++j) {
      const Complex c = coeffs_.at(i, j);
      if (c == Complex(0.0, 0.0)) continue;
      P += c * xp[i] * yp[j];
      if (i >= 1) Px += static_cast<double>(i) * c * xp[i - 1] * yp[j];
      if (j >= 1) Py += static_cast<double>(j) * c * xp[i] * yp[j - 1];
      if (i >= 2) Pxx += static_cast<double>(i * (i - 1)) * c * xp[i - 2] * yp[j];
      if (j >= 2) Pyy += static_cast<double>(j * (j - 1)) * c * xp[i] * yp[j - 2];
    }
  }

  WaveSample s;
  s.value = std::exp(P);
  s.gradient = {s.value * Px, s.value * Py};
  s.laplacian = s.value * (Pxx + Pyy + Px * Px + Py * Py);
  return s;
}

Complex GpwFunction::helmholtz_residual(Point p, const CoefficientField& field) const {
  const WaveSample s = evaluate(p);
  return s.laplacian + kappa_ * kappa_ * field.value(p.x, p.y) * s.value;
}

double GpwFunction::phase_bound(double radius) const {
  const int d = coeffs_.degree();
  double bound = 0.0;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) {
      if (i + j == 0) continue;
      const double c = std::abs(coeffs_.at(i, j));
      if (c == 0.0) continue;
      // max of |cos^i sin^j| on the circle
      const double n = i + j;
      const double angular =
          std::sqrt(std::pow(i / n, i) * std::pow(j / n, j));
      bound += c * std::pow(radius, n) * angular;
    }
  return bound;
}

GpwFunction build_gpw(const CoefficientField& field, Point centroid, double kappa, int q,
                      double theta, Complex normalization) {
  if (q < 1) throw std::invalid_argument("build_gpw needs q >= 1");
  if (!(kappa > 0.0)) throw std::invalid_argument("build_gpw needs kappa > 0");
  if (field.smoothness_order() < q - 1)
    throw std::invalid_argument("field '" + field.name() + "' is only C^" +
                                std::to_string(field.smoothness_order()) +
                                ", basis order q = " + std::to_string(q) + " needs C^" +
                                std::to_string(q - 1));
  const int d = q + 1;
  if (d + 1 > 16) throw std::invalid_argument("basis order q too large");

  PolyCoeffs lambda(d);
  lambda.at(1, 0) = normalization * std::cos(theta);
  lambda.at(0, 1) = normalization * std::sin(theta);

  double fact[16];
  fact[0] = 1.0;
  for (int i = 1; i < 16; ++i) fact[i] = fact[i - 1] * i;

  const double k2 = kappa * kappa;
  // Increasing first index: every lambda on the right-hand side has first
  // index <= i+1 or smaller total degree, so it is already known.
  for (int i = 0; i <= q - 1; ++i) {
    for (int j = 0; j <= q - 1 - i; ++j) {
      Complex rhs = -k2 * field.partial(i, j, centroid.x, centroid.y) / (fact[i] * fact[j]);
      double largest = std::abs(rhs);
      auto take = [&](Complex term) {
        rhs -= term;
        largest = std::max(largest, std::abs(term));
      };
      take(static_cast<double>((j + 2) * (j + 1)) * lambda.at(i, j + 2));
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l)
          take(static_cast<double>((i - k + 1) * (k + 1)) * lambda.at(i - k + 1, j - l) *
               lambda.at(k + 1, l));
      for (int k = 0; k <= j; ++k)
        for (int l = 0; l <= i; ++l)
          take(static_cast<double>((j - k + 1) * (k + 1)) * lambda.at(i - l, j - k + 1) *
               lambda.at(l, k + 1));
      // a result below the roundoff of its largest addend is an exact
      // cancellation (this keeps the plane-wave reduction exact)
      if (std::abs(rhs) < 64.0 * std::numeric_limits<double>::epsilon() * largest)
        rhs = Complex(0.0, 0.0);
      lambda.at(i + 2, j) = rhs / static_cast<double>((i + 2) * (i + 1));
    }
  }
  return GpwFunction(std::move(lambda), centroid, theta, normalization, kappa, q);
}

Complex default_normalization(const CoefficientField& field, Point centroid, double kappa) {
  const double eps = field.value(centroid.x, centroid.y);
  if (std::abs(eps) < 1e-12) return Complex(0.0, kappa);
  return Complex(0.0, kappa) * std::sqrt(Complex(eps, 0.0));
}

GpwBasisSet::GpwBasisSet(int element, std::vector<GpwFunction> functions, int n, int q,
                         double kappa, bool degenerate_normalization)
    : element_(element),
      functions_(std::move(functions)),
      n_(n),
      q_(q),
      kappa_(kappa),
      degenerate_normalization_(degenerate_normalization) {}

double GpwBasisSet::phase_bound(double radius) const {
  double worst = 0.0;
  for (const auto& f : functions_) worst = std::max(worst, f.phase_bound(radius));
  return worst;
}

GpwBasisSet build_basis_set(const CoefficientField& field, Point centroid, int element,
                            double kappa, int n, int q) {
  if (n < 1) throw std::invalid_argument("build_basis_set needs n >= 1");
  const int p = 2 * n + 1;
  const bool degenerate = std::abs(field.value(centroid.x, centroid.y)) < 1e-12;
  const Complex N = default_normalization(field, centroid, kappa);
  std::vector<GpwFunction> functions;
  functions.reserve(p);
  for (int l = 0; l < p; ++l)
    functions.push_back(build_gpw(field, centroid, kappa, q, 2.0 * M_PI * l / p, N));
  return GpwBasisSet(element, std::move(functions), n, q, kappa, degenerate);
}

ResidualOrderReport residual_order(const GpwFunction& gpw, const CoefficientField& field,
                                   std::span<const double> radii, int samples_per_circle) {
  if (radii.size() < 2) throw std::invalid_argument("residual_order needs at least two radii");
  ResidualOrderReport report;
  const Point c = gpw.centroid();
  for (const double r : radii) {
    double worst = 0.0;
    for (int s = 0; s < samples_per_circle; ++s) {
      const double phi = 2.0 * M_PI * (s + 0.5) / samples_per_circle;
      const Point p{c.x + r * std::cos(phi), c.y + r * std::sin(phi)};
      worst = std::max(worst, std::abs(gpw.helmholtz_residual(p, field)));
    }
    report.radii.push_back(r);
    report.max_residual.push_back(worst);
  }

  const double floor = 1e-12 * std::max(1.0, gpw.kappa() * gpw.kappa());
  report.exact = true;
  for (const double m : report.max_residual)
    if (m > floor) report.exact = false;
  if (report.exact) return report;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(report.radii.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(report.radii[i]);
    const double ly = std::log(std::max(report.max_residual[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return report;
}

std::vector<GpwBasisSet> build_all_bases(const CoefficientField& field, const Mesh& mesh,
                                         double kappa, int n, int q, int threads) {
  std::vector<GpwBasisSet> bases;
  bases.reserve(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k)
    bases.emplace_back(k, std::vector<GpwFunction>{}, n, q, kappa, false);
  parallel_for(
      mesh.num_elements(),
      [&](int k) { bases[k] = build_basis_set(field, mesh.centroid(k), k, kappa, n, q); },
      threads);
  return bases;
}

void write_coefficients(const GpwFunction& gpw, std::ostream& out) {
  const int d = gpw.degree();
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d - i; ++j) {
      const Complex c = gpw.coeffs().at(i, j);
      out << i << ' ' << j << ' ' << c.real() << ' ' << c.imag() << '\n';
    }
}

}  // namespace gpwtdg
