#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gpwtdg/coefficient.hpp"
#include "gpwtdg/geometry.hpp"

namespace gpwtdg {

using Complex = std::complex<double>;

struct AiryValues {
  double ai = 0.0;
  double aip = 0.0;
};

/// Airy function Ai and its derivative for |t| <= 30: Maclaurin series in
/// extended precision up to |t| = 8, asymptotic expansions beyond. Absolute
/// accuracy better than 1e-10 over the supported range.
AiryValues airy_ai(double t);

struct OdeValues {
  double w = 0.0;
  double wp = 0.0;
};

/// Dense-output integrator for w'' + (s^2/4 - a) w = 0 on [-smax, smax].
/// Taylor steps of order ~26 with step size chosen from the coefficient tail;
/// each accepted step stores its local polynomial, so evaluation anywhere in
/// the covered interval costs one Horner pass. Immutable after construction.
class WeberOde {
 public:
  WeberOde(double a, double w0, double wp0, double tol = 1e-14, double smax = 12.0);

  OdeValues eval(double s) const;
  double a() const { return a_; }
  double smax() const { return smax_; }

 private:
  struct Step {
    double s0;
    double length;  // signed
    std::vector<double> coeff;
  };
  void integrate(double w0, double wp0, double tol, double direction);
  static const Step& locate(const std::vector<Step>& steps, double s);

  double a_;
  double smax_;
  std::vector<Step> forward_;
  std::vector<Step> backward_;
};

/// Odd Weber solution P_o(s, a): w(0) = 0, w'(0) = 1. Solutions are cached per
/// value of a; the cache is safe under concurrent readers.
OdeValues weber_po(double s, double a);

/// Exact reference solution with gradient, tied to its coefficient field and
/// wavenumber. Pure functions; safe to evaluate concurrently.
struct ExactSolution {
  std::string name;
  double kappa = 0.0;
  CoefficientField field;
  std::function<Complex(Point)> value;
  std::function<std::array<Complex, 2>(Point)> gradient;
};

ExactSolution make_exact_airy(double kappa);
ExactSolution make_exact_weber(double kappa, double a);
ExactSolution make_exact_plane_wave(double kappa, double theta);

/// Impedance data g = u + (1/(i kappa)) du/dn, so that u satisfies
/// du/dn + i kappa u = i kappa g exactly.
Complex impedance_trace(const ExactSolution& exact, Point p, Vec2 outward_normal);

}  // namespace gpwtdg
