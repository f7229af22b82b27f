#pragma once

#include <functional>
#include <limits>
#include <string>
#include <string_view>

namespace gpwtdg {

/// Smoothness order meaning "all derivatives available" (polynomial fields).
inline constexpr int kSmoothForever = std::numeric_limits<int>::max();

/// Real coefficient field eps(x, y) together with its exact mixed partial
/// derivatives, as required by the basis-construction recursion. Immutable
/// and safe for concurrent evaluation.
class CoefficientField {
 public:
  using Partials = std::function<double(int dx, int dy, double x, double y)>;

  CoefficientField(std::string name, int smoothness_order, Partials partials);

  double value(double x, double y) const { return partials_(0, 0, x, y); }

  /// d^dx/dx^dx d^dy/dy^dy eps at (x, y). Throws when dx+dy exceeds the
  /// declared smoothness order.
  double partial(int dx, int dy, double x, double y) const;

  int smoothness_order() const { return smoothness_order_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  int smoothness_order_;
  Partials partials_;
};

CoefficientField make_constant(double c);

/// eps(x, y) = -y.
CoefficientField make_airy_field();

/// eps(x, y) = x^2/4 - a/kappa. Throws for kappa <= 0.
CoefficientField make_weber_field(double a, double kappa);

/// Parses "constant:<c>", "airy" or "weber:<a>"; kappa feeds the Weber field.
CoefficientField parse_field(std::string_view spec, double kappa);

}  // namespace gpwtdg
