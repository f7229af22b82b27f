#pragma once

#include <array>
#include <complex>
#include <vector>

#include "gpwtdg/geometry.hpp"

namespace gpwtdg {

using Complex = std::complex<double>;

/// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1.
struct EdgeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

EdgeRule gauss_edge(int points);

/// Triangle rule in barycentric coordinates; weights sum to 1 and are all
/// positive. Application scales by the physical element area.
struct TriangleRule {
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
  int degree = 0;  // exact for total polynomial degree <= degree
  int size() const { return static_cast<int>(nodes.size()); }
};

TriangleRule triangle_rule(int degree);

inline Point edge_point(Point a, Point b, double s) {
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

inline Point triangle_point(const std::array<Point, 3>& v, const std::array<double, 3>& bary) {
  return {bary[0] * v[0].x + bary[1] * v[1].x + bary[2] * v[2].x,
          bary[0] * v[0].y + bary[1] * v[1].y + bary[2] * v[2].y};
}

template <class F>
auto integrate_edge(const EdgeRule& rule, Point a, Point b, F&& f) {
  using R = decltype(f(Point{}));
  R acc{};
  for (int i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(edge_point(a, b, rule.nodes[i]));
  return distance(a, b) * acc;
}

template <class F>
auto integrate_triangle(const TriangleRule& rule, const std::array<Point, 3>& v, F&& f) {
  using R = decltype(f(Point{}));
  R acc{};
  for (int i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(triangle_point(v, rule.nodes[i]));
  const double area = 0.5 * cross(v[1] - v[0], v[2] - v[0]);
  return area * acc;
}

/// Default orders: basis functions are exponentials of degree-(q+1)
/// polynomials, so the rules must resolve both the polynomial content and the
/// kappa*h oscillation.
int default_edge_points(double kappa, double h, int q);
int default_triangle_degree(double kappa, double h, int q);

}  // namespace gpwtdg
