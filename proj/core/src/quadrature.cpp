#include "gpwtdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace gpwtdg {

EdgeRule gauss_edge(int points) {
  if (points < 1) throw std::invalid_argument("gauss_edge needs at least one point");
  const int m = points;
  EdgeRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  // Newton iteration on P_m over [-1, 1], then map to [0, 1].
  for (int k = 0; k < (m + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = 0.5 * (1.0 - x);  // roots come out descending; order ascending
    rule.nodes[m - 1 - k] = 0.5 * (1.0 + x);
    rule.weights[k] = 0.5 * w;
    rule.weights[m - 1 - k] = 0.5 * w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.5;
  return rule;
}

namespace {

void push_permutations(TriangleRule& rule, double a, double b, double c, double w) {
  if (a == b && b == c) {
    rule.nodes.push_back({a, b, c});
    rule.weights.push_back(w);
    return;
  }
  rule.nodes.push_back({a, b, c});
  rule.nodes.push_back({b, c, a});
  rule.nodes.push_back({c, a, b});
  rule.weights.insert(rule.weights.end(), 3, w);
}

TriangleRule collapsed_rule(int degree) {
  // Duffy map of a tensor Gauss rule: x = u(1-v), y = v, Jacobian (1-v).
  const int m = degree / 2 + 2;
  const EdgeRule g = gauss_edge(m);
  TriangleRule rule;
  rule.degree = degree;
  rule.nodes.reserve(static_cast<size_t>(m) * m);
  rule.weights.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double u = g.nodes[i], v = g.nodes[j];
      const double x = u * (1.0 - v), y = v;
      rule.nodes.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

}  // namespace

TriangleRule triangle_rule(int degree) {
  if (degree < 1) throw std::invalid_argument("triangle_rule needs degree >= 1");
  TriangleRule rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      push_permutations(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0);
      return rule;
    case 2:
      push_permutations(rule, 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3);
      return rule;
    case 3:
    case 4:
      // Dunavant degree-4, 6 points, positive weights.
      rule.degree = 4;
      push_permutations(rule, 0.108103018168070, 0.445948490915965, 0.445948490915965,
                        0.223381589678011);
      push_permutations(rule, 0.816847572980459, 0.091576213509771, 0.091576213509771,
                        0.109951743655322);
      return rule;
    case 5:
      push_permutations(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225);
      push_permutations(rule, 0.059715871789770, 0.470142064105115, 0.470142064105115,
                        0.132394152788506);
      push_permutations(rule, 0.797426985353087, 0.101286507323456, 0.101286507323456,
                        0.125939180544827);
      return rule;
    default:
      return collapsed_rule(degree);
  }
}

int default_edge_points(double kappa, double h, int q) {
  const int oscillation = static_cast<int>(std::ceil(kappa * h)) + 6;
  return std::max({10, 2 * (q + 2), oscillation});
}

int default_triangle_degree(double kappa, double h, int q) {
  const int oscillation = static_cast<int>(std::ceil(kappa * h)) + 6;
  return std::max({10, 2 * (q + 2), oscillation});
}

}  // namespace gpwtdg
