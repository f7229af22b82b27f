#include "oracles.hpp"

#include <cmath>

#include "gpwtdg/quadrature.hpp"

namespace gpwtdg::testing {

Poly2 poly_dx(const Poly2& p) {
  Poly2 r(p.degree);
  for (int i = 1; i <= p.degree; ++i)
    for (int j = 0; j + i <= p.degree; ++j) r.c[i - 1][j] = static_cast<double>(i) * p.c[i][j];
  return r;
}

Poly2 poly_dy(const Poly2& p) {
  Poly2 r(p.degree);
  for (int i = 0; i <= p.degree; ++i)
    for (int j = 1; i + j <= p.degree; ++j) r.c[i][j - 1] = static_cast<double>(j) * p.c[i][j];
  return r;
}

Poly2 poly_mul(const Poly2& a, const Poly2& b, int max_degree) {
  Poly2 r(max_degree);
  for (int i = 0; i <= a.degree; ++i)
    for (int j = 0; i + j <= a.degree; ++j) {
      if (a.c[i][j] == Complex(0, 0)) continue;
      for (int k = 0; k <= b.degree; ++k)
        for (int l = 0; k + l <= b.degree; ++l) {
          if (i + k + j + l > max_degree) continue;
          r.c[i + k][j + l] += a.c[i][j] * b.c[k][l];
        }
    }
  return r;
}

Poly2 poly_add(const Poly2& a, const Poly2& b) {
  Poly2 r(std::max(a.degree, b.degree));
  for (int i = 0; i <= a.degree; ++i)
    for (int j = 0; i + j <= a.degree; ++j) r.c[i][j] += a.c[i][j];
  for (int i = 0; i <= b.degree; ++i)
    for (int j = 0; i + j <= b.degree; ++j) r.c[i][j] += b.c[i][j];
  return r;
}

Poly2 helmholtz_residual_taylor(const GpwFunction& gpw, const CoefficientField& field,
                                int max_degree) {
  const int d = gpw.degree();
  Poly2 P(d);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) P.c[i][j] = gpw.coeffs().at(i, j);

  const Poly2 Px = poly_dx(P), Py = poly_dy(P);
  const Poly2 lap = poly_add(poly_dx(Px), poly_dy(Py));
  const Poly2 grad2 = poly_add(poly_mul(Px, Px, max_degree), poly_mul(Py, Py, max_degree));

  Poly2 eps(max_degree);
  double fact[32];
  fact[0] = 1.0;
  for (int i = 1; i < 32; ++i) fact[i] = fact[i - 1] * i;
  const Point c = gpw.centroid();
  const int order_cap = std::min(max_degree, field.smoothness_order());
  for (int i = 0; i <= order_cap; ++i)
    for (int j = 0; i + j <= order_cap; ++j)
      eps.c[i][j] = field.partial(i, j, c.x, c.y) / (fact[i] * fact[j]);

  Poly2 k2eps(max_degree);
  const double k2 = gpw.kappa() * gpw.kappa();
  for (int i = 0; i <= max_degree; ++i)
    for (int j = 0; i + j <= max_degree; ++j) k2eps.c[i][j] = k2 * eps.c[i][j];

  return poly_add(poly_add(lap, grad2), k2eps);
}

namespace {

struct SquareQuad {
  std::vector<Point> points;
  std::vector<double> weights;
};

SquareQuad square_quad(int m) {
  const EdgeRule g = gauss_edge(m);
  SquareQuad q;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      q.points.push_back({g.nodes[i], g.nodes[j]});
      q.weights.push_back(g.weights[i] * g.weights[j]);
    }
  return q;
}

}  // namespace

double best_approx_error_square(const std::vector<GpwFunction>& basis,
                                const std::function<Complex(Point)>& f, int quad_points) {
  const SquareQuad quad = square_quad(quad_points);
  const int p = static_cast<int>(basis.size());
  const int m = static_cast<int>(quad.points.size());

  Eigen::MatrixXcd values(p, m);
  Eigen::VectorXcd fv(m);
  for (int n = 0; n < m; ++n) {
    fv[n] = f(quad.points[n]);
    for (int l = 0; l < p; ++l) values(l, n) = basis[l].evaluate(quad.points[n]).value;
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(quad.weights.data(), m);

  const Eigen::MatrixXcd gram = values.conjugate() * w.asDiagonal() * values.transpose();
  const Eigen::VectorXcd rhs = values.conjugate() * w.asDiagonal() * fv;
  const Eigen::VectorXcd coeff = gram.completeOrthogonalDecomposition().solve(rhs);

  double err2 = 0.0;
  for (int n = 0; n < m; ++n) {
    Complex fit(0, 0);
    for (int l = 0; l < p; ++l) fit += coeff[l] * values(l, n);
    err2 += quad.weights[n] * std::norm(fv[n] - fit);
  }
  return std::sqrt(err2);
}

double linf_fit_error_triangle(const GpwBasisSet& basis, const std::array<Point, 3>& tri,
                               const std::function<Complex(Point)>& f, int quad_degree) {
  const TriangleRule rule = triangle_rule(quad_degree);
  const int p = basis.size();
  const int m = rule.size();

  Eigen::MatrixXcd A(m, p);
  Eigen::VectorXcd b(m);
  std::vector<Point> pts(m);
  for (int n = 0; n < m; ++n) {
    pts[n] = triangle_point(tri, rule.nodes[n]);
    const double s = std::sqrt(rule.weights[n]);
    b[n] = s * f(pts[n]);
    for (int l = 0; l < p; ++l) A(n, l) = s * basis.function(l).evaluate(pts[n]).value;
  }
  const Eigen::VectorXcd coeff = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);

  double worst = 0.0;
  for (int n = 0; n < m; ++n) {
    Complex fit(0, 0);
    for (int l = 0; l < p; ++l) fit += coeff[l] * basis.function(l).evaluate(pts[n]).value;
    worst = std::max(worst, std::abs(f(pts[n]) - fit));
  }
  return worst;
}

Eigen::VectorXcd l2_projection(const Mesh& mesh, std::span<const GpwBasisSet> bases,
                               const std::function<Complex(Point)>& f, int quad_degree) {
  const int p = bases[0].size();
  Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(mesh.num_elements() * p);
  const TriangleRule rule = triangle_rule(quad_degree);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto v = mesh.element_vertices(k);
    const int m = rule.size();
    Eigen::MatrixXcd values(p, m);
    Eigen::VectorXcd fv(m);
    Eigen::VectorXd w(m);
    for (int n = 0; n < m; ++n) {
      const Point pt = triangle_point(v, rule.nodes[n]);
      fv[n] = f(pt);
      w[n] = mesh.area(k) * rule.weights[n];
      for (int l = 0; l < p; ++l) values(l, n) = bases[k].function(l).evaluate(pt).value;
    }
    const Eigen::MatrixXcd gram = values.conjugate() * w.asDiagonal() * values.transpose();
    const Eigen::VectorXcd rhs = values.conjugate() * w.asDiagonal() * fv;
    coeff.segment(k * p, p) = gram.completeOrthogonalDecomposition().solve(rhs);
  }
  return coeff;
}

}  // namespace gpwtdg::testing
