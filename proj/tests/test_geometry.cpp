#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gpwtdg/geometry.hpp"

using namespace gpwtdg;

namespace {

Mesh unit_square_mesh(int cells) {
  return build_structured_mesh({0.0, 0.0, 1.0, 1.0}, {cells, cells});
}

double total_area(const Mesh& m) {
  double a = 0.0;
  for (int k = 0; k < m.num_elements(); ++k) a += m.area(k);
  return a;
}

}  // namespace

TEST_CASE("structured mesh: counts and areas") {
  const Mesh m = unit_square_mesh(2);
  CHECK(m.num_elements() == 8);
  CHECK(m.num_edges() == 16);
  CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));

  const Mesh m4 = build_structured_mesh({-1.0, -1.0, 1.0, 1.0}, {4, 4});
  for (int k = 0; k < m4.num_elements(); ++k) CHECK(m4.area(k) == doctest::Approx(0.125));
  CHECK(total_area(m4) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("structured mesh: degenerate domain throws") {
  CHECK_THROWS_AS(build_structured_mesh({0.0, 0.0, 0.0, 1.0}, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_mesh({0.0, 0.0, 1.0, -1.0}, {2, 2}), std::invalid_argument);
}

TEST_CASE("mesh invariants: centroid, edge partition, boundary default") {
  const Mesh m = unit_square_mesh(3);
  for (int k = 0; k < m.num_elements(); ++k) {
    const auto v = m.element_vertices(k);
    CHECK(m.centroid(k).x == doctest::Approx((v[0].x + v[1].x + v[2].x) / 3).epsilon(1e-14));
    CHECK(m.centroid(k).y == doctest::Approx((v[0].y + v[1].y + v[2].y) / 3).epsilon(1e-14));
  }
  int interior = 0, dirichlet = 0, robin = 0;
  for (const Edge& e : m.edges()) {
    if (e.kind == EdgeKind::Interior) ++interior;
    if (e.kind == EdgeKind::Dirichlet) ++dirichlet;
    if (e.kind == EdgeKind::Robin) ++robin;
    CHECK(std::abs(std::hypot(e.normal[0], e.normal[1]) - 1.0) < 1e-14);
    if (e.boundary()) {
      CHECK(e.minus == -1);
    } else {
      CHECK(e.plus < e.minus);  // lower element index owns the edge
    }
  }
  CHECK(interior + dirichlet + robin == m.num_edges());
  CHECK(dirichlet == 0);  // whole boundary defaults to Robin
  CHECK(robin == 12);
}

TEST_CASE("interior normals point from K+ into K-") {
  const Mesh m = unit_square_mesh(2);
  for (const Edge& e : m.edges()) {
    const Point mid = 0.5 * (m.vertex(e.v0) + m.vertex(e.v1));
    const Point away_plus = mid - m.centroid(e.plus);
    CHECK(away_plus.x * e.normal[0] + away_plus.y * e.normal[1] > 0.0);
    if (!e.boundary()) {
      const Point toward_minus = m.centroid(e.minus) - mid;
      CHECK(toward_minus.x * e.normal[0] + toward_minus.y * e.normal[1] > 1e-13);
    }
  }
}

TEST_CASE("uniform refinement quadruples elements and halves h") {
  Mesh m = unit_square_mesh(2);
  const double h0 = m.h();
  const Mesh r = refine_uniform(m);
  CHECK(r.num_elements() == 32);
  CHECK(r.h() == doctest::Approx(h0 / 2).epsilon(1e-14));

  // children centroids average to the parent centroid
  for (int k = 0; k < m.num_elements(); ++k) {
    Point avg{0, 0};
    for (int c = 0; c < 4; ++c) {
      avg.x += r.centroid(4 * k + c).x / 4;
      avg.y += r.centroid(4 * k + c).y / 4;
    }
    CHECK(avg.x == doctest::Approx(m.centroid(k).x).epsilon(1e-14));
    CHECK(avg.y == doctest::Approx(m.centroid(k).y).epsilon(1e-14));
  }
}

TEST_CASE("two refinements of an h=0.5 triangle give h=0.125") {
  const Mesh tri({{0.0, 0.0}, {0.3, 0.0}, {0.0, 0.4}}, {Triangle{{0, 1, 2}}});
  CHECK(tri.h() == doctest::Approx(0.5));
  const Mesh fine = refine_uniform(refine_uniform(tri));
  CHECK(fine.h() == doctest::Approx(0.125));
  CHECK(fine.num_elements() == 16);
}

TEST_CASE("refinement nesting: children stay inside the parent") {
  const Mesh m = unit_square_mesh(2);
  const Mesh r = refine_uniform(m);
  for (int k = 0; k < m.num_elements(); ++k) {
    const auto pv = m.element_vertices(k);
    auto inside = [&](Point p) {
      // barycentric with tolerance
      const double d = cross(pv[1] - pv[0], pv[2] - pv[0]);
      const double b1 = cross(p - pv[0], pv[2] - pv[0]) / d;
      const double b2 = cross(pv[1] - pv[0], p - pv[0]) / d;
      return b1 > -1e-13 && b2 > -1e-13 && b1 + b2 < 1 + 1e-13;
    };
    for (int c = 0; c < 4; ++c)
      for (const Point p : r.element_vertices(4 * k + c)) CHECK(inside(p));
  }
}

TEST_CASE("refinement inherits boundary classification") {
  const DirichletPredicate left_is_dirichlet = [](Point mid) { return mid.x < 1e-12; };
  Mesh m = build_structured_mesh({0.0, 0.0, 1.0, 1.0}, {2, 2}, left_is_dirichlet);
  int dir0 = 0;
  for (const Edge& e : m.edges())
    if (e.kind == EdgeKind::Dirichlet) ++dir0;
  CHECK(dir0 == 2);

  const Mesh r = refine_uniform(m);
  int dir1 = 0;
  for (const Edge& e : r.edges()) {
    if (e.kind == EdgeKind::Dirichlet) {
      ++dir1;
      const Point mid = 0.5 * (r.vertex(e.v0) + r.vertex(e.v1));
      CHECK(mid.x < 1e-12);
    }
  }
  CHECK(dir1 == 4);
}

TEST_CASE("regularity of structured meshes is exactly 1") {
  const Mesh m = unit_square_mesh(4);
  const RegularityReport rep = check_mesh_regularity(m);
  CHECK(rep.edge_neighbor_ratio == 1.0);
  CHECK(rep.robin_h_ratio == 1.0);
}

TEST_CASE("regularity picks up a diameter-2 neighbor pair") {
  // shared edge (0,0)-(2,0); diameters 2 and 4
  const Mesh m({{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}, {1.0, -std::sqrt(15.0)}},
               {Triangle{{0, 1, 2}}, Triangle{{0, 3, 1}}});
  CHECK(m.diameter(0) == doctest::Approx(2.0));
  CHECK(m.diameter(1) == doctest::Approx(4.0));
  const RegularityReport rep = check_mesh_regularity(m);
  CHECK(rep.edge_neighbor_ratio == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("mesh file round trip") {
  std::stringstream file;
  file << "4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n";
  const Mesh m = read_mesh(file);
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_elements() == 2);
  CHECK(m.num_edges() == 5);
  int robin = 0;
  for (const Edge& e : m.edges())
    if (e.kind == EdgeKind::Robin) ++robin;
  CHECK(robin == 4);

  std::stringstream bad;
  bad << "3 1\n0 0\n1 0\n";
  CHECK_THROWS_AS(read_mesh(bad), std::invalid_argument);
}

TEST_CASE("clockwise triangles are rejected") {
  CHECK_THROWS_AS(Mesh({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {Triangle{{0, 2, 1}}}),
                  std::invalid_argument);
}
