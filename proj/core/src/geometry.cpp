#include "gpwtdg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gpwtdg {

double norm(Point p) { return std::hypot(p.x, p.y); }
double distance(Point a, Point b) { return norm(a - b); }

namespace {

double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

std::pair<int, int> sorted_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
           const DirichletPredicate& dirichlet)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  build(dirichlet, nullptr);
}

Mesh::Mesh(std::vector<Point> v, std::vector<Triangle> t,
           const std::vector<std::pair<std::pair<int, int>, EdgeKind>>& boundary_kinds)
    : vertices_(std::move(v)), triangles_(std::move(t)) {
  build(nullptr, &boundary_kinds);
}

void Mesh::build(const DirichletPredicate& dirichlet,
                 const std::vector<std::pair<std::pair<int, int>, EdgeKind>>* inherited) {
  const int nt = num_elements();
  if (nt == 0) throw std::invalid_argument("mesh has no triangles");

  centroids_.resize(nt);
  diameters_.resize(nt);
  areas_.resize(nt);
  h_ = 0.0;
  for (int k = 0; k < nt; ++k) {
    const auto& tv = triangles_[k].v;
    for (int i : tv)
      if (i < 0 || i >= num_vertices()) throw std::invalid_argument("triangle vertex out of range");
    const Point a = vertices_[tv[0]], b = vertices_[tv[1]], c = vertices_[tv[2]];
    const double area = signed_area(a, b, c);
    if (!(area > 0.0))
      throw std::invalid_argument("triangle " + std::to_string(k) +
                                  " is degenerate or not counterclockwise");
    areas_[k] = area;
    centroids_[k] = {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
    diameters_[k] = std::max({distance(a, b), distance(b, c), distance(c, a)});
    h_ = std::max(h_, diameters_[k]);
  }

  // Group element sides by vertex pair; each pair appears once (boundary) or
  // twice (interior).
  std::map<std::pair<int, int>, std::vector<int>> incidence;
  for (int k = 0; k < nt; ++k) {
    const auto& tv = triangles_[k].v;
    for (int s = 0; s < 3; ++s) incidence[sorted_pair(tv[s], tv[(s + 1) % 3])].push_back(k);
  }

  std::map<std::pair<int, int>, EdgeKind> inherited_kinds;
  if (inherited)
    for (const auto& [key, kind] : *inherited) inherited_kinds[key] = kind;

  edges_.clear();
  edges_.reserve(incidence.size());
  std::map<std::pair<int, int>, int> edge_index;
  for (const auto& [key, elems] : incidence) {
    if (elems.size() > 2) throw std::invalid_argument("edge shared by more than two triangles");
    Edge e;
    e.v0 = key.first;
    e.v1 = key.second;
    e.plus = *std::min_element(elems.begin(), elems.end());
    e.minus = elems.size() == 2 ? *std::max_element(elems.begin(), elems.end()) : -1;

    const Point p0 = vertices_[e.v0], p1 = vertices_[e.v1];
    e.length = distance(p0, p1);
    if (!(e.length > 0.0)) throw std::invalid_argument("zero-length edge");
    Point n{(p1 - p0).y / e.length, -(p1 - p0).x / e.length};
    const Point mid = 0.5 * (p0 + p1);
    if (dot(n, mid - centroids_[e.plus]) < 0.0) n = -1.0 * n;  // outward from K+
    e.normal = {n.x, n.y};

    if (e.boundary()) {
      if (inherited) {
        auto it = inherited_kinds.find(key);
        e.kind = it != inherited_kinds.end() ? it->second : EdgeKind::Robin;
      } else {
        e.kind = (dirichlet && dirichlet(mid)) ? EdgeKind::Dirichlet : EdgeKind::Robin;
      }
    } else {
      e.kind = EdgeKind::Interior;
    }
    edge_index[key] = static_cast<int>(edges_.size());
    edges_.push_back(e);
  }

  tri_edges_.assign(nt, {-1, -1, -1});
  for (int k = 0; k < nt; ++k) {
    const auto& tv = triangles_[k].v;
    std::array<int, 3> ids;
    for (int s = 0; s < 3; ++s) ids[s] = edge_index.at(sorted_pair(tv[s], tv[(s + 1) % 3]));
    std::sort(ids.begin(), ids.end());
    tri_edges_[k] = ids;
  }
}

std::array<Point, 3> Mesh::element_vertices(int k) const {
  const auto& tv = triangles_[k].v;
  return {vertices_[tv[0]], vertices_[tv[1]], vertices_[tv[2]]};
}

Mesh build_structured_mesh(const Rectangle& domain, const StructuredPattern& pattern,
                           const DirichletPredicate& dirichlet) {
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
    throw std::invalid_argument("invalid domain: rectangle must have positive width and height");
  if (pattern.cells_x < 1 || pattern.cells_y < 1)
    throw std::invalid_argument("structured pattern needs at least one cell per direction");

  const int mx = pattern.cells_x, my = pattern.cells_y;
  std::vector<Point> vertices;
  vertices.reserve(static_cast<size_t>(mx + 1) * (my + 1));
  for (int j = 0; j <= my; ++j)
    for (int i = 0; i <= mx; ++i)
      vertices.push_back({domain.x0 + domain.width() * i / mx, domain.y0 + domain.height() * j / my});

  auto vid = [mx](int i, int j) { return j * (mx + 1) + i; };
  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<size_t>(2) * mx * my);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      triangles.push_back({{a, b, c}});
      triangles.push_back({{a, c, d}});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), dirichlet);
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoint;
  auto mid_vertex = [&](int a, int b) {
    const auto key = sorted_pair(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point pa = mesh.vertex(a), pb = mesh.vertex(b);
    const int id = static_cast<int>(vertices.size());
    vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<Triangle> children;
  children.reserve(static_cast<size_t>(4) * mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& tv = mesh.triangle(k).v;
    const int m01 = mid_vertex(tv[0], tv[1]);
    const int m12 = mid_vertex(tv[1], tv[2]);
    const int m20 = mid_vertex(tv[2], tv[0]);
    children.push_back({{tv[0], m01, m20}});
    children.push_back({{m01, tv[1], m12}});
    children.push_back({{m20, m12, tv[2]}});
    children.push_back({{m01, m12, m20}});
  }

  // Each boundary edge passes its classification to its two halves.
  std::vector<std::pair<std::pair<int, int>, EdgeKind>> kinds;
  for (const Edge& e : mesh.edges()) {
    if (!e.boundary()) continue;
    const int m = midpoint.at(sorted_pair(e.v0, e.v1));
    kinds.push_back({sorted_pair(e.v0, m), e.kind});
    kinds.push_back({sorted_pair(m, e.v1), e.kind});
  }
  return Mesh(std::move(vertices), std::move(children), kinds);
}

RegularityReport check_mesh_regularity(const Mesh& mesh) {
  RegularityReport report;
  for (const Edge& e : mesh.edges()) {
    if (e.boundary()) {
      if (e.kind == EdgeKind::Robin)
        report.robin_h_ratio = std::max(report.robin_h_ratio, mesh.h() / mesh.diameter(e.plus));
      continue;
    }
    const double hp = mesh.diameter(e.plus), hm = mesh.diameter(e.minus);
    report.edge_neighbor_ratio = std::max(report.edge_neighbor_ratio, std::max(hp / hm, hm / hp));
  }
  return report;
}

Mesh read_mesh(std::istream& in, const DirichletPredicate& dirichlet) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1)
    throw std::invalid_argument("mesh file: bad header (expected 'V T')");
  std::vector<Point> vertices(nv);
  for (auto& p : vertices)
    if (!(in >> p.x >> p.y)) throw std::invalid_argument("mesh file: truncated vertex list");
  std::vector<Triangle> triangles(nt);
  for (auto& t : triangles)
    if (!(in >> t.v[0] >> t.v[1] >> t.v[2]))
      throw std::invalid_argument("mesh file: truncated triangle list");
  return Mesh(std::move(vertices), std::move(triangles), dirichlet);
}

Mesh load_mesh(const std::string& path, const DirichletPredicate& dirichlet) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mesh file: " + path);
  return read_mesh(in, dirichlet);
}

}  // namespace gpwtdg
