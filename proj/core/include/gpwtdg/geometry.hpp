#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace gpwtdg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Vec2 = std::array<double, 2>;

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point p);
double distance(Point a, Point b);

enum class EdgeKind { Interior, Dirichlet, Robin };

/// One mesh edge with the bookkeeping DG assembly needs: the owning element
/// K+ (always present), the neighbor K- (interior edges only) and a unit
/// normal oriented from K+ to K- (outward for boundary edges).
struct Edge {
  int v0 = -1;
  int v1 = -1;
  EdgeKind kind = EdgeKind::Interior;
  int plus = -1;
  int minus = -1;  // -1 on the boundary
  Vec2 normal{0.0, 0.0};
  double length = 0.0;

  bool boundary() const { return minus < 0; }
};

struct Triangle {
  std::array<int, 3> v{-1, -1, -1};
};

/// Marks boundary edges Dirichlet when it returns true at the edge midpoint;
/// everything else stays Robin.
using DirichletPredicate = std::function<bool(Point midpoint)>;

/// Immutable triangular mesh. All derived data (edges, centroids, diameters)
/// is computed on construction; concurrent reads are safe.
class Mesh {
 public:
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
       const DirichletPredicate& dirichlet = nullptr);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Point vertex(int v) const { return vertices_[v]; }
  const Triangle& triangle(int k) const { return triangles_[k]; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Edge indices of element k, sorted ascending.
  const std::array<int, 3>& element_edges(int k) const { return tri_edges_[k]; }

  Point centroid(int k) const { return centroids_[k]; }
  double diameter(int k) const { return diameters_[k]; }
  double area(int k) const { return areas_[k]; }
  double h() const { return h_; }

  std::array<Point, 3> element_vertices(int k) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<Point> centroids_;
  std::vector<double> diameters_;
  std::vector<double> areas_;
  double h_ = 0.0;

  friend Mesh refine_uniform(const Mesh&);
  Mesh(std::vector<Point> v, std::vector<Triangle> t,
       const std::vector<std::pair<std::pair<int, int>, EdgeKind>>& boundary_kinds);

  void build(const DirichletPredicate& dirichlet,
             const std::vector<std::pair<std::pair<int, int>, EdgeKind>>* inherited);
};

struct Rectangle {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct StructuredPattern {
  int cells_x = 2;
  int cells_y = 2;
};

/// Crisscross triangulation of a rectangle: cells_x x cells_y cells, each cut
/// along the lower-left/upper-right diagonal. Boundary edges are Robin unless
/// the predicate claims them.
Mesh build_structured_mesh(const Rectangle& domain, const StructuredPattern& pattern,
                           const DirichletPredicate& dirichlet = nullptr);

/// Splits every triangle into four congruent children through the edge
/// midpoints. Boundary classification is inherited from the parent edges.
Mesh refine_uniform(const Mesh& mesh);

struct RegularityReport {
  double edge_neighbor_ratio = 1.0;  // max h_K / h_K' over edge neighbors
  double robin_h_ratio = 1.0;        // max h / h_K over Robin-adjacent elements
};

RegularityReport check_mesh_regularity(const Mesh& mesh);

/// Plain-text mesh format: first line "V T", then V lines "x y", then T lines
/// "i j k" (0-based, counterclockwise).
Mesh read_mesh(std::istream& in, const DirichletPredicate& dirichlet = nullptr);
Mesh load_mesh(const std::string& path, const DirichletPredicate& dirichlet = nullptr);

}  // namespace gpwtdg
