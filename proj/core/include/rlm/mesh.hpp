#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rlm/geometry.hpp"

namespace rlm {

enum class SideMarker { Left, Right, Bottom, Top, Arc };

const char* to_string(SideMarker m);
SideMarker side_marker_from_string(const std::string& s);

// Conforming triangulation. Triangles are counter-clockwise; boundary edges
// are oriented counter-clockwise around the domain, so the outward normal of
// edge (a, b) is rot(-90) of b - a. refinement_edge[t] is the local index
// e in {0,1,2} of the newest-vertex bisection edge, the edge opposite vertex
// triangles[t][e].
struct Mesh {
  struct BoundaryEdge {
    int a = 0;
    int b = 0;
    SideMarker marker = SideMarker::Left;
  };

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> refinement_edge;
  std::vector<BoundaryEdge> boundary_edges;

  // Boundary midpoints created on "arc" edges are snapped out to this radius
  // (disc meshes only).
  std::optional<double> snap_radius;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const {
    const auto& tri = triangles[t];
    return triangle_signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
  }
  Vec2 triangle_centroid(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
  }
  double triangle_diameter(int t) const;

  double total_area() const;
  double max_edge_length() const;
  double min_edge_length() const;
  double average_edge_length() const;

  // Throws if a triangle is inverted, the mesh has hanging nodes, or the
  // boundary is inconsistent with the edge-sharing counts.
  void check_valid() const;
};

struct PointLocation {
  int triangle = -1;
  std::array<double, 3> barycentric{0.0, 0.0, 0.0};
};

// Uniform background grid over the mesh bounding box; bucket size equals the
// average edge length of the mesh it was built for.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);

  // Containing triangle and barycentric coordinates. Points on shared edges
  // resolve to the lowest triangle index. Throws LocationError if the point
  // is further than ~1e-10 outside the mesh.
  PointLocation locate(const Vec2& p) const;

 private:
  const Mesh& mesh_;
  Vec2 lo_, hi_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;

  int bucket_index(int ix, int iy) const { return iy * nx_ + ix; }
};

Mesh generate_rect_mesh(double xmin, double xmax, double ymin, double ymax, int n);
Mesh generate_disc_mesh(double radius, int n_rings, int n_sectors);

// Red refinement: every triangle is split into four children through its edge
// midpoints. Boundary midpoints on "arc" edges are snapped to the circle.
Mesh refine_uniform(const Mesh& mesh);

// Newest-vertex bisection of all marked triangles (two bisections each, so
// marked triangles end up with half the edge lengths), followed by closure
// bisections until the mesh is conforming.
Mesh refine_local(const Mesh& mesh, const std::function<bool(const Mesh&, int)>& mark);

PointLocation locate_point(const PointLocator& locator, const Vec2& p);

// Plain-text round-trip format:
//   vertices <n> triangles <m> edges <k>
//   x y                 (per vertex, 17 significant digits)
//   i j k refedge       (per triangle)
//   i j marker          (per boundary edge)
void dump_mesh(const Mesh& mesh, std::ostream& out);
Mesh load_mesh(std::istream& in);
void dump_mesh_file(const Mesh& mesh, const std::string& path);
Mesh load_mesh_file(const std::string& path);

}  // namespace rlm
