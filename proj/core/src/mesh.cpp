#include "rlm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "rlm/errors.hpp"

namespace rlm {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Local index of the longest edge (the edge opposite the returned vertex
// index); ties resolve to the lowest index for determinism.
int longest_edge_index(const std::vector<Vec2>& verts, const std::array<int, 3>& tri) {
  int best = 0;
  double best_len = -1.0;
  for (int e = 0; e < 3; ++e) {
    const Vec2 d = verts[tri[(e + 2) % 3]] - verts[tri[(e + 1) % 3]];
    const double len = d.norm2();
    if (len > best_len) {
      best_len = len;
      best = e;
    }
  }
  return best;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(SideMarker m) {
  switch (m) {
    case SideMarker::Left: return "left";
    case SideMarker::Right: return "right";
    case SideMarker::Bottom: return "bottom";
    case SideMarker::Top: return "top";
    case SideMarker::Arc: return "arc";
  }
  return "?";
}

SideMarker side_marker_from_string(const std::string& s) {
  if (s == "left") return SideMarker::Left;
  if (s == "right") return SideMarker::Right;
  if (s == "bottom") return SideMarker::Bottom;
  if (s == "top") return SideMarker::Top;
  if (s == "arc") return SideMarker::Arc;
  throw ArgumentError("unknown side marker: " + s);
}

double Mesh::triangle_diameter(int t) const {
  const auto& tri = triangles[t];
  double d = 0.0;
  for (int e = 0; e < 3; ++e)
    d = std::max(d, (vertices[tri[(e + 1) % 3]] - vertices[tri[(e + 2) % 3]]).norm());
  return d;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < n_triangles(); ++t) a += triangle_area(t);
  return a;
}

double Mesh::max_edge_length() const {
  double m = 0.0;
  for (int t = 0; t < n_triangles(); ++t) m = std::max(m, triangle_diameter(t));
  return m;
}

double Mesh::min_edge_length() const {
  double m = std::numeric_limits<double>::max();
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e)
      m = std::min(m, (vertices[tri[(e + 1) % 3]] - vertices[tri[(e + 2) % 3]]).norm());
  return m;
}

double Mesh::average_edge_length() const {
  std::set<EdgeKey> edges;
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e) edges.insert(edge_key(tri[(e + 1) % 3], tri[(e + 2) % 3]));
  double sum = 0.0;
  for (const auto& [a, b] : edges) sum += (vertices[a] - vertices[b]).norm();
  return edges.empty() ? 0.0 : sum / static_cast<double>(edges.size());
}

void Mesh::check_valid() const {
  if (triangles.size() != refinement_edge.size())
    throw ArgumentError("mesh: refinement_edge size mismatch");
  for (int t = 0; t < n_triangles(); ++t) {
    if (triangle_area(t) <= 0.0) throw ArgumentError("mesh: non-positive triangle area");
    if (refinement_edge[t] < 0 || refinement_edge[t] > 2)
      throw ArgumentError("mesh: refinement edge out of range");
  }

  std::map<EdgeKey, int> counts;
  std::set<std::pair<int, int>> directed;
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e) {
      counts[edge_key(tri[e], tri[(e + 1) % 3])]++;
      directed.insert({tri[e], tri[(e + 1) % 3]});
    }

  std::set<EdgeKey> boundary_keys;
  for (const auto& be : boundary_edges) {
    boundary_keys.insert(edge_key(be.a, be.b));
    // CCW boundary orientation: the adjacent triangle traverses a -> b.
    if (!directed.count({be.a, be.b}))
      throw ArgumentError("mesh: boundary edge orientation inconsistent with triangle");
  }
  std::map<int, int> boundary_degree;
  for (const auto& be : boundary_edges) {
    boundary_degree[be.a]++;
    boundary_degree[be.b]++;
  }
  for (const auto& [v, deg] : boundary_degree)
    if (deg != 2) throw ArgumentError("mesh: boundary is not a closed polygon");

  for (const auto& [key, count] : counts) {
    const bool on_boundary = boundary_keys.count(key) > 0;
    if (on_boundary && count != 1)
      throw ArgumentError("mesh: boundary edge shared by more than one triangle");
    if (!on_boundary && count != 2)
      throw ArgumentError("mesh: hanging node or open interior edge");
  }
}

Mesh generate_rect_mesh(double xmin, double xmax, double ymin, double ymax, int n) {
  if (!(xmin < xmax) || !(ymin < ymax)) throw ArgumentError("rect mesh: invalid bounds");
  if (n < 1) throw ArgumentError("rect mesh: n must be >= 1");

  Mesh mesh;
  const double hx = (xmax - xmin) / n;
  const double hy = (ymax - ymin) / n;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.push_back({i == n ? xmax : xmin + i * hx, j == n ? ymax : ymin + j * hy});

  // Fixed lower-left to upper-right diagonal split for every cell.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  for (const auto& tri : mesh.triangles)
    mesh.refinement_edge.push_back(longest_edge_index(mesh.vertices, tri));

  for (int i = 0; i < n; ++i)
    mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), SideMarker::Bottom});
  for (int j = 0; j < n; ++j)
    mesh.boundary_edges.push_back({vid(n, j), vid(n, j + 1), SideMarker::Right});
  for (int i = n; i > 0; --i)
    mesh.boundary_edges.push_back({vid(i, n), vid(i - 1, n), SideMarker::Top});
  for (int j = n; j > 0; --j)
    mesh.boundary_edges.push_back({vid(0, j), vid(0, j - 1), SideMarker::Left});
  return mesh;
}

Mesh generate_disc_mesh(double radius, int n_rings, int n_sectors) {
  if (!(radius > 0.0)) throw ArgumentError("disc mesh: radius must be positive");
  if (n_rings < 1 || n_sectors < 3) throw ArgumentError("disc mesh: degenerate parameters");

  Mesh mesh;
  mesh.snap_radius = radius;
  mesh.vertices.push_back({0.0, 0.0});
  auto vid = [n_sectors](int ring, int sector) {
    return 1 + (ring - 1) * n_sectors + (sector % n_sectors);
  };
  for (int ring = 1; ring <= n_rings; ++ring) {
    const double r = radius * ring / n_rings;
    for (int s = 0; s < n_sectors; ++s) {
      const double theta = 2.0 * M_PI * s / n_sectors;
      mesh.vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }

  for (int s = 0; s < n_sectors; ++s)
    mesh.triangles.push_back({0, vid(1, s), vid(1, s + 1)});
  for (int ring = 1; ring < n_rings; ++ring)
    for (int s = 0; s < n_sectors; ++s) {
      const int a = vid(ring, s), b = vid(ring + 1, s);
      const int c = vid(ring + 1, s + 1), d = vid(ring, s + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  for (const auto& tri : mesh.triangles)
    mesh.refinement_edge.push_back(longest_edge_index(mesh.vertices, tri));

  for (int s = 0; s < n_sectors; ++s)
    mesh.boundary_edges.push_back({vid(n_rings, s), vid(n_rings, s + 1), SideMarker::Arc});
  return mesh;
}

namespace {

// Shared bookkeeping for both refinement flavours: edge midpoints with arc
// snapping and boundary marker inheritance.
struct RefinementScratch {
  std::vector<Vec2>& vertices;
  std::map<EdgeKey, int> midpoint;
  std::map<EdgeKey, std::pair<int, SideMarker>> boundary;  // key -> (oriented first vertex, marker)
  std::optional<double> snap_radius;

  RefinementScratch(std::vector<Vec2>& verts, const Mesh& parent)
      : vertices(verts), snap_radius(parent.snap_radius) {
    for (const auto& be : parent.boundary_edges)
      boundary[edge_key(be.a, be.b)] = {be.a, be.marker};
  }

  bool edge_is_split(int a, int b) const { return midpoint.count(edge_key(a, b)) > 0; }

  int get_or_create_midpoint(int a, int b) {
    const EdgeKey key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;

    Vec2 m = (vertices[a] + vertices[b]) * 0.5;
    auto bit = boundary.find(key);
    if (bit != boundary.end() && bit->second.second == SideMarker::Arc && snap_radius) {
      const double len = m.norm();
      if (len > 0.0) m = m * (*snap_radius / len);
    }
    const int idx = static_cast<int>(vertices.size());
    vertices.push_back(m);
    midpoint.emplace(key, idx);

    if (bit != boundary.end()) {
      const auto [first, marker] = bit->second;
      const int second = (first == key.first) ? key.second : key.first;
      boundary.erase(bit);
      boundary[edge_key(first, idx)] = {first, marker};
      boundary[edge_key(idx, second)] = {idx, marker};
    }
    return idx;
  }

  std::vector<Mesh::BoundaryEdge> boundary_edges() const {
    std::vector<Mesh::BoundaryEdge> out;
    out.reserve(boundary.size());
    for (const auto& [key, val] : boundary) {
      const int a = val.first;
      const int b = (a == key.first) ? key.second : key.first;
      out.push_back({a, b, val.second});
    }
    return out;
  }
};

}  // namespace

Mesh refine_uniform(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  out.snap_radius = mesh.snap_radius;

  RefinementScratch scratch(out.vertices, mesh);
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) scratch.get_or_create_midpoint(tri[(e + 1) % 3], tri[(e + 2) % 3]);
  }

  for (const auto& tri : mesh.triangles) {
    const int m01 = scratch.midpoint.at(edge_key(tri[0], tri[1]));
    const int m12 = scratch.midpoint.at(edge_key(tri[1], tri[2]));
    const int m20 = scratch.midpoint.at(edge_key(tri[2], tri[0]));
    out.triangles.push_back({tri[0], m01, m20});
    out.triangles.push_back({m01, tri[1], m12});
    out.triangles.push_back({m20, m12, tri[2]});
    out.triangles.push_back({m01, m12, m20});
  }
  for (const auto& tri : out.triangles)
    out.refinement_edge.push_back(longest_edge_index(out.vertices, tri));
  out.boundary_edges = scratch.boundary_edges();
  return out;
}

Mesh refine_local(const Mesh& mesh, const std::function<bool(const Mesh&, int)>& mark) {
  struct WorkTri {
    std::array<int, 3> v;
    int refedge;
    bool alive = true;
  };

  Mesh out;
  out.vertices = mesh.vertices;
  out.snap_radius = mesh.snap_radius;
  RefinementScratch scratch(out.vertices, mesh);

  std::vector<WorkTri> tris;
  tris.reserve(mesh.triangles.size());
  for (int t = 0; t < mesh.n_triangles(); ++t)
    tris.push_back({mesh.triangles[t], mesh.refinement_edge[t]});

  // (triangle, remaining bisections); marked triangles are bisected twice so
  // their edge lengths halve.
  std::deque<std::pair<int, int>> queue;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (mark(mesh, t)) queue.push_back({t, 2});

  auto bisect = [&](int t, int remaining) {
    WorkTri& tri = tris[t];
    tri.alive = false;
    const int e = tri.refedge;
    const int p = tri.v[e];
    const int a = tri.v[(e + 1) % 3];
    const int b = tri.v[(e + 2) % 3];
    const int m = scratch.get_or_create_midpoint(a, b);
    const int c1 = static_cast<int>(tris.size());
    tris.push_back({{p, a, m}, 2, true});
    const int c2 = static_cast<int>(tris.size());
    tris.push_back({{p, m, b}, 1, true});
    if (remaining > 1) {
      queue.push_back({c1, remaining - 1});
      queue.push_back({c2, remaining - 1});
    }
  };

  int passes = 0;
  while (true) {
    while (!queue.empty()) {
      auto [t, remaining] = queue.front();
      queue.pop_front();
      if (!tris[t].alive) continue;
      bisect(t, remaining);
    }
    // Closure: any live triangle with a split edge must be bisected.
    bool conforming = true;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      const auto& v = tris[t].v;
      for (int e = 0; e < 3; ++e)
        if (scratch.edge_is_split(v[(e + 1) % 3], v[(e + 2) % 3])) {
          queue.push_back({t, 1});
          conforming = false;
          break;
        }
    }
    if (conforming) break;
    if (++passes > 64) throw std::runtime_error("refine_local: closure did not terminate");
  }

  for (const auto& tri : tris) {
    if (!tri.alive) continue;
    out.triangles.push_back(tri.v);
    out.refinement_edge.push_back(tri.refedge);
  }
  out.boundary_edges = scratch.boundary_edges();
  return out;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(mesh) {
  lo_ = hi_ = mesh.vertices.at(0);
  for (const auto& v : mesh.vertices) {
    lo_.x = std::min(lo_.x, v.x);
    lo_.y = std::min(lo_.y, v.y);
    hi_.x = std::max(hi_.x, v.x);
    hi_.y = std::max(hi_.y, v.y);
  }
  cell_ = std::max(mesh.average_edge_length(), 1e-12);
  nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x - lo_.x) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y - lo_.y) / cell_)));
  buckets_.resize(static_cast<size_t>(nx_) * ny_);

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    Vec2 tlo = mesh.vertices[tri[0]], thi = tlo;
    for (int k = 1; k < 3; ++k) {
      const Vec2& v = mesh.vertices[tri[k]];
      tlo.x = std::min(tlo.x, v.x);
      tlo.y = std::min(tlo.y, v.y);
      thi.x = std::max(thi.x, v.x);
      thi.y = std::max(thi.y, v.y);
    }
    const int ix0 = std::clamp(static_cast<int>((tlo.x - lo_.x) / cell_), 0, nx_ - 1);
    const int ix1 = std::clamp(static_cast<int>((thi.x - lo_.x) / cell_), 0, nx_ - 1);
    const int iy0 = std::clamp(static_cast<int>((tlo.y - lo_.y) / cell_), 0, ny_ - 1);
    const int iy1 = std::clamp(static_cast<int>((thi.y - lo_.y) / cell_), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix) buckets_[bucket_index(ix, iy)].push_back(t);
  }
}

namespace {

bool barycentric_in_triangle(const Mesh& mesh, int t, const Vec2& p,
                             std::array<double, 3>& lambda) {
  const auto& tri = mesh.triangles[t];
  const Vec2& a = mesh.vertices[tri[0]];
  const Vec2& b = mesh.vertices[tri[1]];
  const Vec2& c = mesh.vertices[tri[2]];
  const double area = triangle_signed_area(a, b, c);
  lambda[0] = triangle_signed_area(p, b, c) / area;
  lambda[1] = triangle_signed_area(a, p, c) / area;
  lambda[2] = triangle_signed_area(a, b, p) / area;
  // Accept points up to an absolute distance of ~1e-9 outside an edge:
  // lambda_i = d_i * len_i / (2 area) for the distance d_i to edge i.
  const std::array<double, 3> len = {(c - b).norm(), (a - c).norm(), (b - a).norm()};
  for (int i = 0; i < 3; ++i)
    if (lambda[i] < -1e-9 * len[i] / (2.0 * area)) return false;
  return true;
}

PointLocation finalize_location(int t, std::array<double, 3> lambda) {
  double sum = 0.0;
  for (double& l : lambda) {
    l = std::max(l, 0.0);
    sum += l;
  }
  for (double& l : lambda) l /= sum;
  return {t, lambda};
}

}  // namespace

PointLocation PointLocator::locate(const Vec2& p) const {
  const int ix = std::clamp(static_cast<int>((p.x - lo_.x) / cell_), 0, nx_ - 1);
  const int iy = std::clamp(static_cast<int>((p.y - lo_.y) / cell_), 0, ny_ - 1);
  std::array<double, 3> lambda;
  for (int t : buckets_[bucket_index(ix, iy)])
    if (barycentric_in_triangle(mesh_, t, p, lambda)) return finalize_location(t, lambda);
  // Safety net for points a rounding error outside every bucket candidate.
  for (int t = 0; t < mesh_.n_triangles(); ++t)
    if (barycentric_in_triangle(mesh_, t, p, lambda)) return finalize_location(t, lambda);
  std::ostringstream msg;
  msg << "point (" << p.x << ", " << p.y << ") is outside the mesh";
  throw LocationError(p, msg.str());
}

PointLocation locate_point(const PointLocator& locator, const Vec2& p) {
  return locator.locate(p);
}

void dump_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.n_vertices() << " triangles " << mesh.n_triangles() << " edges "
      << mesh.boundary_edges.size() << "\n";
  for (const auto& v : mesh.vertices)
    out << format_double(v.x) << " " << format_double(v.y) << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << " " << tri[1] << " " << tri[2] << " " << mesh.refinement_edge[t] << "\n";
  }
  for (const auto& be : mesh.boundary_edges)
    out << be.a << " " << be.b << " " << to_string(be.marker) << "\n";
}

Mesh load_mesh(std::istream& in) {
  std::string kw_vertices, kw_triangles, kw_edges;
  int nv = 0, nt = 0, ne = 0;
  in >> kw_vertices >> nv >> kw_triangles >> nt >> kw_edges >> ne;
  if (!in || kw_vertices != "vertices" || kw_triangles != "triangles" || kw_edges != "edges")
    throw ArgumentError("mesh load: bad header");

  Mesh mesh;
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices) in >> v.x >> v.y;
  mesh.triangles.resize(nt);
  mesh.refinement_edge.resize(nt);
  for (int t = 0; t < nt; ++t)
    in >> mesh.triangles[t][0] >> mesh.triangles[t][1] >> mesh.triangles[t][2] >>
        mesh.refinement_edge[t];
  mesh.boundary_edges.resize(ne);
  bool any_arc = false;
  for (auto& be : mesh.boundary_edges) {
    std::string marker;
    in >> be.a >> be.b >> marker;
    be.marker = side_marker_from_string(marker);
    any_arc = any_arc || be.marker == SideMarker::Arc;
  }
  if (!in) throw ArgumentError("mesh load: truncated file");
  if (any_arc) {
    double r = 0.0;
    for (const auto& be : mesh.boundary_edges)
      if (be.marker == SideMarker::Arc) r = std::max(r, mesh.vertices[be.a].norm());
    mesh.snap_radius = r;
  }
  return mesh;
}

void dump_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open for writing: " + path);
  dump_mesh(mesh, out);
}

Mesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open for reading: " + path);
  return load_mesh(in);
}

}  // namespace rlm
