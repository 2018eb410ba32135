#include "rlm/fe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "rlm/errors.hpp"

namespace rlm {

void SymSparseMatrix::add(int row, int col, double value) {
  if (finalized_) throw ArgumentError("SymSparseMatrix: add after finalize");
  triplet_idx_.push_back({row, col});
  triplet_val_.push_back(value);
}

void SymSparseMatrix::finalize() {
  std::vector<int> order(triplet_idx_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return triplet_idx_[a] < triplet_idx_[b];
  });

  row_ptr_.assign(dim_ + 1, 0);
  cols_.clear();
  vals_.clear();
  size_t k = 0;
  while (k < order.size()) {
    const auto idx = triplet_idx_[order[k]];
    double sum = 0.0;
    while (k < order.size() && triplet_idx_[order[k]] == idx) sum += triplet_val_[order[k++]];
    if (sum != 0.0) {
      cols_.push_back(idx[1]);
      vals_.push_back(sum);
      row_ptr_[idx[0] + 1]++;
    }
  }
  for (int r = 0; r < dim_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  triplet_idx_.clear();
  triplet_val_.clear();
  finalized_ = true;
}

double SymSparseMatrix::coeff(int row, int col) const {
  for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (cols_[k] == col) return vals_[k];
  return 0.0;
}

void SymSparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(dim_, 0.0);
  for (int r = 0; r < dim_; ++r) {
    double sum = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += vals_[k] * x[cols_[k]];
    y[r] = sum;
  }
}

double SymSparseMatrix::symmetry_defect() const {
  double max_entry = 0.0;
  for (double v : vals_) max_entry = std::max(max_entry, std::abs(v));
  if (max_entry == 0.0) return 0.0;
  double defect = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      defect = std::max(defect, std::abs(vals_[k] - coeff(cols_[k], r)));
  return defect / max_entry;
}

FeSpace build_space(std::shared_ptr<const Mesh> mesh) {
  FeSpace space;
  space.mesh = std::move(mesh);
  space.locator = std::make_shared<PointLocator>(*space.mesh);
  space.constrained.assign(space.n_dofs(), 0);
  space.constraint_value.assign(space.n_dofs(), 0.0);
  return space;
}

namespace {

// Constant P1 shape gradients on triangle t; g[i] is the gradient of the hat
// function of local vertex i. Also returns the triangle area.
double shape_gradients(const Mesh& mesh, int t, std::array<Vec2, 3>& g) {
  const auto& tri = mesh.triangles[t];
  const Vec2& a = mesh.vertices[tri[0]];
  const Vec2& b = mesh.vertices[tri[1]];
  const Vec2& c = mesh.vertices[tri[2]];
  const double area2 = (b - a).cross(c - a);
  g[0] = Vec2{b.y - c.y, c.x - b.x} / area2;
  g[1] = Vec2{c.y - a.y, a.x - c.x} / area2;
  g[2] = Vec2{a.y - b.y, b.x - a.x} / area2;
  return 0.5 * area2;
}

}  // namespace

SymSparseMatrix assemble_stiffness(const FeSpace& space, double mu, double lambda) {
  if (!(mu > 0.0)) throw ArgumentError("assemble_stiffness: mu must be positive");
  if (lambda < 0.0) throw ArgumentError("assemble_stiffness: lambda must be >= 0");

  const Mesh& mesh = *space.mesh;
  SymSparseMatrix A(space.n_dofs());
  std::array<Vec2, 3> g;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double area = shape_gradients(mesh, t, g);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double gij = g[i].dot(g[j]) * area;
        const std::array<double, 2> gi = {g[i].x, g[i].y};
        const std::array<double, 2> gj = {g[j].x, g[j].y};
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) {
            double v = lambda * gi[c] * gj[d] * area;
            if (c == d) v += mu * gij;
            if (v != 0.0) A.add(FeSpace::dof(tri[i], c), FeSpace::dof(tri[j], d), v);
          }
      }
  }
  A.finalize();
  return A;
}

Field assemble_load(const FeSpace& space, const std::function<Vec2(const Vec2&)>& f) {
  const Mesh& mesh = *space.mesh;
  Field load(space.n_dofs(), 0.0);
  // Degree-2 rule: edge midpoints with weight area/3. The hat function of a
  // vertex takes value 1/2 at the two adjacent midpoints and 0 opposite.
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double w = mesh.triangle_area(t) / 3.0;
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = (mesh.vertices[tri[(e + 1) % 3]] + mesh.vertices[tri[(e + 2) % 3]]) * 0.5;
      const Vec2 fv = f(mid);
      for (int loc : {(e + 1) % 3, (e + 2) % 3}) {
        load[FeSpace::dof(tri[loc], 0)] += w * 0.5 * fv.x;
        load[FeSpace::dof(tri[loc], 1)] += w * 0.5 * fv.y;
      }
    }
  }
  return load;
}

FeSpace apply_dirichlet(const FeSpace& space, const BoundaryFn& boundary_fn) {
  FeSpace out = space;
  const Mesh& mesh = *space.mesh;
  for (const auto& be : mesh.boundary_edges)
    for (int v : {be.a, be.b}) {
      const auto val = boundary_fn(be.marker, mesh.vertices[v]);
      if (!val) continue;
      if (!std::isfinite(val->x) || !std::isfinite(val->y))
        throw ArgumentError("apply_dirichlet: non-finite prescribed displacement");
      out.constrained[FeSpace::dof(v, 0)] = 1;
      out.constrained[FeSpace::dof(v, 1)] = 1;
      out.constraint_value[FeSpace::dof(v, 0)] = val->x;
      out.constraint_value[FeSpace::dof(v, 1)] = val->y;
    }
  return out;
}

Vec2 evaluate_field_at(const FeSpace& space, const Field& u, const PointLocation& loc) {
  const auto& tri = space.mesh->triangles[loc.triangle];
  Vec2 value{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    value.x += loc.barycentric[i] * u[FeSpace::dof(tri[i], 0)];
    value.y += loc.barycentric[i] * u[FeSpace::dof(tri[i], 1)];
  }
  return value;
}

Vec2 evaluate_field(const FeSpace& space, const Field& u, const Vec2& point) {
  return evaluate_field_at(space, u, space.locator->locate(point));
}

Mat2 triangle_gradient(const FeSpace& space, const Field& u, int t) {
  std::array<Vec2, 3> g;
  shape_gradients(*space.mesh, t, g);
  const auto& tri = space.mesh->triangles[t];
  Mat2 grad;
  for (int i = 0; i < 3; ++i) {
    const double ux = u[FeSpace::dof(tri[i], 0)];
    const double uy = u[FeSpace::dof(tri[i], 1)];
    grad.a00 += ux * g[i].x;
    grad.a01 += ux * g[i].y;
    grad.a10 += uy * g[i].x;
    grad.a11 += uy * g[i].y;
  }
  return grad;
}

ErrorNorms error_norms(const FeSpace& space, const Field& u,
                       const std::function<Vec2(const Vec2&)>& exact,
                       const std::function<Mat2(const Vec2&)>& exact_grad) {
  // Degree-4 (6-point) triangle rule, barycentric points and weights.
  static const double w1 = 0.223381589678011, b1 = 0.108103018168070, c1 = 0.445948490915965;
  static const double w2 = 0.109951743655322, b2 = 0.816847572980459, c2 = 0.091576213509771;
  static const std::array<std::array<double, 3>, 6> pts = {{{b1, c1, c1},
                                                            {c1, b1, c1},
                                                            {c1, c1, b1},
                                                            {b2, c2, c2},
                                                            {c2, b2, c2},
                                                            {c2, c2, b2}}};
  static const std::array<double, 6> wts = {w1, w1, w1, w2, w2, w2};

  const Mesh& mesh = *space.mesh;
  double l2 = 0.0, h1 = 0.0;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    const Mat2 grad_h = triangle_gradient(space, u, t);
    for (int q = 0; q < 6; ++q) {
      Vec2 x{0.0, 0.0}, uh{0.0, 0.0};
      for (int i = 0; i < 3; ++i) {
        x += mesh.vertices[tri[i]] * pts[q][i];
        uh.x += pts[q][i] * u[FeSpace::dof(tri[i], 0)];
        uh.y += pts[q][i] * u[FeSpace::dof(tri[i], 1)];
      }
      const Vec2 diff = uh - exact(x);
      const Mat2 gdiff = grad_h - exact_grad(x);
      l2 += wts[q] * area * diff.norm2();
      h1 += wts[q] * area * gdiff.frobenius2();
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

namespace {
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_solution_csv(const FeSpace& space, const Field& u, std::ostream& out) {
  out << "x,y,ux,uy\n";
  const Mesh& mesh = *space.mesh;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out << fmt17(mesh.vertices[v].x) << "," << fmt17(mesh.vertices[v].y) << ","
        << fmt17(u[FeSpace::dof(v, 0)]) << "," << fmt17(u[FeSpace::dof(v, 1)]) << "\n";
}

void write_solution_vtk(const FeSpace& space, const Field& u, std::ostream& out) {
  const Mesh& mesh = *space.mesh;
  out << "# vtk DataFile Version 3.0\ndisplacement\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices) out << fmt17(v.x) << " " << fmt17(v.y) << " 0\n";
  out << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
  for (const auto& tri : mesh.triangles)
    out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  out << "CELL_TYPES " << mesh.n_triangles() << "\n";
  for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.n_vertices() << "\nVECTORS displacement double\n";
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out << fmt17(u[FeSpace::dof(v, 0)]) << " " << fmt17(u[FeSpace::dof(v, 1)]) << " 0\n";
}

}  // namespace rlm
