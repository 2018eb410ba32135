#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlm/mesh.hpp"

namespace rlm {

// Nodal coefficient vector over the degrees of freedom of a FeSpace.
using Field = std::vector<double>;

// Symmetric sparse matrix in compressed row storage. Built from triplets,
// then finalized (duplicates summed, explicit zeros dropped).
class SymSparseMatrix {
 public:
  SymSparseMatrix() = default;
  explicit SymSparseMatrix(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  void add(int row, int col, double value);
  void finalize();
  bool finalized() const { return finalized_; }

  double coeff(int row, int col) const;
  int nnz() const { return static_cast<int>(cols_.size()); }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;

  // Largest |a_ij - a_ji| relative to the largest entry magnitude.
  double symmetry_defect() const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return vals_; }

 private:
  int dim_ = 0;
  bool finalized_ = false;
  std::vector<std::array<int, 2>> triplet_idx_;
  std::vector<double> triplet_val_;
  std::vector<int> row_ptr_;
  std::vector<int> cols_;
  std::vector<double> vals_;
};

// Vector P1 space: two dofs per vertex, vertex-major (x then y component).
struct FeSpace {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const PointLocator> locator;
  std::vector<char> constrained;     // per dof
  std::vector<double> constraint_value;  // per dof, meaningful where constrained

  int n_dofs() const { return 2 * mesh->n_vertices(); }
  static int dof(int vertex, int component) { return 2 * vertex + component; }
};

FeSpace build_space(std::shared_ptr<const Mesh> mesh);

// Stiffness of a(u,v) = int mu grad(u):grad(v) + lambda div(u) div(v); the
// full (non-symmetrized) gradient is intentional and the moduli numbers
// depend on it.
SymSparseMatrix assemble_stiffness(const FeSpace& space, double mu, double lambda);

// Nodal load vector of (f, v) via the 3-point (degree-2) triangle rule.
Field assemble_load(const FeSpace& space, const std::function<Vec2(const Vec2&)>& f);

// Marks boundary vertices whose (marker, position) the callback claims,
// recording the prescribed displacement. Returns a new constrained space.
using BoundaryFn = std::function<std::optional<Vec2>(SideMarker, const Vec2&)>;
FeSpace apply_dirichlet(const FeSpace& space, const BoundaryFn& boundary_fn);

Vec2 evaluate_field(const FeSpace& space, const Field& u, const Vec2& point);
Vec2 evaluate_field_at(const FeSpace& space, const Field& u, const PointLocation& loc);

// Constant displacement gradient of the P1 field on triangle t.
Mat2 triangle_gradient(const FeSpace& space, const Field& u, int t);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

// L2 and H1-seminorm distance to an exact field, integrated with the 6-point
// (degree-4) triangle rule.
ErrorNorms error_norms(const FeSpace& space, const Field& u,
                       const std::function<Vec2(const Vec2&)>& exact,
                       const std::function<Mat2(const Vec2&)>& exact_grad);

// Nodal solution export: header x,y,ux,uy, one row per vertex.
void write_solution_csv(const FeSpace& space, const Field& u, std::ostream& out);
// Legacy-VTK text export of mesh plus displacement.
void write_solution_vtk(const FeSpace& space, const Field& u, std::ostream& out);

}  // namespace rlm
