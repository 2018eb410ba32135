#include "rlm/fe.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "rlm/errors.hpp"
#include "rlm/saddle.hpp"

using namespace rlm;

namespace {

FeSpace make_space(Mesh mesh) {
  return build_space(std::make_shared<Mesh>(std::move(mesh)));
}

Field interpolate(const FeSpace& space, const std::function<Vec2(const Vec2&)>& f) {
  Field u(space.n_dofs(), 0.0);
  for (int v = 0; v < space.mesh->n_vertices(); ++v) {
    const Vec2 val = f(space.mesh->vertices[v]);
    u[FeSpace::dof(v, 0)] = val.x;
    u[FeSpace::dof(v, 1)] = val.y;
  }
  return u;
}

}  // namespace

TEST(BuildSpace, TwoDofsPerVertexVertexMajor) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 1));
  EXPECT_EQ(space.n_dofs(), 8);
  EXPECT_EQ(FeSpace::dof(3, 0), 6);
  EXPECT_EQ(FeSpace::dof(3, 1), 7);

  const FeSpace fine = make_space(refine_uniform(*space.mesh));
  EXPECT_EQ(fine.n_dofs(), 2 * fine.mesh->n_vertices());
}

TEST(AssembleStiffness, UnitTriangleLaplacianBlocks) {
  // Single unit right triangle (0,0), (1,0), (0,1). With mu = 1, lambda = 0
  // the x and y blocks decouple and each equals the P1 Laplacian
  // 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]].
  Mesh mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {0, 1}};
  mesh.triangles = {{0, 1, 2}};
  mesh.refinement_edge = {0};
  mesh.boundary_edges = {{0, 1, SideMarker::Bottom},
                         {1, 2, SideMarker::Right},
                         {2, 0, SideMarker::Left}};
  const FeSpace space = make_space(std::move(mesh));
  const SymSparseMatrix A = assemble_stiffness(space, 1.0, 0.0);

  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(A.coeff(2 * i, 2 * j), expected[i][j], 1e-14);
      EXPECT_NEAR(A.coeff(2 * i + 1, 2 * j + 1), expected[i][j], 1e-14);
      EXPECT_NEAR(A.coeff(2 * i, 2 * j + 1), 0.0, 1e-14);
    }
}

TEST(AssembleStiffness, SymmetricWithinTolerance) {
  const FeSpace space = make_space(generate_disc_mesh(1.0, 3, 12));
  const SymSparseMatrix A = assemble_stiffness(space, 1.7, 0.3);
  EXPECT_LE(A.symmetry_defect(), 1e-12);
}

TEST(AssembleStiffness, RigidTranslationInKernel) {
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 4));
  const SymSparseMatrix A = assemble_stiffness(space, 2.0, 1.0);
  const Field u = interpolate(space, [](const Vec2&) { return Vec2{0.7, -0.3}; });
  std::vector<double> y;
  A.multiply(u, y);
  for (double v : y) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(AssembleStiffness, EnergyNonNegative) {
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 3));
  const SymSparseMatrix A = assemble_stiffness(space, 1.0, 1.0);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    Field u(space.n_dofs());
    for (double& v : u) v = dist(gen);
    std::vector<double> y;
    A.multiply(u, y);
    double energy = 0.0;
    for (int i = 0; i < space.n_dofs(); ++i) energy += u[i] * y[i];
    EXPECT_GE(energy, -1e-12);
  }
}

TEST(AssembleStiffness, BilinearInMaterialParameters) {
  // A(mu, lambda) = mu K + lambda D, so A(2,3) = 3 A(1,1) - A(1,0) entrywise.
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 3));
  const SymSparseMatrix a23 = assemble_stiffness(space, 2.0, 3.0);
  const SymSparseMatrix a11 = assemble_stiffness(space, 1.0, 1.0);
  const SymSparseMatrix a10 = assemble_stiffness(space, 1.0, 0.0);
  for (int r = 0; r < a23.dim(); ++r)
    for (int k = a23.row_ptr()[r]; k < a23.row_ptr()[r + 1]; ++k) {
      const int c = a23.cols()[k];
      EXPECT_NEAR(a23.values()[k], 3.0 * a11.coeff(r, c) - a10.coeff(r, c), 1e-12);
    }
}

TEST(AssembleStiffness, NonPositiveMuThrows) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 1));
  EXPECT_THROW(assemble_stiffness(space, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(assemble_stiffness(space, -1.0, 1.0), ArgumentError);
}

TEST(AssembleLoad, ZeroForceGivesZeroVector) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 2));
  const Field load = assemble_load(space, [](const Vec2&) { return Vec2{0, 0}; });
  for (double v : load) EXPECT_EQ(v, 0.0);
}

TEST(AssembleLoad, PartitionOfUnity) {
  // Constant f = (1, 0): the x components sum to the domain area.
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 4));
  const Field load = assemble_load(space, [](const Vec2&) { return Vec2{1, 0}; });
  double sum_x = 0.0, sum_y = 0.0;
  for (int v = 0; v < space.mesh->n_vertices(); ++v) {
    sum_x += load[FeSpace::dof(v, 0)];
    sum_y += load[FeSpace::dof(v, 1)];
  }
  EXPECT_NEAR(sum_x, 1.0, 1e-12);
  EXPECT_NEAR(sum_y, 0.0, 1e-14);
}

TEST(AssembleLoad, ComponentSeparation) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 3));
  const Field load = assemble_load(space, [](const Vec2&) { return Vec2{0, 1}; });
  for (int v = 0; v < space.mesh->n_vertices(); ++v)
    EXPECT_EQ(load[FeSpace::dof(v, 0)], 0.0);
}

TEST(ApplyDirichlet, HomogeneousZeroConstrainsAllBoundaryDofs) {
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 3));
  const FeSpace constrained = apply_dirichlet(
      space, [](SideMarker, const Vec2&) { return std::optional<Vec2>(Vec2{0, 0}); });
  std::set<int> boundary_vertices;
  for (const auto& be : space.mesh->boundary_edges) {
    boundary_vertices.insert(be.a);
    boundary_vertices.insert(be.b);
  }
  int n_constrained = 0;
  for (int d = 0; d < space.n_dofs(); ++d) n_constrained += constrained.constrained[d];
  EXPECT_EQ(n_constrained, 2 * static_cast<int>(boundary_vertices.size()));
  for (int v : boundary_vertices) {
    EXPECT_TRUE(constrained.constrained[FeSpace::dof(v, 0)]);
    EXPECT_EQ(constrained.constraint_value[FeSpace::dof(v, 0)], 0.0);
  }
}

TEST(ApplyDirichlet, ShearPrescribesYComma0) {
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 2));
  const FeSpace constrained = apply_dirichlet(
      space, [](SideMarker, const Vec2& p) { return std::optional<Vec2>(Vec2{p.y, 0.0}); });
  // Top-side vertex at (x, 1) is prescribed (1, 0).
  for (const auto& be : space.mesh->boundary_edges)
    if (be.marker == SideMarker::Top) {
      EXPECT_NEAR(constrained.constraint_value[FeSpace::dof(be.a, 0)], 1.0, 1e-15);
      EXPECT_NEAR(constrained.constraint_value[FeSpace::dof(be.a, 1)], 0.0, 1e-15);
    }
}

TEST(ApplyDirichlet, CompressionCorner) {
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 2));
  const FeSpace constrained = apply_dirichlet(
      space, [](SideMarker, const Vec2& p) { return std::optional<Vec2>(p * -0.1); });
  int corner = -1;
  for (int v = 0; v < space.mesh->n_vertices(); ++v)
    if (space.mesh->vertices[v].x == 1.0 && space.mesh->vertices[v].y == 1.0) corner = v;
  ASSERT_GE(corner, 0);
  EXPECT_NEAR(constrained.constraint_value[FeSpace::dof(corner, 0)], -0.1, 1e-15);
  EXPECT_NEAR(constrained.constraint_value[FeSpace::dof(corner, 1)], -0.1, 1e-15);
}

TEST(ApplyDirichlet, NonFiniteValueThrows) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 1));
  EXPECT_THROW(apply_dirichlet(space,
                               [](SideMarker, const Vec2&) {
                                 return std::optional<Vec2>(
                                     Vec2{std::numeric_limits<double>::quiet_NaN(), 0.0});
                               }),
               ArgumentError);
}

TEST(EvaluateField, NodalAndLinearExactness) {
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 4));
  const Field u = interpolate(space, [](const Vec2& p) { return Vec2{p.x, 2.0 * p.y}; });

  const Vec2 nodal = evaluate_field(space, u, space.mesh->vertices[7]);
  EXPECT_DOUBLE_EQ(nodal.x, space.mesh->vertices[7].x);

  std::mt19937 gen(3);
  std::uniform_real_distribution<double> dist(-0.99, 0.99);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec2 p{dist(gen), dist(gen)};
    const Vec2 v = evaluate_field(space, u, p);
    EXPECT_NEAR(v.x, p.x, 1e-13);
    EXPECT_NEAR(v.y, 2.0 * p.y, 1e-13);
  }
}

TEST(EvaluateField, CentroidAveragesNodalValues) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 1));
  Field u(space.n_dofs(), 0.0);
  const auto& tri = space.mesh->triangles[0];
  const double vals[3] = {0.3, -1.2, 2.4};
  for (int i = 0; i < 3; ++i) u[FeSpace::dof(tri[i], 0)] = vals[i];
  const Vec2 c = space.mesh->triangle_centroid(0);
  EXPECT_NEAR(evaluate_field(space, u, c).x, (vals[0] + vals[1] + vals[2]) / 3.0, 1e-14);
}

TEST(ErrorNorms, ExactForRepresentedFields) {
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 3));
  auto linear = [](const Vec2& p) { return Vec2{0.5 * p.x - p.y, 2.0 * p.y}; };
  auto linear_grad = [](const Vec2&) { return Mat2{0.5, -1.0, 0.0, 2.0}; };
  const Field u = interpolate(space, linear);
  const auto norms = error_norms(space, u, linear, linear_grad);
  EXPECT_LE(norms.l2, 1e-12);
  EXPECT_LE(norms.h1_semi, 1e-12);

  const Field zero(space.n_dofs(), 0.0);
  const auto zero_norms = error_norms(space, zero, [](const Vec2&) { return Vec2{0, 0}; },
                                      [](const Vec2&) { return Mat2{}; });
  EXPECT_EQ(zero_norms.l2, 0.0);
  EXPECT_EQ(zero_norms.h1_semi, 0.0);
}

TEST(ErrorNorms, QuadraticInterpolantConvergesAtSecondOrder) {
  auto exact = [](const Vec2& p) { return Vec2{p.x * p.x, 0.0}; };
  auto exact_grad = [](const Vec2& p) { return Mat2{2.0 * p.x, 0.0, 0.0, 0.0}; };

  const FeSpace coarse = make_space(generate_rect_mesh(0, 1, 0, 1, 8));
  const FeSpace fine = make_space(generate_rect_mesh(0, 1, 0, 1, 16));
  const double e_coarse = error_norms(coarse, interpolate(coarse, exact), exact, exact_grad).l2;
  const double e_fine = error_norms(fine, interpolate(fine, exact), exact, exact_grad).l2;
  const double ratio = e_coarse / e_fine;
  EXPECT_GE(ratio, 3.6);
  EXPECT_LE(ratio, 4.4);
}

TEST(PatchTest, AffineFieldReproducedThroughSolve) {
  // Affine exact displacement, matching Dirichlet data, f = 0: the discrete
  // solution equals the interpolant to solver precision.
  const FeSpace space = make_space(generate_rect_mesh(-1, 1, -1, 1, 5));
  auto affine = [](const Vec2& p) {
    return Vec2{0.3 * p.x - 0.2 * p.y + 0.1, 0.7 * p.y + 0.25 * p.x};
  };
  const SymSparseMatrix A = assemble_stiffness(space, 1.3, 0.8);
  const FeSpace constrained = apply_dirichlet(
      space, [&](SideMarker, const Vec2& p) { return std::optional<Vec2>(affine(p)); });
  const Field f(space.n_dofs(), 0.0);
  const SaddleSystem sys = build_saddle_system(constrained, A, CouplingBlock{}, f);
  const SaddleSolution sol = solve_saddle(sys);

  const Field expected = interpolate(space, affine);
  for (int d = 0; d < space.n_dofs(); ++d) EXPECT_NEAR(sol.u[d], expected[d], 1e-10);
}
