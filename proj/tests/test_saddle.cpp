#include "rlm/saddle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rlm/errors.hpp"
#include "rlm/postprocess.hpp"

using namespace rlm;

namespace {

FeSpace make_space(Mesh mesh) {
  return build_space(std::make_shared<Mesh>(std::move(mesh)));
}

FeSpace zero_boundary(const FeSpace& space) {
  return apply_dirichlet(space,
                         [](SideMarker, const Vec2&) { return std::optional<Vec2>(Vec2{0, 0}); });
}

// Single centered inclusion on a disc mesh with the given number of uniform
// refinements; homogeneous outer boundary.
struct AxisymSetup {
  FeSpace space;
  std::vector<Inclusion> inclusions;
  SaddleSystem system;
};

AxisymSetup axisym_setup(int levels, double gbar = 0.1) {
  Mesh mesh = generate_disc_mesh(1.0, 4, 24);
  for (int l = 0; l < levels; ++l) mesh = refine_uniform(mesh);
  AxisymSetup setup{make_space(std::move(mesh)), {Inclusion{{0, 0}, 0.2, gbar, 2}}, {}};
  setup.space = zero_boundary(setup.space);
  const SymSparseMatrix A = assemble_stiffness(setup.space, 1.0, 1.0);
  const CouplingBlock coupling = assemble_coupling(setup.space, setup.inclusions);
  const Field f(setup.space.n_dofs(), 0.0);
  setup.system = build_saddle_system(setup.space, A, coupling, f);
  return setup;
}

// Dense Schur complement assembled column by column through the public
// pieces; used for the SPD spot checks.
std::vector<std::vector<double>> dense_schur(const SaddleSystem& sys) {
  const PrimalFactor factor(sys.A);
  const int n = sys.n_multipliers();
  std::vector<std::vector<double>> S(n, std::vector<double>(n, 0.0));
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    std::vector<double> y(sys.n_free(), 0.0);
    sys.coupling.add_transpose_apply(e, y);
    const auto z = factor.solve(y);
    for (int i = 0; i < n; ++i) S[i][j] = sys.coupling.apply_row(i, z);
  }
  return S;
}

// Smallest eigenvalue of a small dense SPD matrix by inverse power iteration
// on an in-place Cholesky solve.
double min_eigenvalue(std::vector<std::vector<double>> S) {
  const int n = static_cast<int>(S.size());
  // Cholesky factorization S = L L^T.
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double sum = S[i][j];
      for (int k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j) {
        if (sum <= 0.0) return sum;  // not SPD; report the bad pivot
        L[i][i] = std::sqrt(sum);
      } else {
        L[i][j] = sum / L[j][j];
      }
    }
  auto solve = [&](std::vector<double> b) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < i; ++k) b[i] -= L[i][k] * b[k];
      b[i] /= L[i][i];
    }
    for (int i = n - 1; i >= 0; --i) {
      for (int k = i + 1; k < n; ++k) b[i] -= L[k][i] * b[k];
      b[i] /= L[i][i];
    }
    return b;
  };
  std::vector<double> v(n, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    auto w = solve(v);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : w) x /= norm;
    double rayleigh = 0.0;
    for (int i = 0; i < n; ++i) {
      double Sv = 0.0;
      for (int j = 0; j < n; ++j) Sv += S[i][j] * w[j];
      rayleigh += w[i] * Sv;
    }
    lambda = rayleigh;
    v = w;
  }
  return lambda;
}

}  // namespace

TEST(FactorPrimal, OneByOne) {
  SymSparseMatrix A(1);
  A.add(0, 0, 4.0);
  A.finalize();
  const PrimalFactor factor(A);
  EXPECT_NEAR(factor.solve({8.0})[0], 2.0, 1e-15);
}

TEST(FactorPrimal, DirectSolveContract) {
  const FeSpace space = zero_boundary(make_space(generate_rect_mesh(-1, 1, -1, 1, 6)));
  const SymSparseMatrix A_full = assemble_stiffness(space, 1.0, 1.0);
  const SaddleSystem sys =
      build_saddle_system(space, A_full, CouplingBlock{}, Field(space.n_dofs(), 0.0));
  const PrimalFactor factor(sys.A);

  std::mt19937 gen(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> b(sys.n_free());
  for (double& v : b) v = dist(gen);
  const auto x = factor.solve(b);
  std::vector<double> r;
  sys.A.multiply(x, r);
  double res = 0.0, bn = 0.0;
  for (int i = 0; i < sys.n_free(); ++i) {
    res += (r[i] - b[i]) * (r[i] - b[i]);
    bn += b[i] * b[i];
  }
  EXPECT_LE(std::sqrt(res), 1e-12 * std::sqrt(bn));
}

TEST(FactorPrimal, SingularMatrixThrowsDefiniteness) {
  // No Dirichlet constraints: rigid translations are in the kernel.
  const FeSpace space = make_space(generate_rect_mesh(0, 1, 0, 1, 3));
  const SymSparseMatrix A = assemble_stiffness(space, 1.0, 1.0);
  EXPECT_THROW(PrimalFactor{A}, DefinitenessError);
}

TEST(SolveSaddle, HomogeneousProblemIsZero) {
  auto setup = axisym_setup(1, 0.0);
  const SaddleSolution sol = solve_saddle(setup.system);
  for (double v : sol.u) EXPECT_NEAR(v, 0.0, 1e-12);
  for (double v : sol.lambda_flat) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(SolveSaddle, SchurDimensionCounts) {
  const FeSpace space = zero_boundary(make_space(generate_rect_mesh(-1, 1, -1, 1, 24)));
  std::vector<Inclusion> incs;
  for (double x : {-0.3, 0.3})
    for (double y : {-0.3, 0.3}) incs.push_back({{x, y}, 0.1, 0.1, 2});
  const SymSparseMatrix A = assemble_stiffness(space, 1.0, 1.0);
  const CouplingBlock coupling = assemble_coupling(space, incs);
  const SaddleSystem sys = build_saddle_system(space, A, coupling, Field(space.n_dofs(), 0.0));
  EXPECT_EQ(sys.n_multipliers(), 16);
  const SaddleSolution sol = solve_saddle(sys);
  EXPECT_EQ(sol.multipliers.size(), 4u);
  EXPECT_EQ(sol.multipliers[0].size(), 4u);
}

TEST(SolveSaddle, AxisymMatchesAnalyticUnderRefinement) {
  const AnalyticAxisym exact(1.0, 0.2, 0.1);
  double prev_err = 1e300;
  double prev_lam_err = 1e300;
  const double lam_exact = 2.0 * M_PI * 0.2 * exact.traction_jump(1.0, 1.0) / std::sqrt(2.0);
  for (int level : {2, 3, 4}) {
    auto setup = axisym_setup(level);
    const SaddleSolution sol = solve_saddle(setup.system);
    double err = 0.0;
    for (double r : {0.35, 0.5, 0.7}) {
      const Vec2 u = evaluate_field(setup.space, sol.u, {r, 0.0});
      const double exact_x = exact.displacement({r, 0.0}).x;
      err = std::max(err, std::abs(u.x - exact_x) / std::abs(exact_x));
    }
    EXPECT_LT(err, prev_err);
    prev_err = err;
    const double lam_err = std::abs(sol.multipliers[0][0] - lam_exact);
    EXPECT_LT(lam_err, prev_lam_err);
    prev_lam_err = lam_err;
  }
  // Finest level: sampled displacements and the multiplier within 3%.
  EXPECT_LE(prev_err, 0.03);
  EXPECT_LE(prev_lam_err / std::abs(lam_exact), 0.03);
}

TEST(SolveSaddle, ResidualContracts) {
  auto setup = axisym_setup(2);
  const SaddleSolution sol = solve_saddle(setup.system, 1e-10, 500);
  double gn = 0.0;
  for (double g : setup.system.coupling.rhs) gn += g * g;
  EXPECT_LE(sol.report.schur_residual, 1e-10 * std::max(1.0, std::sqrt(gn)));
  EXPECT_LE(sol.report.primal_residual, 1e-10);
  EXPECT_GT(sol.report.factor_nnz, 0);
}

TEST(SolveSaddle, StagnationThrowsConvergenceError) {
  auto setup = axisym_setup(2);
  EXPECT_THROW(solve_saddle(setup.system, 1e-14, 1), ConvergenceError);
}

TEST(SolveSaddle, RankDeficientCouplingThrowsRankError) {
  // A zero constraint row with a nonzero datum puts the Schur right-hand
  // side outside the range of S; CG breaks down immediately.
  auto setup = axisym_setup(1, 0.0);
  SaddleSystem sys = setup.system;
  sys.coupling.rows.push_back({});
  sys.coupling.rhs.push_back(1.0);
  sys.coupling.inclusion_of_row.push_back(0);
  sys.multiplier_split.back() += 1;
  EXPECT_THROW(solve_saddle(sys), RankError);
}

TEST(VerifyResiduals, PerturbationGrowsProportionally) {
  auto setup = axisym_setup(1);
  const SaddleSolution sol = solve_saddle(setup.system);

  std::mt19937 gen(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field direction(sol.u.size());
  for (double& v : direction) v = dist(gen);

  Field u1 = sol.u, u2 = sol.u;
  for (size_t i = 0; i < sol.u.size(); ++i) {
    u1[i] += 1e-3 * direction[i];
    u2[i] += 2e-3 * direction[i];
  }
  const SolveReport r1 = verify_residuals(setup.system, u1, sol.lambda_flat);
  const SolveReport r2 = verify_residuals(setup.system, u2, sol.lambda_flat);
  EXPECT_GT(r1.primal_residual, 1e-6);
  EXPECT_NEAR(r2.primal_residual / r1.primal_residual, 2.0, 1e-3);
}

TEST(VerifyResiduals, ZeroMultiplierLeavesConstraintResidual) {
  auto setup = axisym_setup(1);
  const Field zero_u(setup.space.n_dofs(), 0.0);
  const std::vector<double> zero_lambda(setup.system.n_multipliers(), 0.0);
  const SolveReport rep = verify_residuals(setup.system, zero_u, zero_lambda);
  double gn = 0.0;
  for (double g : setup.system.coupling.rhs) gn += g * g;
  EXPECT_NEAR(rep.schur_residual, std::sqrt(gn), 1e-14);
}

TEST(SaddleProperties, AdjointConsistency) {
  auto setup = axisym_setup(1);
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> lambda(setup.system.n_multipliers());
    for (double& v : lambda) v = dist(gen);
    std::vector<double> v(setup.system.n_free());
    for (double& x : v) x = dist(gen);

    std::vector<double> btl(setup.system.n_free(), 0.0);
    setup.system.coupling.add_transpose_apply(lambda, btl);
    double lhs = 0.0;
    for (int i = 0; i < setup.system.n_free(); ++i) lhs += btl[i] * v[i];
    double rhs = 0.0;
    for (int r = 0; r < setup.system.n_multipliers(); ++r)
      rhs += lambda[r] * setup.system.coupling.apply_row(r, v);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(SaddleProperties, SolutionIndependentOfStartVector) {
  auto setup = axisym_setup(2);
  const double tol = 1e-10;
  const SaddleSolution a = solve_saddle(setup.system, tol, 500);
  std::vector<double> start(setup.system.n_multipliers(), 0.37);
  const SaddleSolution b = solve_saddle(setup.system, tol, 500, &start);
  for (int r = 0; r < setup.system.n_multipliers(); ++r)
    EXPECT_NEAR(a.lambda_flat[r], b.lambda_flat[r], 10 * tol * 100);
}

TEST(SaddleProperties, SuperpositionLinearity) {
  auto setup = axisym_setup(2);
  // Second right-hand side pair: a body force and a scaled constraint datum.
  SaddleSystem sys1 = setup.system;
  SaddleSystem sys2 = setup.system;
  const Field f2_full = assemble_load(setup.space, [](const Vec2& p) {
    return Vec2{std::sin(1.7 * p.x), std::cos(0.9 * p.y)};
  });
  sys2.f = sys2.restrict_field(f2_full);
  for (double& g : sys2.coupling.rhs) g *= -0.35;

  SaddleSystem sys_sum = setup.system;
  for (int i = 0; i < sys_sum.n_free(); ++i) sys_sum.f[i] = sys1.f[i] + sys2.f[i];
  for (int r = 0; r < sys_sum.n_multipliers(); ++r)
    sys_sum.coupling.rhs[r] = sys1.coupling.rhs[r] + sys2.coupling.rhs[r];

  const SaddleSolution s1 = solve_saddle(sys1);
  const SaddleSolution s2 = solve_saddle(sys2);
  const SaddleSolution s12 = solve_saddle(sys_sum);
  for (size_t i = 0; i < s12.u.size(); ++i)
    EXPECT_NEAR(s12.u[i], s1.u[i] + s2.u[i], 1e-9);
  for (int r = 0; r < sys_sum.n_multipliers(); ++r)
    EXPECT_NEAR(s12.lambda_flat[r], s1.lambda_flat[r] + s2.lambda_flat[r], 1e-9);
}

TEST(SaddleProperties, SchurIsSpdAndDegradesTowardTangency) {
  auto make_system = [&](double gap) {
    const FeSpace space = zero_boundary(make_space(generate_rect_mesh(-1, 1, -1, 1, 24)));
    const double r = 0.15;
    const std::vector<Inclusion> incs = {{{-r - gap / 2, 0.0}, r, 0.1, 2},
                                         {{r + gap / 2, 0.0}, r, 0.1, 2}};
    const SymSparseMatrix A = assemble_stiffness(space, 1.0, 1.0);
    const CouplingBlock coupling = assemble_coupling(space, incs);
    return build_saddle_system(space, A, coupling, Field(space.n_dofs(), 0.0));
  };
  const double eig_far = min_eigenvalue(dense_schur(make_system(0.5)));
  const double eig_near = min_eigenvalue(dense_schur(make_system(0.05)));
  EXPECT_GT(eig_far, 0.0);
  EXPECT_GT(eig_near, 0.0);
  EXPECT_LT(eig_near, eig_far);
}
