#pragma once

#include <memory>
#include <vector>

#include "rlm/fe.hpp"
#include "rlm/inclusion.hpp"

namespace rlm {

struct SolveReport {
  int outer_iterations = 0;
  double schur_residual = 0.0;   // ||B u - G|| recomputed from the solution
  double primal_residual = 0.0;  // ||A u + B^T lambda - f|| recomputed
  long long factor_nnz = 0;

  // CSV row: outer_iters,schur_res,primal_res,factor_nnz
  std::string csv_row() const;
};

// Sparse LDL^T factorization of the (positive definite) primal block with a
// fill-reducing ordering. Throws DefinitenessError when a non-positive pivot
// shows up, which usually means missing Dirichlet constraints.
class PrimalFactor {
 public:
  explicit PrimalFactor(const SymSparseMatrix& A);
  ~PrimalFactor();
  PrimalFactor(PrimalFactor&&) noexcept;
  PrimalFactor& operator=(PrimalFactor&&) noexcept;

  std::vector<double> solve(const std::vector<double>& rhs) const;
  long long factor_nnz() const;
  int dim() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PrimalFactor factor_primal(const SymSparseMatrix& A);

// Symmetric indefinite block system [A B^T; B 0][u; lambda] = [f; G] after
// symmetric elimination of the Dirichlet dofs. The lifting of non-homogeneous
// boundary values is folded into both right-hand sides.
struct SaddleSystem {
  SymSparseMatrix A;        // free dofs only
  CouplingBlock coupling;   // rows over free-dof indices, rhs = lifted G
  std::vector<double> f;    // free dofs, lifting folded in

  // full <-> free dof bookkeeping
  std::vector<int> free_of_dof;       // -1 where constrained
  std::vector<int> dof_of_free;
  std::vector<double> prescribed;     // full-length lifting field
  std::vector<int> multiplier_split;  // row offsets per inclusion (size m+1)

  int n_free() const { return static_cast<int>(dof_of_free.size()); }
  int n_multipliers() const { return coupling.n_rows(); }

  Field expand(const std::vector<double>& u_free) const;
  std::vector<double> restrict_field(const Field& u_full) const;
};

SaddleSystem build_saddle_system(const FeSpace& space, const SymSparseMatrix& A_full,
                                 const CouplingBlock& coupling, const Field& f_full);

struct SaddleSolution {
  Field u;  // full-length, prescribed values on constrained dofs
  std::vector<ReducedMultiplier> multipliers;  // per inclusion
  std::vector<double> lambda_flat;
  SolveReport report;
};

// Schur-complement conjugate gradients: S = B A^-1 B^T, one primal
// factorization reused by every iteration. Throws ConvergenceError on
// stagnation and RankError on CG breakdown.
SaddleSolution solve_saddle(const SaddleSystem& system, double tol = 1e-10, int max_iter = 500,
                            const std::vector<double>* lambda_start = nullptr);

// Residual norms recomputed from a candidate solution, nothing trusted from
// the iteration.
SolveReport verify_residuals(const SaddleSystem& system, const Field& u_full,
                             const std::vector<double>& lambda_flat);

}  // namespace rlm
