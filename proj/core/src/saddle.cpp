#include "rlm/saddle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rlm/errors.hpp"

namespace rlm {

std::string SolveReport::csv_row() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%lld", outer_iterations, schur_residual,
                primal_residual, factor_nnz);
  return buf;
}

struct PrimalFactor::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  int dim = 0;
};

PrimalFactor::PrimalFactor(const SymSparseMatrix& A) : impl_(std::make_unique<Impl>()) {
  const int n = A.dim();
  impl_->dim = n;
  Eigen::SparseMatrix<double> M(n, n);
  {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nnz());
    for (int r = 0; r < n; ++r)
      for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
        trips.emplace_back(r, A.cols()[k], A.values()[k]);
    M.setFromTriplets(trips.begin(), trips.end());
  }
  impl_->ldlt.compute(M);
  if (impl_->ldlt.info() != Eigen::Success)
    throw DefinitenessError("primal factorization failed");
  const auto& D = impl_->ldlt.vectorD();
  const double dmax = D.maxCoeff();
  const double dmin = D.minCoeff();
  if (!(dmin > 0.0) || dmin < 1e-13 * dmax)
    throw DefinitenessError(
        "primal block is not positive definite (missing Dirichlet constraints?)");
}

PrimalFactor::~PrimalFactor() = default;
PrimalFactor::PrimalFactor(PrimalFactor&&) noexcept = default;
PrimalFactor& PrimalFactor::operator=(PrimalFactor&&) noexcept = default;

std::vector<double> PrimalFactor::solve(const std::vector<double>& rhs) const {
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
  Eigen::VectorXd x = impl_->ldlt.solve(b);
  return {x.data(), x.data() + x.size()};
}

long long PrimalFactor::factor_nnz() const {
  return static_cast<long long>(impl_->ldlt.matrixL().nestedExpression().nonZeros());
}

int PrimalFactor::dim() const { return impl_->dim; }

PrimalFactor factor_primal(const SymSparseMatrix& A) { return PrimalFactor(A); }

Field SaddleSystem::expand(const std::vector<double>& u_free) const {
  Field u = prescribed;
  for (int i = 0; i < n_free(); ++i) u[dof_of_free[i]] = u_free[i];
  return u;
}

std::vector<double> SaddleSystem::restrict_field(const Field& u_full) const {
  std::vector<double> u(n_free());
  for (int i = 0; i < n_free(); ++i) u[i] = u_full[dof_of_free[i]];
  return u;
}

SaddleSystem build_saddle_system(const FeSpace& space, const SymSparseMatrix& A_full,
                                 const CouplingBlock& coupling, const Field& f_full) {
  const int n = space.n_dofs();
  SaddleSystem sys;
  sys.free_of_dof.assign(n, -1);
  sys.prescribed.assign(n, 0.0);
  for (int d = 0; d < n; ++d) {
    if (space.constrained[d]) {
      sys.prescribed[d] = space.constraint_value[d];
    } else {
      sys.free_of_dof[d] = static_cast<int>(sys.dof_of_free.size());
      sys.dof_of_free.push_back(d);
    }
  }
  const int nf = sys.n_free();

  // Symmetric elimination: keep free rows/columns, move known columns to the
  // right-hand side.
  sys.A = SymSparseMatrix(nf);
  sys.f.assign(nf, 0.0);
  for (int i = 0; i < nf; ++i) sys.f[i] = f_full[sys.dof_of_free[i]];
  for (int r = 0; r < n; ++r) {
    const int fr = sys.free_of_dof[r];
    if (fr < 0) continue;
    for (int k = A_full.row_ptr()[r]; k < A_full.row_ptr()[r + 1]; ++k) {
      const int c = A_full.cols()[k];
      const double v = A_full.values()[k];
      const int fc = sys.free_of_dof[c];
      if (fc >= 0)
        sys.A.add(fr, fc, v);
      else
        sys.f[fr] -= v * sys.prescribed[c];
    }
  }
  sys.A.finalize();

  // Constraint rows on free dofs; G corrected by the lifting contribution.
  sys.coupling.rhs = coupling.rhs;
  sys.coupling.inclusion_of_row = coupling.inclusion_of_row;
  sys.coupling.rows.resize(coupling.rows.size());
  for (int r = 0; r < coupling.n_rows(); ++r) {
    for (const auto& e : coupling.rows[r]) {
      const int fd = sys.free_of_dof[e.dof];
      if (fd >= 0)
        sys.coupling.rows[r].push_back({fd, e.value});
      else
        sys.coupling.rhs[r] -= e.value * sys.prescribed[e.dof];
    }
  }

  sys.multiplier_split.push_back(0);
  for (int r = 0; r < coupling.n_rows(); ++r) {
    if (r + 1 == coupling.n_rows() ||
        coupling.inclusion_of_row[r + 1] != coupling.inclusion_of_row[r])
      sys.multiplier_split.push_back(r + 1);
  }
  return sys;
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> apply_schur(const SaddleSystem& sys, const PrimalFactor& factor,
                                const std::vector<double>& lambda) {
  std::vector<double> y(sys.n_free(), 0.0);
  sys.coupling.add_transpose_apply(lambda, y);
  const std::vector<double> z = factor.solve(y);
  std::vector<double> w(sys.n_multipliers());
  for (int r = 0; r < sys.n_multipliers(); ++r) w[r] = sys.coupling.apply_row(r, z);
  return w;
}

}  // namespace

SaddleSolution solve_saddle(const SaddleSystem& sys, double tol, int max_iter,
                            const std::vector<double>* lambda_start) {
  PrimalFactor factor(sys.A);
  SaddleSolution sol;
  sol.report.factor_nnz = factor.factor_nnz();

  const int nl = sys.n_multipliers();
  std::vector<double> lambda(nl, 0.0);

  if (nl > 0) {
    // Schur right-hand side: B A^-1 f - G.
    const std::vector<double> Ainv_f = factor.solve(sys.f);
    std::vector<double> rhs(nl);
    for (int r = 0; r < nl; ++r) rhs[r] = sys.coupling.apply_row(r, Ainv_f) - sys.coupling.rhs[r];

    const double target = tol * std::max(1.0, norm2(sys.coupling.rhs));

    if (lambda_start) {
      if (static_cast<int>(lambda_start->size()) != nl)
        throw ArgumentError("solve_saddle: start vector length mismatch");
      lambda = *lambda_start;
    }
    std::vector<double> r = rhs;
    if (lambda_start) {
      const auto Sx = apply_schur(sys, factor, lambda);
      for (int i = 0; i < nl; ++i) r[i] -= Sx[i];
    }
    std::vector<double> p = r;
    double rr = 0.0;
    for (double v : r) rr += v * v;
    int iter = 0;
    while (std::sqrt(rr) > target) {
      if (iter >= max_iter) {
        sol.report.outer_iterations = iter;
        throw ConvergenceError(iter, std::sqrt(rr), "Schur CG did not reach tolerance");
      }
      const auto Sp = apply_schur(sys, factor, p);
      double pSp = 0.0;
      for (int i = 0; i < nl; ++i) pSp += p[i] * Sp[i];
      if (!(pSp > 0.0))
        throw RankError(
            "Schur CG breakdown: coupling rows look rank deficient "
            "(overlapping or degenerate inclusions?)");
      const double alpha = rr / pSp;
      for (int i = 0; i < nl; ++i) {
        lambda[i] += alpha * p[i];
        r[i] -= alpha * Sp[i];
      }
      double rr_new = 0.0;
      for (double v : r) rr_new += v * v;
      const double beta = rr_new / rr;
      rr = rr_new;
      for (int i = 0; i < nl; ++i) p[i] = r[i] + beta * p[i];
      ++iter;
    }
    sol.report.outer_iterations = iter;
  }

  // u = A^-1 (f - B^T lambda)
  std::vector<double> rhs_u = sys.f;
  if (nl > 0) {
    std::vector<double> bt(sys.n_free(), 0.0);
    sys.coupling.add_transpose_apply(lambda, bt);
    for (int i = 0; i < sys.n_free(); ++i) rhs_u[i] -= bt[i];
  }
  const std::vector<double> u_free = factor.solve(rhs_u);

  sol.u = sys.expand(u_free);
  sol.lambda_flat = lambda;
  for (size_t j = 0; j + 1 < sys.multiplier_split.size(); ++j)
    sol.multipliers.emplace_back(lambda.begin() + sys.multiplier_split[j],
                                 lambda.begin() + sys.multiplier_split[j + 1]);

  const SolveReport verified = verify_residuals(sys, sol.u, lambda);
  sol.report.schur_residual = verified.schur_residual;
  sol.report.primal_residual = verified.primal_residual;
  return sol;
}

SolveReport verify_residuals(const SaddleSystem& sys, const Field& u_full,
                             const std::vector<double>& lambda_flat) {
  if (static_cast<int>(lambda_flat.size()) != sys.n_multipliers())
    throw ArgumentError("verify_residuals: multiplier length mismatch");
  const std::vector<double> u = sys.restrict_field(u_full);

  std::vector<double> res(sys.n_free(), 0.0);
  sys.A.multiply(u, res);
  sys.coupling.add_transpose_apply(lambda_flat, res);
  for (int i = 0; i < sys.n_free(); ++i) res[i] -= sys.f[i];

  std::vector<double> cres(sys.n_multipliers());
  for (int r = 0; r < sys.n_multipliers(); ++r)
    cres[r] = sys.coupling.apply_row(r, u) - sys.coupling.rhs[r];

  SolveReport rep;
  rep.primal_residual = norm2(res);
  rep.schur_residual = norm2(cres);
  return rep;
}

}  // namespace rlm
