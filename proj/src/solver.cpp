#include "odg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace odg {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, index_t>;

// CSR of a symmetric matrix doubles as CSC, so the arrays map directly.
SpMat to_eigen(const CsrMatrix& A) {
  std::vector<index_t> outer(A.row_ptr.begin(), A.row_ptr.end());
  SpMat m = Eigen::Map<const SpMat>(A.n, A.n, static_cast<index_t>(A.vals.size()), outer.data(),
                                    A.cols.data(), A.vals.data());
  return m;
}

double rel_residual(const CsrMatrix& A, const std::vector<double>& x, const std::vector<double>& b) {
  std::vector<double> Ax = A.multiply(x);
  double rr = 0.0, bb = 0.0;
  for (index_t i = 0; i < A.n; ++i) {
    double r = Ax[i] - b[i];
    rr += r * r;
    bb += b[i] * b[i];
  }
  return bb > 0.0 ? std::sqrt(rr / bb) : std::sqrt(rr);
}

}  // namespace

std::vector<double> solve_linear(const CsrMatrix& A, const std::vector<double>& rhs, double tol) {
  if (static_cast<index_t>(rhs.size()) != A.n) throw std::invalid_argument("rhs size mismatch");
  SpMat m = to_eigen(A);
  Eigen::SimplicialLDLT<SpMat> ldlt(m);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
    throw std::runtime_error("factorization failed: matrix not SPD");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  Eigen::VectorXd x = ldlt.solve(b);
  std::vector<double> out(x.data(), x.data() + x.size());
  double res = rel_residual(A, out, rhs);
  if (!(res <= tol))
    throw std::runtime_error("linear solve residual " + std::to_string(res) + " above tolerance");
  return out;
}

std::pair<ObstacleSolution, SolveReport> solve_obstacle(const SparseSystem& sys,
                                                        const DgFunction& chi, double c,
                                                        int max_iter,
                                                        const std::vector<index_t>* initial_active) {
  const CsrMatrix& A = sys.A;
  const index_t n = A.n;
  if (static_cast<index_t>(chi.values.size()) != n) throw std::invalid_argument("chi size mismatch");
  for (double v : chi.values)
    if (!std::isfinite(v)) throw std::invalid_argument("chi has non-finite nodal values");

  SolveReport report;
  ObstacleSolution sol;
  sol.u.values.assign(n, 0.0);
  sol.sigma.values.assign(n, 0.0);

  SpMat base = to_eigen(A);
  SpMat work = base;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  ldlt.analyzePattern(base);

  const std::vector<double>& chiv = chi.values;
  std::vector<char> active(n, 0);
  std::vector<double> u(n, 0.0), lambda(n, 0.0), rhs(n, 0.0);

  // zero out rows/columns of pinned DOFs, unit diagonal; the pattern is
  // unchanged so the symbolic factorization is reused
  auto apply_active = [&]() {
    work = base;
    for (index_t col = 0; col < n; ++col) {
      for (SpMat::InnerIterator it(work, col); it; ++it) {
        index_t row = it.row();
        if (active[row] || active[col]) it.valueRef() = (row == col) ? 1.0 : 0.0;
      }
    }
  };
  auto constrained_rhs = [&]() {
    for (index_t i = 0; i < n; ++i) rhs[i] = active[i] ? chiv[i] : sys.F[i];
    for (index_t r = 0; r < n; ++r) {
      if (active[r]) continue;
      for (std::int64_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
        if (active[A.cols[k]]) rhs[r] -= A.vals[k] * chiv[A.cols[k]];
    }
  };
  auto factor_solve = [&]() {
    ldlt.factorize(work);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("singular reduced system in active set solve");
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
    Eigen::VectorXd x = ldlt.solve(b);
    std::copy(x.data(), x.data() + n, u.begin());
    for (index_t i = 0; i < n; ++i)
      if (active[i]) u[i] = chiv[i];
  };

  bool factorization_current = false;
  if (initial_active != nullptr) {
    for (index_t i : *initial_active) {
      if (i < 0 || i >= n) throw std::invalid_argument("initial active DOF out of range");
      active[i] = 1;
    }
  } else {
    // unconstrained solution clipped to the obstacle
    apply_active();
    for (index_t i = 0; i < n; ++i) rhs[i] = sys.F[i];
    factor_solve();
    for (index_t i = 0; i < n; ++i) {
      if (u[i] < chiv[i]) {
        active[i] = 1;
        u[i] = chiv[i];
      }
    }
    factorization_current = std::none_of(active.begin(), active.end(), [](char a) { return a != 0; });
  }

  std::vector<char> next(n, 0);
  for (int iter = 1; iter <= max_iter; ++iter) {
    report.pdas_iterations = iter;
    report.active_set_sizes.push_back(
        static_cast<index_t>(std::count(active.begin(), active.end(), char(1))));

    if (!factorization_current) {
      apply_active();
      constrained_rhs();
      factor_solve();
    }
    factorization_current = false;

    std::vector<double> Au = A.multiply(u);
    double res_free = 0.0, nf = 0.0;
    for (index_t i = 0; i < n; ++i) {
      lambda[i] = active[i] ? (Au[i] - sys.F[i]) / sys.M_L[i] : 0.0;
      if (!active[i]) {
        double r = Au[i] - sys.F[i];
        res_free += r * r;
      }
      nf += sys.F[i] * sys.F[i];
    }
    report.linear_residuals.push_back(nf > 0.0 ? std::sqrt(res_free / nf) : std::sqrt(res_free));

    bool changed = false;
    for (index_t i = 0; i < n; ++i) {
      next[i] = (lambda[i] + c * (chiv[i] - u[i]) > 0.0) ? 1 : 0;
      changed = changed || (next[i] != active[i]);
    }
    if (!changed) {
      report.converged = true;
      break;
    }
    active.swap(next);
  }
  if (!report.converged) report.message = "active set did not stabilize";

  sol.u.values = u;
  for (index_t i = 0; i < n; ++i) {
    sol.sigma.values[i] = -lambda[i];
    if (active[i]) sol.active.push_back(i);
  }
  return {std::move(sol), std::move(report)};
}

DgFunction compute_sigma(const SparseSystem& sys, const DgFunction& u) {
  if (u.values.size() != sys.F.size()) throw std::invalid_argument("u size mismatch");
  std::vector<double> Au = sys.A.multiply(u.values);
  DgFunction s;
  s.values.resize(sys.F.size());
  for (std::size_t i = 0; i < sys.F.size(); ++i) s.values[i] = (sys.F[i] - Au[i]) / sys.M_L[i];
  return s;
}

}  // namespace odg
