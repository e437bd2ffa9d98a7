#pragma once

#include <string>
#include <utility>
#include <vector>

#include "odg/assembly.hpp"
#include "odg/dg.hpp"

namespace odg {

struct ObstacleSolution {
  DgFunction u;
  DgFunction sigma;
  std::vector<index_t> active;  // DOFs where u = chi was enforced
};

struct SolveReport {
  int pdas_iterations = 0;
  std::vector<index_t> active_set_sizes;   // per iteration
  std::vector<double> linear_residuals;    // relative residual per linear solve
  bool converged = false;
  std::string message;
};

/// Direct symmetric factorization with an explicit residual contract:
/// ||Ax-b||_2 <= tol * ||b||_2 or an exception. A must be symmetric positive
/// definite.
std::vector<double> solve_linear(const CsrMatrix& A, const std::vector<double>& rhs,
                                 double tol = 1e-12);

/// Primal-dual active set iteration for the complementarity system
///   A u + M_L sigma = F,  u >= chi,  sigma <= 0,  sigma_i (u_i - chi_i) = 0.
/// With lambda = -sigma the active set is {i : lambda_i + c (chi_i - u_i) > 0};
/// active DOFs are pinned to chi, lambda vanishes elsewhere, and the iteration
/// stops when the active set repeats. Starts from the unconstrained solution
/// clipped to chi, or from `initial_active` when given (nested iteration: the
/// cold start releases an oversized active set only one free-boundary layer
/// per iteration, which does not terminate acceptably on fine meshes).
std::pair<ObstacleSolution, SolveReport> solve_obstacle(const SparseSystem& sys,
                                                        const DgFunction& chi, double c = 1.0,
                                                        int max_iter = 50,
                                                        const std::vector<index_t>* initial_active = nullptr);

/// Multiplier recovered from the residual: sigma_i = (F - A u)_i / (M_L)_ii.
DgFunction compute_sigma(const SparseSystem& sys, const DgFunction& u);

}  // namespace odg
