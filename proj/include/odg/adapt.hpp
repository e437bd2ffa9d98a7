#pragma once

#include <functional>
#include <string>
#include <vector>

#include "odg/estimator.hpp"
#include "odg/examples.hpp"
#include "odg/solver.hpp"

namespace odg {

struct AdaptConfig {
  int example_id = 1;
  double load_variant = 0.0;  // example 3 only: f = 0 or -15
  double theta = 0.3;         // maximum-marking parameter
  double gamma = 25.0;        // interior penalty
  int max_levels = 30;
  index_t max_dofs = 200000;
  double pdas_c = 1.0;
  int pdas_max_iter = 50;
};

struct RunRecord {
  int level = 0;
  index_t dofs = 0;
  double hmin = 0.0;
  double eta1 = 0, eta2 = 0, eta3 = 0, eta4 = 0, eta5 = 0, eta6 = 0;
  double eta_total = 0.0;
  double linf_error = 0.0;        // NaN when no exact solution is known
  double efficiency_index = 0.0;  // eta_total / linf_error, NaN likewise
  int pdas_iterations = 0;
};

/// Elements whose indicator reaches theta times the maximum. All-zero
/// indicators return the empty set (the loop is converged).
std::vector<index_t> mark_max(const std::vector<double>& indicators, double theta);

/// Everything a caller may want to dump per level.
struct LevelState {
  const Mesh& mesh;
  const SparseSystem& system;
  const DgFunction& u;
  const DgFunction& sigma;
  const EstimatorBreakdown& estimator;
  const RunRecord& record;
};
using LevelCallback = std::function<void(const LevelState&)>;

struct AdaptResult {
  std::vector<RunRecord> records;
  bool solver_ok = true;
  std::string message;
};

/// SOLVE -> ESTIMATE -> MARK -> REFINE with maximum marking, stopping at the
/// level cap, the DOF cap, or an empty marked set. Solver failures abort the
/// loop and return the partial history.
AdaptResult adaptive_loop(const AdaptConfig& config, const LevelCallback& callback = {});

}  // namespace odg
