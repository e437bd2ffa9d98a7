#include "odg/adapt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace odg {

std::vector<index_t> mark_max(const std::vector<double>& indicators, double theta) {
  if (indicators.empty()) throw std::invalid_argument("no indicators");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must be in (0,1]");
  double worst = 0.0;
  for (double v : indicators) {
    if (v < 0.0) throw std::invalid_argument("negative indicator");
    worst = std::max(worst, v);
  }
  std::vector<index_t> marked;
  if (worst == 0.0) return marked;
  double threshold = theta * worst;
  for (index_t t = 0; t < static_cast<index_t>(indicators.size()); ++t)
    if (indicators[t] >= threshold) marked.push_back(t);
  return marked;
}

namespace {

// Nested-iteration warm start: a new DOF starts active when the previous
// level's solution touches the obstacle at its vertex. New vertices are
// evaluated through the parent element's affine interpolant.
std::vector<index_t> transfer_active_set(const Mesh& old_mesh, const DgFunction& u_old,
                                         const Refinement& ref, const ScalarField& chi) {
  const Mesh& nm = ref.mesh;
  std::vector<index_t> warm;
  for (index_t t = 0; t < nm.num_triangles(); ++t) {
    index_t p = ref.parent[t];
    const Triangle& parent = old_mesh.triangles[p];
    const Vertex& a = old_mesh.vertices[parent.v[0]];
    const Vertex& b = old_mesh.vertices[parent.v[1]];
    const Vertex& c = old_mesh.vertices[parent.v[2]];
    double inv = 1.0 / (2.0 * old_mesh.area[p]);
    for (int k = 0; k < 3; ++k) {
      const Vertex& q = nm.vertices[nm.triangles[t].v[k]];
      double lb = ((q.x - a.x) * (c.y - a.y) - (q.y - a.y) * (c.x - a.x)) * inv;
      double lc = ((b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x)) * inv;
      double uq = (1.0 - lb - lc) * u_old.at(p, 0) + lb * u_old.at(p, 1) + lc * u_old.at(p, 2);
      double cq = chi(q.x, q.y);
      if (uq - cq <= 1e-12 * std::max(1.0, std::abs(cq))) warm.push_back(3 * t + k);
    }
  }
  return warm;
}

}  // namespace

AdaptResult adaptive_loop(const AdaptConfig& config, const LevelCallback& callback) {
  const ExampleSpec spec = example_spec(config.example_id, config.load_variant);
  AdaptResult result;

  Mesh mesh = spec.domain();
  std::vector<index_t> warm_active;
  bool have_warm = false;
  for (int level = 0; level < config.max_levels; ++level) {
    SparseSystem sys = assemble_system(mesh, spec.f, spec.boundary_g, config.gamma);
    DgFunction chi_h = interpolate_nodal(mesh, spec.chi);

    ObstacleSolution sol;
    SolveReport rep;
    try {
      std::tie(sol, rep) = solve_obstacle(sys, chi_h, config.pdas_c, config.pdas_max_iter,
                                          have_warm ? &warm_active : nullptr);
    } catch (const std::exception& e) {
      result.solver_ok = false;
      result.message = e.what();
      return result;
    }
    if (!rep.converged) {
      result.solver_ok = false;
      result.message = "level " + std::to_string(level) + ": " + rep.message;
      return result;
    }

    EstimatorBreakdown est =
        estimate(mesh, sol.u, sol.sigma, spec.chi, chi_h, spec.f, spec.boundary_g);

    RunRecord rec;
    rec.level = level;
    rec.dofs = 3 * mesh.num_triangles();
    rec.hmin = h_min(mesh);
    rec.eta1 = est.eta1;
    rec.eta2 = est.eta2;
    rec.eta3 = est.eta3;
    rec.eta4 = est.eta4;
    rec.eta5 = est.eta5;
    rec.eta6 = est.eta6;
    rec.eta_total = est.eta_total;
    rec.pdas_iterations = rep.pdas_iterations;
    if (spec.exact_u) {
      rec.linf_error = linf_error(mesh, sol.u, spec.exact_u);
      rec.efficiency_index = rec.eta_total / rec.linf_error;
    } else {
      rec.linf_error = std::numeric_limits<double>::quiet_NaN();
      rec.efficiency_index = std::numeric_limits<double>::quiet_NaN();
    }
    result.records.push_back(rec);

    if (callback) callback(LevelState{mesh, sys, sol.u, sol.sigma, est, rec});

    if (level + 1 >= config.max_levels) break;
    if (rec.dofs >= config.max_dofs) break;
    std::vector<index_t> marked = mark_max(est.indicator, config.theta);
    if (marked.empty()) break;
    Refinement ref = bisect(mesh, marked);
    warm_active = transfer_active_set(mesh, sol.u, ref, spec.chi);
    have_warm = true;
    mesh = std::move(ref.mesh);
  }
  return result;
}

}  // namespace odg
