#pragma once

#include <functional>
#include <string>
#include <vector>

#include "odg/adapt.hpp"

namespace odg {

/// Least-squares line through (log dofs, log quantity).
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Fit over the last k records; throws when fewer than k records exist or the
/// quantity is not positive on them.
RateFit fit_rate(const std::vector<RunRecord>& records,
                 const std::function<double(const RunRecord&)>& quantity, int k);

/// One row per level, 17 significant digits, locale-independent.
/// Columns: level,dofs,h_min,eta1..eta6,eta_total,linf_error,efficiency_index,pdas_iters
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);
std::string records_to_csv(const std::vector<RunRecord>& records);

/// Mesh rendering with the discrete contact set filled yellow and the free
/// boundary elements orange.
void emit_svg(const Mesh& mesh, const std::vector<ElementClass>& classes, const std::string& path);

/// Mesh together with the nodal values of u_h and sigma_h.
void write_solution_json(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                         const std::string& path);

}  // namespace odg
