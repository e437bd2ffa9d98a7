#pragma once

#include <array>
#include <string>
#include <vector>

#include "odg/dg.hpp"
#include "odg/mesh.hpp"

namespace odg {

enum class ElementClass { Contact, NonContact, FreeBoundary };

/// Sampling points used for the sup-norm approximations: the order-4
/// barycentric lattice (15 points per triangle, containing the vertices) and
/// 5 equispaced points per edge.
struct SamplingLattice {
  static const std::vector<std::array<double, 3>>& triangle_points();
  static const std::array<double, 5>& edge_points();
};

struct EstimatorBreakdown {
  std::vector<ElementClass> classes;  // per element

  // per-element terms
  std::vector<double> eta1_T;  // h_T^2 |f - sigma|, sup over the lattice
  std::vector<double> eta4_T;  // h_T^2 |grad sigma| |T|^(1/2) on contact/free-boundary elements
  std::vector<double> osc_T;   // h_T^2 best-constant sup deviation of f
  std::vector<double> eta5_T;  // (chi - u_h)^+ against the exact obstacle
  std::vector<double> eta6_T;  // (u_h - chi)^+ restricted to {sigma_h < 0}

  // per-edge terms
  std::vector<double> eta2_e;  // h_e |gradient jump|, interior edges
  std::vector<double> eta3_e;  // |solution jump| (trace, or trace minus data, on the boundary)

  // global maxima and the combined estimator
  double eta1 = 0, eta2 = 0, eta3 = 0, eta4 = 0, eta5 = 0, eta6 = 0;
  double log_factor = 0;  // |ln h_min|
  double eta_total = 0;   // log_factor*(eta1+eta2+eta3+eta4) + eta5 + eta6

  std::vector<double> indicator;  // per-element marking indicator
};

double contact_tolerance(const DgFunction& chi_h);

/// Vertex-wise partition: all nodal gaps within eps_c -> Contact, all strictly
/// above -> NonContact, mixed -> FreeBoundary.
std::vector<ElementClass> classify_elements(const Mesh& mesh, const DgFunction& u,
                                            const DgFunction& chi_h, double eps_c);

struct ElementTerms {
  double eta1 = 0, eta4 = 0, osc = 0;
};
ElementTerms eta_element_terms(const Mesh& mesh, index_t t, const DgFunction& sigma,
                               const ScalarField& f, ElementClass cls);

struct EdgeTerms {
  double eta2 = 0, eta3 = 0;
};
EdgeTerms eta_edge_terms(const Mesh& mesh, index_t e, const DgFunction& u,
                         const ScalarField& boundary_g = {});

struct ObstacleTerms {
  double eta5 = 0, eta6 = 0;
};
ObstacleTerms eta_obstacle_terms(const Mesh& mesh, index_t t, const DgFunction& u,
                                 const ScalarField& chi_exact, const DgFunction& sigma);

/// Fills the global maxima, the log factor, eta_total, and the per-element
/// indicators (edge terms localized to each element's boundary).
void total_eta(const Mesh& mesh, double h_min, EstimatorBreakdown& breakdown);

/// Full pointwise estimator for a solved level. Parallel over elements and
/// edges; estimate_serial is the reference implementation.
EstimatorBreakdown estimate(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                            const ScalarField& chi_exact, const DgFunction& chi_h,
                            const ScalarField& f, const ScalarField& boundary_g = {});
EstimatorBreakdown estimate_serial(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                                   const ScalarField& chi_exact, const DgFunction& chi_h,
                                   const ScalarField& f, const ScalarField& boundary_g = {});

void write_estimator_csv(const Mesh& mesh, const EstimatorBreakdown& b, const std::string& path);

}  // namespace odg
