#pragma once

#include <functional>

#include "odg/dg.hpp"
#include "odg/mesh.hpp"

namespace odg {

/// One benchmark configuration: domain, load, obstacle, Dirichlet data and,
/// when available, the closed-form solution.
struct ExampleSpec {
  int id = 0;
  std::function<Mesh()> domain;
  ScalarField f;
  ScalarField chi;
  ScalarField exact_u;     // empty when the solution is not known
  ScalarField boundary_g;  // empty means homogeneous data
};

/// Benchmarks:
///   1: square (-1.5,1.5)^2, f = -2, chi = 0; radially symmetric solution with
///      contact on the unit disk. The solution is nonzero on the boundary, so
///      its trace is imposed weakly as Dirichlet data.
///   2: L-shaped domain, chi = 0; solution r^(2/3) sin(2 theta/3) cut off
///      radially, with the matching piecewise load.
///   3: rectangle (-2,2)x(-1,1) with a two-hill obstacle, f = load_variant
///      (0 or -15); no closed-form solution.
ExampleSpec example_spec(int id, double load_variant = 0.0);

/// Sup-norm distance between the exact solution and the DG iterate, sampled
/// on the order-4 lattice of every element.
double linf_error(const Mesh& mesh, const DgFunction& u, const ScalarField& exact);
double linf_error_serial(const Mesh& mesh, const DgFunction& u, const ScalarField& exact);

/// Largest obstacle value sampled along the boundary; admissible data needs
/// chi <= 0 there.
double boundary_chi_max(const Mesh& mesh, const ScalarField& chi);

}  // namespace odg
