#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "odg/dg.hpp"
#include "odg/mesh.hpp"

namespace odg {

/// Compressed sparse rows with sorted column indices.
struct CsrMatrix {
  index_t n = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<index_t> cols;
  std::vector<double> vals;

  std::vector<double> multiply(const std::vector<double>& x) const;
  double quadratic_form(const std::vector<double>& x) const;           // x' A x
  double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;  // x' A y
  double max_asymmetry() const;  // max |A - A'| over entries
};

/// Symmetric quadrature rule on the reference triangle; weights sum to one so
/// that integrals scale with |T|.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // barycentric
  std::vector<double> weights;
  int degree = 0;
};

/// Degree-4, 6-point rule used for load vectors.
const QuadratureRule& triangle_rule_degree4();

struct SparseSystem {
  CsrMatrix A;
  std::vector<double> F;
  std::vector<double> M_L;  // lumped diagonal of the vertex-quadrature inner product
  double gamma = 25.0;
};

/// SIPG stiffness matrix: element gradients plus consistency and gamma/h_e
/// penalty terms over all edges (boundary edges enforce the Dirichlet
/// condition weakly). Edge integrals of P1 traces are evaluated in closed
/// form. Parallel; bitwise identical to assemble_stiffness_serial.
CsrMatrix assemble_stiffness(const Mesh& mesh, double gamma);
CsrMatrix assemble_stiffness_serial(const Mesh& mesh, double gamma);

/// Load vector F_i = integral of f against the nodal basis (degree-4 rule).
std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& f);
std::vector<double> assemble_load_serial(const Mesh& mesh, const ScalarField& f);

/// Right-hand-side contribution of inhomogeneous Dirichlet data g imposed
/// weakly on boundary edges. Zero data gives a zero vector.
std::vector<double> boundary_load(const Mesh& mesh, const ScalarField& g, double gamma);

/// Diagonal with entry |T|/3 for each of the three DOFs of T.
std::vector<double> lumped_mass_diag(const Mesh& mesh);

SparseSystem assemble_system(const Mesh& mesh, const ScalarField& f, const ScalarField& boundary_g,
                             double gamma);

void write_matrix_coordinate(const CsrMatrix& A, const std::string& path);

}  // namespace odg
