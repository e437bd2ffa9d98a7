#pragma once

#include <array>
#include <functional>
#include <vector>

#include "odg/mesh.hpp"

namespace odg {

using ScalarField = std::function<double(double, double)>;

/// Element-local P1 function: 3 nodal values per triangle (element-major,
/// local-vertex-minor), interpreted as the affine interpolant on each element.
struct DgFunction {
  std::vector<double> values;

  DgFunction() = default;
  explicit DgFunction(const Mesh& mesh) : values(3 * static_cast<std::size_t>(mesh.num_triangles()), 0.0) {}

  double& at(index_t t, int local) { return values[3 * static_cast<std::size_t>(t) + local]; }
  double at(index_t t, int local) const { return values[3 * static_cast<std::size_t>(t) + local]; }
};

/// Continuous piecewise-linear function with zero boundary values, stored by
/// vertex.
struct ConformingFunction {
  std::vector<double> values;
};

struct Vec2 {
  double x = 0.0, y = 0.0;
};

/// Value of the affine interpolant at a barycentric point of element t.
double eval(const Mesh& mesh, const DgFunction& f, index_t t, const std::array<double, 3>& bary);

/// Constant per-element gradient.
Vec2 gradient(const Mesh& mesh, const DgFunction& f, index_t t);

/// Trace of f on edge e from the side of element t, at edge parameter s in
/// [0,1] running from the lower- to the higher-indexed endpoint vertex.
double edge_trace(const Mesh& mesh, const DgFunction& f, index_t e, index_t t, double s);

/// Interior edge: signed difference (value on elems[0]) - (value on elems[1])
/// at parameter s. Boundary edge: the trace itself.
double jump_scalar(const Mesh& mesh, const DgFunction& f, index_t e, double s);

double mean_scalar(const Mesh& mesh, const DgFunction& f, index_t e, double s);

/// (grad on elems[0] - grad on elems[1]) . n, constant along the edge.
/// Throws when called on a boundary edge.
double jump_normal_gradient(const Mesh& mesh, const DgFunction& f, index_t e);

/// Nodal interpolation: value g(p) at every element vertex. Continuous g
/// yields a continuous DgFunction.
DgFunction interpolate_nodal(const Mesh& mesh, const ScalarField& g);

/// Constraint-preserving averaging into the conforming subspace: at interior
/// vertices the minimum of the surrounding nodal values, zero on the boundary.
ConformingFunction averaging(const Mesh& mesh, const DgFunction& f);

DgFunction to_dg(const Mesh& mesh, const ConformingFunction& f);

}  // namespace odg
