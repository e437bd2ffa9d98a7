#include "odg/dg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace odg {

double eval(const Mesh& mesh, const DgFunction& f, index_t t, const std::array<double, 3>& bary) {
  double s = bary[0] + bary[1] + bary[2];
  if (bary[0] < -1e-12 || bary[1] < -1e-12 || bary[2] < -1e-12 || std::abs(s - 1.0) > 1e-10)
    throw std::invalid_argument("invalid barycentric point");
  (void)mesh;
  return bary[0] * f.at(t, 0) + bary[1] * f.at(t, 1) + bary[2] * f.at(t, 2);
}

Vec2 gradient(const Mesh& mesh, const DgFunction& f, index_t t) {
  const Triangle& tri = mesh.triangles[t];
  const Vertex& p0 = mesh.vertices[tri.v[0]];
  const Vertex& p1 = mesh.vertices[tri.v[1]];
  const Vertex& p2 = mesh.vertices[tri.v[2]];
  double inv = 1.0 / (2.0 * mesh.area[t]);
  // grad of the barycentric basis: rotated opposite-edge vectors
  Vec2 g;
  g.x = (f.at(t, 0) * (p1.y - p2.y) + f.at(t, 1) * (p2.y - p0.y) + f.at(t, 2) * (p0.y - p1.y)) * inv;
  g.y = (f.at(t, 0) * (p2.x - p1.x) + f.at(t, 1) * (p0.x - p2.x) + f.at(t, 2) * (p1.x - p0.x)) * inv;
  return g;
}

double edge_trace(const Mesh& mesh, const DgFunction& f, index_t e, index_t t, double s) {
  const Edge& ed = mesh.edges[e];
  int la = mesh.local_vertex(t, ed.v[0]);
  int lb = mesh.local_vertex(t, ed.v[1]);
  return (1.0 - s) * f.at(t, la) + s * f.at(t, lb);
}

double jump_scalar(const Mesh& mesh, const DgFunction& f, index_t e, double s) {
  const Edge& ed = mesh.edges[e];
  double plus = edge_trace(mesh, f, e, ed.elems[0], s);
  if (ed.boundary()) return plus;
  return plus - edge_trace(mesh, f, e, ed.elems[1], s);
}

double mean_scalar(const Mesh& mesh, const DgFunction& f, index_t e, double s) {
  const Edge& ed = mesh.edges[e];
  double plus = edge_trace(mesh, f, e, ed.elems[0], s);
  if (ed.boundary()) return plus;
  return 0.5 * (plus + edge_trace(mesh, f, e, ed.elems[1], s));
}

double jump_normal_gradient(const Mesh& mesh, const DgFunction& f, index_t e) {
  const Edge& ed = mesh.edges[e];
  if (ed.boundary()) throw std::invalid_argument("gradient jump on a boundary edge");
  Vec2 gp = gradient(mesh, f, ed.elems[0]);
  Vec2 gm = gradient(mesh, f, ed.elems[1]);
  return (gp.x - gm.x) * ed.nx + (gp.y - gm.y) * ed.ny;
}

DgFunction interpolate_nodal(const Mesh& mesh, const ScalarField& g) {
  DgFunction f(mesh);
  for (index_t t = 0; t < mesh.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      const Vertex& p = mesh.vertices[mesh.triangles[t].v[k]];
      f.at(t, k) = g(p.x, p.y);
    }
  return f;
}

ConformingFunction averaging(const Mesh& mesh, const DgFunction& f) {
  ConformingFunction c;
  c.values.assign(mesh.num_vertices(), 0.0);
  for (index_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.vertices[v].on_boundary) continue;
    double m = std::numeric_limits<double>::max();
    for (index_t t : mesh.vertex_patch[v]) m = std::min(m, f.at(t, mesh.local_vertex(t, v)));
    c.values[v] = m;
  }
  return c;
}

DgFunction to_dg(const Mesh& mesh, const ConformingFunction& f) {
  DgFunction d(mesh);
  for (index_t t = 0; t < mesh.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) d.at(t, k) = f.values[mesh.triangles[t].v[k]];
  return d;
}

}  // namespace odg
