#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace odg {

using index_t = std::int32_t;

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  bool on_boundary = false;  // derived: lies on an edge with a single adjacent triangle
};

/// Triangle with counterclockwise vertex order. Local edge k is the edge
/// opposite local vertex k, i.e. (v[(k+1)%3], v[(k+2)%3]).
struct Triangle {
  std::array<index_t, 3> v{};
  int refinement_edge = 0;  // local edge index in {0,1,2} used by bisection
};

struct Edge {
  std::array<index_t, 2> v{};      // endpoint vertex ids, v[0] < v[1]
  std::array<index_t, 2> elems{};  // adjacent triangles, ascending id; elems[1] = -1 on boundary
  double nx = 0.0, ny = 0.0;       // unit normal from elems[0] toward elems[1]; outward on boundary
  double length = 0.0;

  bool boundary() const { return elems[1] < 0; }
};

/// Conforming 2D triangulation with full edge and vertex-patch connectivity.
/// Immutable after construction; refinement returns a new mesh.
class Mesh {
 public:
  std::vector<Vertex> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;

  // edge id opposite each local vertex of each triangle
  std::vector<std::array<index_t, 3>> triangle_edges;
  std::vector<double> area;  // |T|
  std::vector<double> diam;  // h_T (longest edge)
  std::vector<std::vector<index_t>> vertex_patch;  // triangles sharing each vertex

  index_t num_vertices() const { return static_cast<index_t>(vertices.size()); }
  index_t num_triangles() const { return static_cast<index_t>(triangles.size()); }
  index_t num_edges() const { return static_cast<index_t>(edges.size()); }

  /// Local index (0..2) of global vertex v within triangle t; throws if absent.
  int local_vertex(index_t t, index_t v) const;

  double total_area() const;
};

/// Build a mesh from raw vertices and triangles. Orientation is normalized to
/// counterclockwise, edges and patches are derived, and the input is validated
/// (conformity, positive areas, no duplicate triangles). When
/// `refinement_edges` is empty each triangle gets its longest edge, ties
/// broken by the smallest opposite-vertex id.
Mesh build_mesh(std::vector<Vertex> vertices, std::vector<std::array<index_t, 3>> tris,
                std::vector<int> refinement_edges = {});

/// Coarse criss-cross triangulation of the benchmark domain `example_id`:
///   1: (-1.5,1.5)^2, cell 0.75
///   2: (-2,2)^2 without [0,2)x(-2,0], cell 1.0
///   3: (-2,2)x(-1,1), cell 0.5
Mesh initial_domain(int example_id);

struct Refinement {
  Mesh mesh;
  std::vector<index_t> parent;                         // per new triangle
  std::vector<std::array<index_t, 2>> children_range;  // per old triangle: [begin,end) of new ids
};

/// Newest-vertex bisection of the marked triangles plus conforming closure.
/// An empty marked set returns an identical copy.
Refinement bisect(const Mesh& mesh, const std::vector<index_t>& marked);

double h_min(const Mesh& mesh);

double min_angle(const Mesh& mesh);  // radians

std::string mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

}  // namespace odg
