#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numeric>
#include <random>
#include <set>

#include "odg/mesh.hpp"

using namespace odg;

namespace {

Mesh two_triangle_square() {
  return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
}

int count_boundary_edges(const Mesh& m) {
  int n = 0;
  for (const Edge& e : m.edges) n += e.boundary();
  return n;
}

void check_conforming(const Mesh& m) {
  // every edge appears in one or two triangles and triangle_edges are consistent
  std::vector<int> uses(m.num_edges(), 0);
  for (index_t t = 0; t < m.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) ++uses[m.triangle_edges[t][k]];
  for (index_t e = 0; e < m.num_edges(); ++e) {
    CHECK(uses[e] == (m.edges[e].boundary() ? 1 : 2));
  }
}

}  // namespace

TEST_CASE("two-triangle unit square connectivity and geometry") {
  Mesh m = two_triangle_square();
  CHECK(m.num_edges() == 5);
  int interior = 0, boundary_vertices = 0;
  for (const Edge& e : m.edges) interior += !e.boundary();
  for (const Vertex& v : m.vertices) boundary_vertices += v.on_boundary;
  CHECK(interior == 1);
  CHECK(boundary_vertices == 4);
  CHECK(m.area[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.area[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.diam[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(m.diam[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // longest-edge start: the shared diagonal
  for (index_t t = 0; t < 2; ++t) {
    index_t e = m.triangle_edges[t][m.triangles[t].refinement_edge];
    CHECK(m.edges[e].v == std::array<index_t, 2>{0, 2});
  }
}

TEST_CASE("orientation is normalized to counterclockwise") {
  Mesh m = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 2, 1}}});
  CHECK(m.area[0] > 0.0);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_WITH_AS(build_mesh({{0, 0}, {1, 0}, {1, 1}}, {{{0, 1, 1}}}),
                       doctest::Contains("area"), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{1, 0, 2}}}),
                  std::invalid_argument);
  // hanging vertex at the midpoint of the diagonal
  CHECK_THROWS_WITH_AS(
      build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}},
                 {{{0, 2, 3}}, {{0, 1, 4}}, {{1, 2, 4}}}),
      doctest::Contains("non-conforming"), std::invalid_argument);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}}, {{{0, 1, 5}}}), std::invalid_argument);
}

TEST_CASE("benchmark domains") {
  Mesh m1 = initial_domain(1);
  CHECK(m1.num_triangles() == 64);
  CHECK(m1.total_area() == doctest::Approx(9.0).epsilon(1e-14));

  Mesh m2 = initial_domain(2);
  CHECK(m2.num_triangles() == 48);
  CHECK(m2.total_area() == doctest::Approx(12.0).epsilon(1e-14));
  // the slit corner is a boundary vertex
  bool found_origin = false;
  for (const Vertex& v : m2.vertices)
    if (v.x == 0.0 && v.y == 0.0) {
      found_origin = true;
      CHECK(v.on_boundary);
    }
  CHECK(found_origin);

  Mesh m3 = initial_domain(3);
  CHECK(m3.num_triangles() == 128);
  CHECK(m3.total_area() == doctest::Approx(8.0).epsilon(1e-14));

  CHECK_THROWS_AS(initial_domain(4), std::invalid_argument);
}

TEST_CASE("bisect both triangles of the square") {
  Mesh m = two_triangle_square();
  Refinement r = bisect(m, {0, 1});
  CHECK(r.mesh.num_triangles() == 4);
  CHECK(r.mesh.num_vertices() == 5);  // one midpoint on the shared diagonal
  CHECK(r.mesh.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  check_conforming(r.mesh);
  CHECK(r.children_range[0][1] - r.children_range[0][0] == 2);
  CHECK(r.children_range[1][1] - r.children_range[1][0] == 2);
}

TEST_CASE("closure forces the neighbor across the shared refinement edge") {
  Mesh m = two_triangle_square();
  Refinement r = bisect(m, {0});
  CHECK(r.mesh.num_triangles() == 4);
  check_conforming(r.mesh);
}

TEST_CASE("empty marked set returns an identical copy") {
  Mesh m = initial_domain(1);
  Refinement r = bisect(m, {});
  REQUIRE(r.mesh.num_triangles() == m.num_triangles());
  REQUIRE(r.mesh.num_vertices() == m.num_vertices());
  for (index_t t = 0; t < m.num_triangles(); ++t) {
    CHECK(r.mesh.triangles[t].v == m.triangles[t].v);
    CHECK(r.mesh.triangles[t].refinement_edge == m.triangles[t].refinement_edge);
    CHECK(r.children_range[t] == std::array<index_t, 2>{t, t + 1});
  }
}

TEST_CASE("closure with an incompatible neighbor bisects it twice") {
  // neighbor's refinement edge is not the shared edge, so the neighbor is cut
  // into three to restore conformity
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}}, {1, 0});
  Refinement r = bisect(m, {0});
  CHECK(r.mesh.num_triangles() == 5);
  check_conforming(r.mesh);
  CHECK(r.children_range[1][1] - r.children_range[1][0] == 3);
}

TEST_CASE("h_min on hand meshes") {
  CHECK(h_min(two_triangle_square()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(h_min(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  Mesh m = two_triangle_square();
  Refinement r = bisect(m, {0, 1});
  CHECK(h_min(r.mesh) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("marked elements are always refined and untouched elements survive") {
  Mesh m = initial_domain(1);
  std::mt19937 rng(7);
  for (int round = 0; round < 4; ++round) {
    std::vector<index_t> marked;
    for (index_t t = 0; t < m.num_triangles(); ++t)
      if (rng() % 3 == 0) marked.push_back(t);
    std::set<index_t> marked_set(marked.begin(), marked.end());
    Refinement r = bisect(m, marked);
    for (index_t t = 0; t < m.num_triangles(); ++t) {
      index_t nchildren = r.children_range[t][1] - r.children_range[t][0];
      if (marked_set.count(t)) {
        CHECK(nchildren >= 2);
      } else if (nchildren == 1) {
        CHECK(r.mesh.triangles[r.children_range[t][0]].v == m.triangles[t].v);
        CHECK(r.mesh.triangles[r.children_range[t][0]].refinement_edge ==
              m.triangles[t].refinement_edge);
      }
    }
    m = r.mesh;
  }
}

TEST_CASE("area conservation and shape regularity over ten refinement rounds") {
  Mesh m = initial_domain(1);
  const double area0 = m.total_area();
  const double angle0 = min_angle(m);
  std::mt19937 rng(42);
  double floor_after_stabilizing = 0.0;
  for (int round = 0; round < 10; ++round) {
    std::vector<index_t> marked;
    for (index_t t = 0; t < m.num_triangles(); ++t)
      if (rng() % 4 == 0) marked.push_back(t);
    if (marked.empty()) marked.push_back(0);
    m = bisect(m, marked).mesh;
    check_conforming(m);
    CHECK(m.total_area() == doctest::Approx(area0).epsilon(1e-12));
    double a = min_angle(m);
    if (round == 2) floor_after_stabilizing = a;
    if (round > 2) CHECK(a >= floor_after_stabilizing - 1e-12);
  }
  // the criss-cross start is right-isosceles: bisection preserves the family
  CHECK(min_angle(m) == doctest::Approx(angle0).epsilon(1e-12));
}

TEST_CASE("json round-trip is bit-exact") {
  Mesh m = initial_domain(2);
  m = bisect(m, {0, 5, 11}).mesh;
  std::string text = mesh_to_json(m);
  Mesh back = mesh_from_json(text);
  REQUIRE(back.num_vertices() == m.num_vertices());
  REQUIRE(back.num_triangles() == m.num_triangles());
  for (index_t v = 0; v < m.num_vertices(); ++v) {
    CHECK(back.vertices[v].x == m.vertices[v].x);
    CHECK(back.vertices[v].y == m.vertices[v].y);
  }
  for (index_t t = 0; t < m.num_triangles(); ++t) {
    CHECK(back.triangles[t].v == m.triangles[t].v);
    CHECK(back.triangles[t].refinement_edge == m.triangles[t].refinement_edge);
  }
  CHECK(mesh_to_json(back) == text);
}
