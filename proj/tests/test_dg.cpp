#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "odg/dg.hpp"

using namespace odg;

namespace {

Mesh reference_triangle() { return build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}}); }

Mesh two_triangle_square() {
  return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
}

// two triangles sharing the segment x = 0
Mesh strip_mesh() {
  return build_mesh({{0, 0}, {0, 1}, {-1, 0}, {1, 0}}, {{{0, 1, 2}}, {{0, 3, 1}}});
}

index_t shared_edge(const Mesh& m) {
  for (index_t e = 0; e < m.num_edges(); ++e)
    if (!m.edges[e].boundary()) return e;
  REQUIRE(false);
  return -1;
}

}  // namespace

TEST_CASE("eval is the affine interpolant") {
  Mesh m = reference_triangle();
  DgFunction f(m);
  f.values = {1, 1, 1};
  CHECK(eval(m, f, 0, {0.2, 0.5, 0.3}) == doctest::Approx(1.0).epsilon(1e-15));
  f.values = {0, 1, 0};
  CHECK(eval(m, f, 0, {0, 1, 0}) == 1.0);
  f.values = {0, 1, 2};
  CHECK(eval(m, f, 0, {1.0 / 3, 1.0 / 3, 1.0 / 3}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(eval(m, f, 0, {0.5, 0.2, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(eval(m, f, 0, {-0.5, 1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("gradient reproduces affine fields") {
  Mesh m = reference_triangle();
  DgFunction f(m);
  f.values = {3, 3, 3};
  Vec2 g = gradient(m, f, 0);
  CHECK(g.x == 0.0);
  CHECK(g.y == 0.0);
  f.values = {0, 1, 0};  // v = x
  g = gradient(m, f, 0);
  CHECK(g.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.y == doctest::Approx(0.0).epsilon(1e-15));
  f.values = {0, 2, 3};  // v = 2x + 3y
  g = gradient(m, f, 0);
  CHECK(g.x == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.y == doctest::Approx(3.0).epsilon(1e-15));

  // machine-precision exactness for a random affine field on a skewed element
  Mesh s = build_mesh({{0.3, -0.1}, {1.7, 0.4}, {0.9, 2.2}}, {{{0, 1, 2}}});
  DgFunction a = interpolate_nodal(s, [](double x, double y) { return 0.7 * x - 1.9 * y + 0.37; });
  Vec2 ga = gradient(s, a, 0);
  CHECK(ga.x == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(ga.y == doctest::Approx(-1.9).epsilon(1e-14));
}

TEST_CASE("scalar jumps and means across an interior edge") {
  Mesh m = two_triangle_square();
  index_t e = shared_edge(m);

  DgFunction cont = interpolate_nodal(m, [](double x, double y) { return x + 2 * y; });
  for (double s : {0.0, 0.31, 1.0}) CHECK(jump_scalar(m, cont, e, s) == doctest::Approx(0.0).epsilon(1e-15));

  DgFunction pw(m);
  for (int k = 0; k < 3; ++k) {
    pw.at(0, k) = 1.0;
    pw.at(1, k) = 3.0;
  }
  for (double s : {0.0, 0.5, 1.0}) {
    CHECK(std::abs(jump_scalar(m, pw, e, s)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(mean_scalar(m, pw, e, s) == doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("boundary jump is the trace") {
  Mesh m = reference_triangle();
  DgFunction f(m);
  // boundary edge from vertex 0 to vertex 1 carries values 0.5 -> 0
  f.values = {0.5, 0.0, 0.0};
  index_t e01 = -1;
  for (index_t e = 0; e < m.num_edges(); ++e)
    if (m.edges[e].v == std::array<index_t, 2>{0, 1}) e01 = e;
  REQUIRE(e01 >= 0);
  CHECK(jump_scalar(m, f, e01, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(jump_scalar(m, f, e01, 1.0) == 0.0);
  CHECK(mean_scalar(m, f, e01, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normal gradient jump") {
  Mesh m = strip_mesh();
  index_t e = shared_edge(m);

  DgFunction cont = interpolate_nodal(m, [](double x, double y) { return 2 * x - y; });
  CHECK(jump_normal_gradient(m, cont, e) == doctest::Approx(0.0).epsilon(1e-14));

  DgFunction vabs = interpolate_nodal(m, [](double x, double) { return std::abs(x); });
  CHECK(std::abs(jump_normal_gradient(m, vabs, e)) == doctest::Approx(2.0).epsilon(1e-14));

  // one-sided perturbation by +x on one element only
  DgFunction base = interpolate_nodal(m, [](double, double y) { return y; });
  for (int k = 0; k < 3; ++k) {
    const Vertex& p = m.vertices[m.triangles[1].v[k]];
    base.at(1, k) += p.x;
  }
  CHECK(std::abs(jump_normal_gradient(m, base, e)) == doctest::Approx(1.0).epsilon(1e-14));

  for (index_t b = 0; b < m.num_edges(); ++b)
    if (m.edges[b].boundary()) {
      CHECK_THROWS_AS(jump_normal_gradient(m, vabs, b), std::invalid_argument);
      break;
    }
}

TEST_CASE("nodal interpolation") {
  Mesh m = two_triangle_square();
  DgFunction z = interpolate_nodal(m, [](double, double) { return 0.0; });
  for (double v : z.values) CHECK(v == 0.0);

  DgFunction a = interpolate_nodal(m, [](double x, double y) { return 1 + x - 3 * y; });
  // affine reproduction: barycenter value matches the field exactly
  for (index_t t = 0; t < m.num_triangles(); ++t) {
    double bx = 0, by = 0;
    for (int k = 0; k < 3; ++k) {
      bx += m.vertices[m.triangles[t].v[k]].x / 3.0;
      by += m.vertices[m.triangles[t].v[k]].y / 3.0;
    }
    CHECK(eval(m, a, t, {1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
          doctest::Approx(1 + bx - 3 * by).epsilon(1e-14));
  }

  // obstacle of the two-hill benchmark at the origin
  Mesh m3 = initial_domain(3);
  auto chi = [](double x, double y) {
    double r2 = x * x + y * y;
    return 10.0 - 6.0 * (x * x - 1.0) * (x * x - 1.0) - 20.0 * (r2 - x * x);
  };
  DgFunction chi_h = interpolate_nodal(m3, chi);
  bool checked = false;
  for (index_t t = 0; t < m3.num_triangles() && !checked; ++t)
    for (int k = 0; k < 3; ++k) {
      const Vertex& p = m3.vertices[m3.triangles[t].v[k]];
      if (p.x == 0.0 && p.y == 0.0) {
        CHECK(chi_h.at(t, k) == doctest::Approx(4.0).epsilon(1e-15));
        checked = true;
      }
    }
  CHECK(checked);
}

TEST_CASE("averaging operator") {
  // interior vertex of the criss-cross square sees the minimum of its patch
  Mesh m = build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}},
                      {{{0, 1, 4}}, {{1, 2, 4}}, {{2, 3, 4}}, {{3, 0, 4}}});
  DgFunction f(m);
  for (index_t t = 0; t < 4; ++t) {
    int lc = m.local_vertex(t, 4);
    f.at(t, lc) = static_cast<double>(t + 1);  // {1,2,3,4} around the center
    for (int k = 0; k < 3; ++k)
      if (k != lc) f.at(t, k) = 9.0;
  }
  ConformingFunction c = averaging(m, f);
  CHECK(c.values[4] == 1.0);
  for (index_t v = 0; v < 4; ++v) CHECK(c.values[v] == 0.0);  // boundary vertices

  // continuous zero-boundary input is reproduced
  DgFunction hat(m);
  for (index_t t = 0; t < 4; ++t) hat.at(t, m.local_vertex(t, 4)) = 2.5;
  ConformingFunction ch = averaging(m, hat);
  CHECK(ch.values[4] == 2.5);
  DgFunction lifted = to_dg(m, ch);
  for (std::size_t i = 0; i < hat.values.size(); ++i) CHECK(lifted.values[i] == hat.values[i]);
}

TEST_CASE("conforming lifts have no interior jumps") {
  Mesh m = initial_domain(1);
  m = bisect(m, {0, 3, 17}).mesh;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ConformingFunction c;
  c.values.assign(m.num_vertices(), 0.0);
  for (index_t v = 0; v < m.num_vertices(); ++v)
    if (!m.vertices[v].on_boundary) c.values[v] = dist(rng);
  DgFunction d = to_dg(m, c);
  for (index_t e = 0; e < m.num_edges(); ++e) {
    if (m.edges[e].boundary()) continue;
    CHECK(jump_scalar(m, d, e, 0.0) == 0.0);
    CHECK(jump_scalar(m, d, e, 1.0) == 0.0);
  }
}

TEST_CASE("averaging preserves the obstacle constraint exactly") {
  Mesh m = initial_domain(1);
  m = bisect(m, {1, 2, 30}).mesh;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    // conforming obstacle interpolant and an admissible perturbation above it
    ConformingFunction chi;
    chi.values.assign(m.num_vertices(), 0.0);
    for (index_t v = 0; v < m.num_vertices(); ++v) chi.values[v] = dist(rng) - 2.0;
    DgFunction chi_h = to_dg(m, chi);
    DgFunction v(m);
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] = chi_h.values[i] + dist(rng);

    ConformingFunction ev = averaging(m, v);
    for (index_t p = 0; p < m.num_vertices(); ++p) {
      if (m.vertices[p].on_boundary) continue;
      CHECK(ev.values[p] >= chi.values[p]);
    }
  }
}

TEST_CASE("averaging error is controlled by the jumps") {
  Mesh m = initial_domain(1);
  m = bisect(m, {5, 6, 7, 40}).mesh;
  std::size_t max_patch = 0;
  for (const auto& patch : m.vertex_patch) max_patch = std::max(max_patch, patch.size());

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    DgFunction v(m);
    for (double& x : v.values) x = dist(rng);
    DgFunction ev = to_dg(m, averaging(m, v));

    double diff = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i)
      diff = std::max(diff, std::abs(ev.values[i] - v.values[i]));
    double jump = 0.0;
    for (index_t e = 0; e < m.num_edges(); ++e)
      jump = std::max({jump, std::abs(jump_scalar(m, v, e, 0.0)), std::abs(jump_scalar(m, v, e, 1.0))});
    REQUIRE(jump > 0.0);
    worst_ratio = std::max(worst_ratio, diff / jump);
  }
  CHECK(std::isfinite(worst_ratio));
  CHECK(worst_ratio <= 3.0 * static_cast<double>(max_patch));
  MESSAGE("averaging/jump ratio over random fields: ", worst_ratio);
}
