#include "odg/examples.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "odg/estimator.hpp"
#include "odg/parallel.hpp"

namespace odg {

namespace {

// radially symmetric membrane over a flat obstacle: u = r^2/2 - ln r - 1/2
// outside the unit disk, 0 (contact) inside
double membrane_u(double x, double y) {
  double r = std::hypot(x, y);
  if (r < 1.0) return 0.0;
  return 0.5 * r * r - std::log(r) - 0.5;
}

// angle in [0, 3pi/2] measured counterclockwise from the positive x-axis;
// both reentrant edges of the L-shape are zero level sets of sin(2 theta / 3)
double corner_theta(double x, double y) {
  double th = std::atan2(y, x);
  if (th < 0.0) th += 2.0 * M_PI;
  return th;
}

// quintic radial cutoff in rt = 2(r - 1/4): one below r = 1/4, zero above r = 3/4
double cutoff(double r) {
  double rt = 2.0 * (r - 0.25);
  if (rt < 0.0) return 1.0;
  if (rt >= 1.0) return 0.0;
  return ((-6.0 * rt + 15.0) * rt - 10.0) * rt * rt * rt + 1.0;
}
double cutoff_d1(double r) {
  double rt = 2.0 * (r - 0.25);
  if (rt < 0.0 || rt >= 1.0) return 0.0;
  return 2.0 * ((-30.0 * rt + 60.0) * rt - 30.0) * rt * rt;
}
double cutoff_d2(double r) {
  double rt = 2.0 * (r - 0.25);
  if (rt < 0.0 || rt >= 1.0) return 0.0;
  return 4.0 * ((-120.0 * rt + 180.0) * rt - 60.0) * rt;
}

double corner_u(double x, double y) {
  double r = std::hypot(x, y);
  if (r == 0.0) return 0.0;
  return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * corner_theta(x, y) / 3.0) * cutoff(r);
}

double corner_f(double x, double y) {
  double r = std::hypot(x, y);
  double far = (r <= 1.25) ? 0.0 : 1.0;
  if (r < 0.25) return 0.0;  // cutoff is constant and the core is harmonic
  double s = std::sin(2.0 * corner_theta(x, y) / 3.0);
  double g1 = cutoff_d1(r), g2 = cutoff_d2(r);
  return -std::pow(r, 2.0 / 3.0) * s * (g1 / r + g2) -
         (4.0 / 3.0) * std::pow(r, -1.0 / 3.0) * s * g1 - far;
}

double twin_hill_chi(double x, double y) {
  double a = x * x - 1.0;
  return 10.0 - 6.0 * a * a - 20.0 * y * y;
}

}  // namespace

ExampleSpec example_spec(int id, double load_variant) {
  ExampleSpec spec;
  spec.id = id;
  spec.domain = [id] { return initial_domain(id); };
  switch (id) {
    case 1:
      spec.f = [](double, double) { return -2.0; };
      spec.chi = [](double, double) { return 0.0; };
      spec.exact_u = membrane_u;
      spec.boundary_g = membrane_u;
      break;
    case 2:
      spec.f = corner_f;
      spec.chi = [](double, double) { return 0.0; };
      spec.exact_u = corner_u;
      // the exact solution vanishes for r >= 3/4, hence on the whole boundary
      break;
    case 3:
      if (load_variant != 0.0 && load_variant != -15.0)
        throw std::invalid_argument("example 3 load must be 0 or -15");
      spec.f = [load_variant](double, double) { return load_variant; };
      spec.chi = twin_hill_chi;
      break;
    default:
      throw std::invalid_argument("unknown example id " + std::to_string(id));
  }
  return spec;
}

namespace {

double element_error(const Mesh& mesh, const DgFunction& u, const ScalarField& exact, index_t t) {
  const Triangle& tri = mesh.triangles[t];
  const Vertex& p0 = mesh.vertices[tri.v[0]];
  const Vertex& p1 = mesh.vertices[tri.v[1]];
  const Vertex& p2 = mesh.vertices[tri.v[2]];
  double worst = 0.0;
  for (const auto& b : SamplingLattice::triangle_points()) {
    double x = b[0] * p0.x + b[1] * p1.x + b[2] * p2.x;
    double y = b[0] * p0.y + b[1] * p1.y + b[2] * p2.y;
    double uh = b[0] * u.at(t, 0) + b[1] * u.at(t, 1) + b[2] * u.at(t, 2);
    worst = std::max(worst, std::abs(exact(x, y) - uh));
  }
  return worst;
}

}  // namespace

double linf_error(const Mesh& mesh, const DgFunction& u, const ScalarField& exact) {
  if (!exact) throw std::invalid_argument("no exact solution available");
  std::vector<double> per_element(mesh.num_triangles());
  parallel_for(mesh.num_triangles(),
               [&](std::int64_t t) { per_element[t] = element_error(mesh, u, exact, static_cast<index_t>(t)); });
  double worst = 0.0;
  for (double v : per_element) worst = std::max(worst, v);
  return worst;
}

double linf_error_serial(const Mesh& mesh, const DgFunction& u, const ScalarField& exact) {
  if (!exact) throw std::invalid_argument("no exact solution available");
  double worst = 0.0;
  for (index_t t = 0; t < mesh.num_triangles(); ++t)
    worst = std::max(worst, element_error(mesh, u, exact, t));
  return worst;
}

double boundary_chi_max(const Mesh& mesh, const ScalarField& chi) {
  double worst = -std::numeric_limits<double>::max();
  for (const Edge& ed : mesh.edges) {
    if (!ed.boundary()) continue;
    const Vertex& a = mesh.vertices[ed.v[0]];
    const Vertex& b = mesh.vertices[ed.v[1]];
    for (double s : SamplingLattice::edge_points())
      worst = std::max(worst, chi((1.0 - s) * a.x + s * b.x, (1.0 - s) * a.y + s * b.y));
  }
  return worst;
}

}  // namespace odg
