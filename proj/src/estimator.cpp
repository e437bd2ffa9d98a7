#include "odg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "odg/format.hpp"
#include "odg/parallel.hpp"

namespace odg {

const std::vector<std::array<double, 3>>& SamplingLattice::triangle_points() {
  static const std::vector<std::array<double, 3>> pts = [] {
    std::vector<std::array<double, 3>> p;
    for (int i = 4; i >= 0; --i)
      for (int j = 4 - i; j >= 0; --j) p.push_back({i / 4.0, j / 4.0, (4 - i - j) / 4.0});
    return p;
  }();
  return pts;
}

const std::array<double, 5>& SamplingLattice::edge_points() {
  static const std::array<double, 5> pts = {0.0, 0.25, 0.5, 0.75, 1.0};
  return pts;
}

double contact_tolerance(const DgFunction& chi_h) {
  double m = 0.0;
  for (double v : chi_h.values) m = std::max(m, std::abs(v));
  return 1e-10 * std::max(1.0, m);
}

std::vector<ElementClass> classify_elements(const Mesh& mesh, const DgFunction& u,
                                            const DgFunction& chi_h, double eps_c) {
  std::vector<ElementClass> cls(mesh.num_triangles());
  parallel_for(mesh.num_triangles(), [&](std::int64_t t) {
    int contact = 0;
    for (int k = 0; k < 3; ++k)
      if (u.at(static_cast<index_t>(t), k) - chi_h.at(static_cast<index_t>(t), k) <= eps_c) ++contact;
    cls[t] = contact == 3 ? ElementClass::Contact
             : contact == 0 ? ElementClass::NonContact
                            : ElementClass::FreeBoundary;
  });
  return cls;
}

namespace {

struct Corners {
  double x[3], y[3];
};

Corners corners(const Mesh& mesh, index_t t) {
  Corners c;
  for (int k = 0; k < 3; ++k) {
    const Vertex& p = mesh.vertices[mesh.triangles[t].v[k]];
    c.x[k] = p.x;
    c.y[k] = p.y;
  }
  return c;
}

}  // namespace

ElementTerms eta_element_terms(const Mesh& mesh, index_t t, const DgFunction& sigma,
                               const ScalarField& f, ElementClass cls) {
  ElementTerms out;
  const double h2 = mesh.diam[t] * mesh.diam[t];
  Corners c = corners(mesh, t);

  double worst = 0.0, fmax = -std::numeric_limits<double>::max(), fmin = -fmax;
  for (const auto& b : SamplingLattice::triangle_points()) {
    double x = b[0] * c.x[0] + b[1] * c.x[1] + b[2] * c.x[2];
    double y = b[0] * c.y[0] + b[1] * c.y[1] + b[2] * c.y[2];
    double fv = f(x, y);
    double sv = b[0] * sigma.at(t, 0) + b[1] * sigma.at(t, 1) + b[2] * sigma.at(t, 2);
    worst = std::max(worst, std::abs(fv - sv));
    fmax = std::max(fmax, fv);
    fmin = std::min(fmin, fv);
  }
  out.eta1 = h2 * worst;
  out.osc = h2 * 0.5 * (fmax - fmin);  // the sup-optimal constant is the midrange

  if (cls != ElementClass::NonContact) {
    Vec2 g = gradient(mesh, sigma, t);
    out.eta4 = h2 * std::hypot(g.x, g.y) * std::sqrt(mesh.area[t]);
  }
  return out;
}

EdgeTerms eta_edge_terms(const Mesh& mesh, index_t e, const DgFunction& u,
                         const ScalarField& boundary_g) {
  EdgeTerms out;
  const Edge& ed = mesh.edges[e];
  if (!ed.boundary()) {
    out.eta2 = ed.length * std::abs(jump_normal_gradient(mesh, u, e));
    // the jump of a P1 function is linear along the edge: endpoints are exact
    out.eta3 = std::max(std::abs(jump_scalar(mesh, u, e, 0.0)), std::abs(jump_scalar(mesh, u, e, 1.0)));
  } else if (!boundary_g) {
    out.eta3 = std::max(std::abs(jump_scalar(mesh, u, e, 0.0)), std::abs(jump_scalar(mesh, u, e, 1.0)));
  } else {
    // residual of the weakly imposed Dirichlet data
    const Vertex& a = mesh.vertices[ed.v[0]];
    const Vertex& b = mesh.vertices[ed.v[1]];
    for (double s : SamplingLattice::edge_points()) {
      double x = (1.0 - s) * a.x + s * b.x;
      double y = (1.0 - s) * a.y + s * b.y;
      out.eta3 = std::max(out.eta3, std::abs(jump_scalar(mesh, u, e, s) - boundary_g(x, y)));
    }
  }
  return out;
}

ObstacleTerms eta_obstacle_terms(const Mesh& mesh, index_t t, const DgFunction& u,
                                 const ScalarField& chi_exact, const DgFunction& sigma) {
  ObstacleTerms out;
  Corners c = corners(mesh, t);
  for (const auto& b : SamplingLattice::triangle_points()) {
    double x = b[0] * c.x[0] + b[1] * c.x[1] + b[2] * c.x[2];
    double y = b[0] * c.y[0] + b[1] * c.y[1] + b[2] * c.y[2];
    double uv = b[0] * u.at(t, 0) + b[1] * u.at(t, 1) + b[2] * u.at(t, 2);
    double sv = b[0] * sigma.at(t, 0) + b[1] * sigma.at(t, 1) + b[2] * sigma.at(t, 2);
    double gap = chi_exact(x, y) - uv;
    out.eta5 = std::max(out.eta5, gap);
    if (sv < 0.0) out.eta6 = std::max(out.eta6, -gap);
  }
  out.eta5 = std::max(out.eta5, 0.0);
  out.eta6 = std::max(out.eta6, 0.0);
  return out;
}

void total_eta(const Mesh& mesh, double hmin, EstimatorBreakdown& b) {
  b.eta1 = b.eta2 = b.eta3 = b.eta4 = b.eta5 = b.eta6 = 0.0;
  for (double v : b.eta1_T) b.eta1 = std::max(b.eta1, v);
  for (double v : b.eta2_e) b.eta2 = std::max(b.eta2, v);
  for (double v : b.eta3_e) b.eta3 = std::max(b.eta3, v);
  for (double v : b.eta4_T) b.eta4 = std::max(b.eta4, v);
  for (double v : b.eta5_T) b.eta5 = std::max(b.eta5, v);
  for (double v : b.eta6_T) b.eta6 = std::max(b.eta6, v);
  b.log_factor = std::abs(std::log(hmin));
  b.eta_total = b.log_factor * (b.eta1 + b.eta2 + b.eta3 + b.eta4) + b.eta5 + b.eta6;

  b.indicator.assign(mesh.num_triangles(), 0.0);
  parallel_for(mesh.num_triangles(), [&](std::int64_t t) {
    double e2 = 0.0, e3 = 0.0;
    for (int k = 0; k < 3; ++k) {
      index_t e = mesh.triangle_edges[t][k];
      e2 = std::max(e2, b.eta2_e[e]);
      e3 = std::max(e3, b.eta3_e[e]);
    }
    b.indicator[t] =
        b.log_factor * (b.eta1_T[t] + e2 + e3 + b.eta4_T[t]) + b.eta5_T[t] + b.eta6_T[t];
  });
}

namespace {

template <typename ForEach>
EstimatorBreakdown estimate_impl(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                                 const ScalarField& chi_exact, const DgFunction& chi_h,
                                 const ScalarField& f, const ScalarField& boundary_g,
                                 ForEach&& for_each) {
  EstimatorBreakdown b;
  b.classes = classify_elements(mesh, u, chi_h, contact_tolerance(chi_h));
  const index_t nt = mesh.num_triangles();
  const index_t ne = mesh.num_edges();
  b.eta1_T.assign(nt, 0.0);
  b.eta4_T.assign(nt, 0.0);
  b.osc_T.assign(nt, 0.0);
  b.eta5_T.assign(nt, 0.0);
  b.eta6_T.assign(nt, 0.0);
  b.eta2_e.assign(ne, 0.0);
  b.eta3_e.assign(ne, 0.0);

  for_each(nt, [&](std::int64_t t) {
    ElementTerms et = eta_element_terms(mesh, static_cast<index_t>(t), sigma, f, b.classes[t]);
    b.eta1_T[t] = et.eta1;
    b.eta4_T[t] = et.eta4;
    b.osc_T[t] = et.osc;
    ObstacleTerms ot = eta_obstacle_terms(mesh, static_cast<index_t>(t), u, chi_exact, sigma);
    b.eta5_T[t] = ot.eta5;
    b.eta6_T[t] = ot.eta6;
  });
  for_each(ne, [&](std::int64_t e) {
    EdgeTerms et = eta_edge_terms(mesh, static_cast<index_t>(e), u, boundary_g);
    b.eta2_e[e] = et.eta2;
    b.eta3_e[e] = et.eta3;
  });

  total_eta(mesh, h_min(mesh), b);
  return b;
}

}  // namespace

EstimatorBreakdown estimate(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                            const ScalarField& chi_exact, const DgFunction& chi_h,
                            const ScalarField& f, const ScalarField& boundary_g) {
  return estimate_impl(mesh, u, sigma, chi_exact, chi_h, f, boundary_g,
                       [](std::int64_t n, auto&& fn) { parallel_for(n, fn); });
}

EstimatorBreakdown estimate_serial(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                                   const ScalarField& chi_exact, const DgFunction& chi_h,
                                   const ScalarField& f, const ScalarField& boundary_g) {
  return estimate_impl(mesh, u, sigma, chi_exact, chi_h, f, boundary_g,
                       [](std::int64_t n, auto&& fn) {
                         for (std::int64_t i = 0; i < n; ++i) fn(i);
                       });
}

void write_estimator_csv(const Mesh& mesh, const EstimatorBreakdown& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "element_id,class,eta1,eta4,osc,eta5,eta6,indicator\n";
  for (index_t t = 0; t < mesh.num_triangles(); ++t) {
    const char* cls = b.classes[t] == ElementClass::Contact       ? "contact"
                      : b.classes[t] == ElementClass::NonContact ? "noncontact"
                                                                 : "freeboundary";
    out << t << ',' << cls << ',' << format_double(b.eta1_T[t]) << ',' << format_double(b.eta4_T[t])
        << ',' << format_double(b.osc_T[t]) << ',' << format_double(b.eta5_T[t]) << ','
        << format_double(b.eta6_T[t]) << ',' << format_double(b.indicator[t]) << '\n';
  }
}

}  // namespace odg
