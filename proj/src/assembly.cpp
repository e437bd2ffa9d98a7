#include "odg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "odg/parallel.hpp"

namespace odg {

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n, 0.0);
  parallel_for(n, [&](std::int64_t r) {
    double s = 0.0;
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  });
  return y;
}

double CsrMatrix::bilinear(const std::vector<double>& x, const std::vector<double>& y) const {
  double s = 0.0;
  for (index_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) row += vals[k] * y[cols[k]];
    s += x[r] * row;
  }
  return s;
}

double CsrMatrix::quadratic_form(const std::vector<double>& x) const { return bilinear(x, x); }

double CsrMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (index_t r = 0; r < n; ++r) {
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      index_t c = cols[k];
      auto beg = cols.begin() + row_ptr[c];
      auto end = cols.begin() + row_ptr[c + 1];
      auto it = std::lower_bound(beg, end, r);
      double vt = (it != end && *it == r) ? vals[it - cols.begin()] : 0.0;
      worst = std::max(worst, std::abs(vals[k] - vt));
    }
  }
  return worst;
}

const QuadratureRule& triangle_rule_degree4() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.degree = 4;
    const double a1 = 0.816847572980459, b1 = 0.091576213509771, w1 = 0.109951743655322;
    const double a2 = 0.108103018168070, b2 = 0.445948490915965, w2 = 0.223381589678011;
    for (auto [a, b, w] : {std::array<double, 3>{a1, b1, w1}, std::array<double, 3>{a2, b2, w2}}) {
      r.points.push_back({a, b, b});
      r.points.push_back({b, a, b});
      r.points.push_back({b, b, a});
      r.weights.push_back(w);
      r.weights.push_back(w);
      r.weights.push_back(w);
    }
    return r;
  }();
  return rule;
}

namespace {

// nodal basis gradients on element t
std::array<Vec2, 3> basis_gradients(const Mesh& mesh, index_t t) {
  const Triangle& tri = mesh.triangles[t];
  const Vertex& p0 = mesh.vertices[tri.v[0]];
  const Vertex& p1 = mesh.vertices[tri.v[1]];
  const Vertex& p2 = mesh.vertices[tri.v[2]];
  double inv = 1.0 / (2.0 * mesh.area[t]);
  return {Vec2{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv},
          Vec2{(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
          Vec2{(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
}

// |T| grad(phi_i) . grad(phi_j)
std::array<double, 9> element_block(const Mesh& mesh, index_t t) {
  auto g = basis_gradients(mesh, t);
  std::array<double, 9> k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k[3 * i + j] = mesh.area[t] * (g[i].x * g[j].x + g[i].y * g[j].y);
  return k;
}

// Consistency and penalty terms of one edge, in closed form. Entry layout:
// v[side_r][i][side_c][j] couples local DOF i of the row side with local DOF j
// of the column side; boundary edges only use side 0.
struct EdgeBlock {
  double v[2][3][2][3] = {};
  int nsides = 1;
};

EdgeBlock edge_block(const Mesh& mesh, index_t e, double gamma) {
  const Edge& ed = mesh.edges[e];
  EdgeBlock blk;
  blk.nsides = ed.boundary() ? 1 : 2;
  const double mean_w = ed.boundary() ? 1.0 : 0.5;

  // per side: trace role of each local DOF (0 -> (1-s), 1 -> s, -1 -> zero
  // trace), normal gradient component, side sign in the jump
  int role[2][3];
  double gn[2][3];
  double sgn[2] = {1.0, -1.0};
  for (int s = 0; s < blk.nsides; ++s) {
    index_t t = ed.elems[s];
    int la = mesh.local_vertex(t, ed.v[0]);
    int lb = mesh.local_vertex(t, ed.v[1]);
    auto g = basis_gradients(mesh, t);
    for (int i = 0; i < 3; ++i) {
      role[s][i] = (i == la) ? 0 : (i == lb) ? 1 : -1;
      gn[s][i] = g[i].x * ed.nx + g[i].y * ed.ny;
    }
  }

  const double h = ed.length;
  auto trace_int = [&](int r) { return r < 0 ? 0.0 : 0.5 * h; };
  auto trace_prod_int = [&](int r, int c) {
    if (r < 0 || c < 0) return 0.0;
    return (r == c) ? h / 3.0 : h / 6.0;
  };

  for (int sr = 0; sr < blk.nsides; ++sr)
    for (int i = 0; i < 3; ++i)
      for (int sc = 0; sc < blk.nsides; ++sc)
        for (int j = 0; j < 3; ++j) {
          double consistency = mean_w * gn[sc][j] * sgn[sr] * trace_int(role[sr][i]) +
                               mean_w * gn[sr][i] * sgn[sc] * trace_int(role[sc][j]);
          double penalty = (gamma / h) * sgn[sr] * sgn[sc] * trace_prod_int(role[sr][i], role[sc][j]);
          blk.v[sr][i][sc][j] = -consistency + penalty;
        }
  return blk;
}

// Neighbor triangle of t across its local edge k, or -1.
index_t neighbor(const Mesh& mesh, index_t t, int k) {
  const Edge& ed = mesh.edges[mesh.triangle_edges[t][k]];
  return ed.elems[0] == t ? ed.elems[1] : ed.elems[0];
}

CsrMatrix stiffness_pattern(const Mesh& mesh) {
  const index_t nt = mesh.num_triangles();
  CsrMatrix A;
  A.n = 3 * nt;
  A.row_ptr.assign(A.n + 1, 0);

  std::vector<std::array<index_t, 3>> nbr(nt);
  for (index_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) nbr[t][k] = neighbor(mesh, t, k);

  for (index_t t = 0; t < nt; ++t) {
    int cols = 3;
    for (int k = 0; k < 3; ++k)
      if (nbr[t][k] >= 0) cols += 3;
    for (int i = 0; i < 3; ++i) A.row_ptr[3 * t + i + 1] = cols;
  }
  for (index_t r = 0; r < A.n; ++r) A.row_ptr[r + 1] += A.row_ptr[r];

  A.cols.resize(A.row_ptr[A.n]);
  A.vals.assign(A.row_ptr[A.n], 0.0);
  parallel_for(nt, [&](std::int64_t t) {
    std::array<index_t, 12> c{};
    int nc = 0;
    for (int j = 0; j < 3; ++j) c[nc++] = static_cast<index_t>(3 * t + j);
    for (int k = 0; k < 3; ++k)
      if (nbr[t][k] >= 0)
        for (int j = 0; j < 3; ++j) c[nc++] = 3 * nbr[t][k] + j;
    std::sort(c.begin(), c.begin() + nc);
    for (int i = 0; i < 3; ++i)
      std::copy(c.begin(), c.begin() + nc, A.cols.begin() + A.row_ptr[3 * t + i]);
  });
  return A;
}

// Accumulation order per row is fixed: own element block first, then the
// triangle's edges in ascending edge-id order. The serial reference follows
// the same per-entry order, so the two results are bitwise identical.
void stitch_rows(const Mesh& mesh, double gamma, CsrMatrix& A, index_t t) {
  const auto& te = mesh.triangle_edges[t];
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return te[a] < te[b]; });

  auto K = element_block(mesh, t);

  std::array<EdgeBlock, 3> blocks;
  std::array<int, 3> side{};
  for (int k = 0; k < 3; ++k) {
    blocks[k] = edge_block(mesh, te[k], gamma);
    side[k] = mesh.edges[te[k]].elems[0] == t ? 0 : 1;
  }

  for (int i = 0; i < 3; ++i) {
    index_t r = 3 * t + i;
    auto beg = A.cols.begin() + A.row_ptr[r];
    auto end = A.cols.begin() + A.row_ptr[r + 1];
    auto add = [&](index_t c, double v) {
      auto it = std::lower_bound(beg, end, c);
      A.vals[it - A.cols.begin()] += v;
    };
    for (int j = 0; j < 3; ++j) add(3 * t + j, K[3 * i + j]);
    for (int k : order) {
      const EdgeBlock& b = blocks[k];
      int s = side[k];
      for (int j = 0; j < 3; ++j) add(3 * t + j, b.v[s][i][s][j]);
      if (b.nsides == 2) {
        index_t u = neighbor(mesh, t, k);
        for (int j = 0; j < 3; ++j) add(3 * u + j, b.v[s][i][1 - s][j]);
      }
    }
  }
}

}  // namespace

CsrMatrix assemble_stiffness(const Mesh& mesh, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("penalty must be positive");
  CsrMatrix A = stiffness_pattern(mesh);
  parallel_for(mesh.num_triangles(), [&](std::int64_t t) { stitch_rows(mesh, gamma, A, static_cast<index_t>(t)); });
  return A;
}

CsrMatrix assemble_stiffness_serial(const Mesh& mesh, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("penalty must be positive");
  CsrMatrix A = stiffness_pattern(mesh);
  for (index_t t = 0; t < mesh.num_triangles(); ++t) stitch_rows(mesh, gamma, A, t);
  return A;
}

namespace {

void load_element(const Mesh& mesh, const ScalarField& f, index_t t, std::vector<double>& F) {
  const QuadratureRule& q = triangle_rule_degree4();
  const Triangle& tri = mesh.triangles[t];
  const Vertex& p0 = mesh.vertices[tri.v[0]];
  const Vertex& p1 = mesh.vertices[tri.v[1]];
  const Vertex& p2 = mesh.vertices[tri.v[2]];
  double acc[3] = {0.0, 0.0, 0.0};
  for (std::size_t qi = 0; qi < q.points.size(); ++qi) {
    const auto& b = q.points[qi];
    double x = b[0] * p0.x + b[1] * p1.x + b[2] * p2.x;
    double y = b[0] * p0.y + b[1] * p1.y + b[2] * p2.y;
    double wf = q.weights[qi] * f(x, y);
    for (int i = 0; i < 3; ++i) acc[i] += wf * b[i];
  }
  for (int i = 0; i < 3; ++i) F[3 * t + i] = mesh.area[t] * acc[i];
}

}  // namespace

std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& f) {
  std::vector<double> F(3 * static_cast<std::size_t>(mesh.num_triangles()), 0.0);
  parallel_for(mesh.num_triangles(), [&](std::int64_t t) { load_element(mesh, f, static_cast<index_t>(t), F); });
  return F;
}

std::vector<double> assemble_load_serial(const Mesh& mesh, const ScalarField& f) {
  std::vector<double> F(3 * static_cast<std::size_t>(mesh.num_triangles()), 0.0);
  for (index_t t = 0; t < mesh.num_triangles(); ++t) load_element(mesh, f, t, F);
  return F;
}

std::vector<double> boundary_load(const Mesh& mesh, const ScalarField& g, double gamma) {
  std::vector<double> F(3 * static_cast<std::size_t>(mesh.num_triangles()), 0.0);
  if (!g) return F;

  // 5-point Gauss-Legendre on [0,1]
  static const double gx[5] = {0.046910077030668074, 0.23076534494715845, 0.5,
                               0.76923465505284155, 0.95308992296933193};
  static const double gw[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                               0.23931433524968324, 0.11846344252809454};

  parallel_for(mesh.num_triangles(), [&](std::int64_t t) {
    const auto& te = mesh.triangle_edges[t];
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return te[a] < te[b]; });
    for (int k : order) {
      const Edge& ed = mesh.edges[te[k]];
      if (!ed.boundary()) continue;
      const Vertex& a = mesh.vertices[ed.v[0]];
      const Vertex& b = mesh.vertices[ed.v[1]];
      int la = mesh.local_vertex(static_cast<index_t>(t), ed.v[0]);
      int lb = mesh.local_vertex(static_cast<index_t>(t), ed.v[1]);
      auto grads = basis_gradients(mesh, static_cast<index_t>(t));
      for (int i = 0; i < 3; ++i) {
        double gn = grads[i].x * ed.nx + grads[i].y * ed.ny;
        double acc = 0.0;
        for (int qi = 0; qi < 5; ++qi) {
          double s = gx[qi];
          double trace = (i == la) ? (1.0 - s) : (i == lb) ? s : 0.0;
          double x = (1.0 - s) * a.x + s * b.x;
          double y = (1.0 - s) * a.y + s * b.y;
          acc += gw[qi] * g(x, y) * ((gamma / ed.length) * trace - gn);
        }
        F[3 * t + i] += ed.length * acc;
      }
    }
  });
  return F;
}

std::vector<double> lumped_mass_diag(const Mesh& mesh) {
  std::vector<double> d(3 * static_cast<std::size_t>(mesh.num_triangles()), 0.0);
  for (index_t t = 0; t < mesh.num_triangles(); ++t)
    for (int i = 0; i < 3; ++i) d[3 * t + i] = mesh.area[t] / 3.0;
  return d;
}

SparseSystem assemble_system(const Mesh& mesh, const ScalarField& f, const ScalarField& boundary_g,
                             double gamma) {
  SparseSystem sys;
  sys.gamma = gamma;
  sys.A = assemble_stiffness(mesh, gamma);
  sys.F = assemble_load(mesh, f);
  std::vector<double> bl = boundary_load(mesh, boundary_g, gamma);
  for (std::size_t i = 0; i < sys.F.size(); ++i) sys.F[i] += bl[i];
  sys.M_L = lumped_mass_diag(mesh);
  return sys;
}

void write_matrix_coordinate(const CsrMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char line[128];
  for (index_t r = 0; r < A.n; ++r)
    for (std::int64_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
      std::snprintf(line, sizeof(line), "%d %d %.17g\n", r, A.cols[k], A.vals[k]);
      out << line;
    }
}

}  // namespace odg
