#include "odg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <json.hpp>

namespace odg {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<index_t, index_t>& p) const {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(p.first) << 32) ^
                                      static_cast<std::uint32_t>(p.second));
  }
};

double signed_area(const Vertex& a, const Vertex& b, const Vertex& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double dist(const Vertex& a, const Vertex& b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Derives edges, patches, areas, diameters and boundary flags. `validate`
// additionally runs the expensive external-input checks (hanging vertices,
// duplicate triangles).
void finalize(Mesh& m, bool validate) {
  const index_t nv = m.num_vertices();
  const index_t nt = m.num_triangles();

  m.area.assign(nt, 0.0);
  m.diam.assign(nt, 0.0);
  m.triangle_edges.assign(nt, {-1, -1, -1});

  std::unordered_map<std::pair<index_t, index_t>, index_t, PairHash> edge_ids;
  edge_ids.reserve(3 * static_cast<std::size_t>(nt));
  m.edges.clear();

  for (index_t t = 0; t < nt; ++t) {
    auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      index_t v = tri.v[k];
      if (v < 0 || v >= nv) throw std::invalid_argument("triangle vertex index out of range");
    }

    double sa = signed_area(m.vertices[tri.v[0]], m.vertices[tri.v[1]], m.vertices[tri.v[2]]);
    if (sa < 0.0) {
      std::swap(tri.v[1], tri.v[2]);
      // local edges 1 and 2 trade places under the swap, edge 0 is unchanged
      if (tri.refinement_edge == 1)
        tri.refinement_edge = 2;
      else if (tri.refinement_edge == 2)
        tri.refinement_edge = 1;
      sa = -sa;
    }
    double scale = std::max({1.0, dist(m.vertices[tri.v[0]], m.vertices[tri.v[1]]),
                             dist(m.vertices[tri.v[1]], m.vertices[tri.v[2]])});
    if (!(sa > 1e-14 * scale * scale))
      throw std::invalid_argument("triangle " + std::to_string(t) + " has zero or negative area");
    m.area[t] = sa;

    for (int k = 0; k < 3; ++k) {
      index_t a = tri.v[(k + 1) % 3];
      index_t b = tri.v[(k + 2) % 3];
      m.diam[t] = std::max(m.diam[t], dist(m.vertices[a], m.vertices[b]));
      auto key = std::minmax(a, b);
      auto it = edge_ids.find(key);
      index_t e;
      if (it == edge_ids.end()) {
        e = m.num_edges();
        edge_ids.emplace(key, e);
        Edge ed;
        ed.v = {key.first, key.second};
        ed.elems = {t, -1};
        ed.length = dist(m.vertices[key.first], m.vertices[key.second]);
        m.edges.push_back(ed);
      } else {
        e = it->second;
        Edge& ed = m.edges[e];
        if (ed.elems[1] >= 0)
          throw std::invalid_argument("non-conforming input: edge shared by more than two triangles");
        if (ed.elems[0] == t) throw std::invalid_argument("degenerate triangle repeats an edge");
        ed.elems[1] = t;
        if (ed.elems[0] > ed.elems[1]) std::swap(ed.elems[0], ed.elems[1]);
      }
      m.triangle_edges[t][k] = e;
    }

    if (tri.refinement_edge < 0 || tri.refinement_edge > 2)
      throw std::invalid_argument("refinement edge index out of range");
  }

  // re-resolve triangle_edges after possible elems reordering (ids unchanged)

  // unit normals: from elems[0] toward elems[1], outward on the boundary
  for (Edge& ed : m.edges) {
    const Vertex& a = m.vertices[ed.v[0]];
    const Vertex& b = m.vertices[ed.v[1]];
    double nx = (b.y - a.y) / ed.length;
    double ny = -(b.x - a.x) / ed.length;
    const Triangle& t0 = m.triangles[ed.elems[0]];
    double cx = (m.vertices[t0.v[0]].x + m.vertices[t0.v[1]].x + m.vertices[t0.v[2]].x) / 3.0;
    double cy = (m.vertices[t0.v[0]].y + m.vertices[t0.v[1]].y + m.vertices[t0.v[2]].y) / 3.0;
    double mx = 0.5 * (a.x + b.x), my = 0.5 * (a.y + b.y);
    // must point away from elems[0]
    if ((mx - cx) * nx + (my - cy) * ny < 0.0) {
      nx = -nx;
      ny = -ny;
    }
    ed.nx = nx;
    ed.ny = ny;
  }

  for (auto& v : m.vertices) v.on_boundary = false;
  for (const Edge& ed : m.edges) {
    if (ed.boundary()) {
      m.vertices[ed.v[0]].on_boundary = true;
      m.vertices[ed.v[1]].on_boundary = true;
    }
  }

  m.vertex_patch.assign(nv, {});
  for (index_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) m.vertex_patch[m.triangles[t].v[k]].push_back(t);

  if (validate) {
    // duplicate triangles (same vertex set)
    std::unordered_map<std::uint64_t, std::vector<index_t>> seen;
    for (index_t t = 0; t < nt; ++t) {
      std::array<index_t, 3> s = m.triangles[t].v;
      std::sort(s.begin(), s.end());
      std::uint64_t h = (static_cast<std::uint64_t>(s[0]) * 1000003u + s[1]) * 1000003u + s[2];
      for (index_t o : seen[h]) {
        std::array<index_t, 3> so = m.triangles[o].v;
        std::sort(so.begin(), so.end());
        if (so == s) throw std::invalid_argument("duplicate triangle in input");
      }
      seen[h].push_back(t);
    }

    // hanging vertices: a vertex in the interior of an edge with a single
    // adjacent triangle (interior edges of a conforming mesh always have two)
    for (const Edge& ed : m.edges) {
      if (!ed.boundary()) continue;
      const Vertex& a = m.vertices[ed.v[0]];
      const Vertex& b = m.vertices[ed.v[1]];
      for (index_t v = 0; v < nv; ++v) {
        if (v == ed.v[0] || v == ed.v[1]) continue;
        const Vertex& p = m.vertices[v];
        double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (std::abs(cross) > 1e-12 * ed.length * ed.length) continue;
        double dot = (b.x - a.x) * (p.x - a.x) + (b.y - a.y) * (p.y - a.y);
        double t = dot / (ed.length * ed.length);
        if (t > 1e-12 && t < 1.0 - 1e-12)
          throw std::invalid_argument("non-conforming input: hanging vertex " + std::to_string(v));
      }
    }
  }
}

}  // namespace

int Mesh::local_vertex(index_t t, index_t v) const {
  for (int k = 0; k < 3; ++k)
    if (triangles[t].v[k] == v) return k;
  throw std::invalid_argument("vertex not in triangle");
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : area) s += a;
  return s;
}

Mesh build_mesh(std::vector<Vertex> vertices, std::vector<std::array<index_t, 3>> tris,
                std::vector<int> refinement_edges) {
  Mesh m;
  m.vertices = std::move(vertices);
  m.triangles.resize(tris.size());
  if (!refinement_edges.empty() && refinement_edges.size() != tris.size())
    throw std::invalid_argument("refinement_edges size mismatch");
  for (std::size_t t = 0; t < tris.size(); ++t) {
    m.triangles[t].v = tris[t];
    m.triangles[t].refinement_edge = refinement_edges.empty() ? 0 : refinement_edges[t];
  }
  if (refinement_edges.empty()) {
    // longest edge, ties broken by the smallest opposite-vertex id
    for (auto& tri : m.triangles) {
      double best = -1.0;
      int best_k = 0;
      for (int k = 0; k < 3; ++k) {
        const Vertex& a = m.vertices[tri.v[(k + 1) % 3]];
        const Vertex& b = m.vertices[tri.v[(k + 2) % 3]];
        double len = dist(a, b);
        if (len > best + 1e-14 * std::max(1.0, best) ||
            (std::abs(len - best) <= 1e-14 * std::max(1.0, best) && tri.v[k] < tri.v[best_k])) {
          best = len;
          best_k = k;
        }
      }
      tri.refinement_edge = best_k;
    }
  }
  finalize(m, true);
  return m;
}

Mesh initial_domain(int example_id) {
  double x0, y0;
  int nx, ny;
  double cell;
  switch (example_id) {
    case 1: x0 = -1.5; y0 = -1.5; nx = 4; ny = 4; cell = 0.75; break;
    case 2: x0 = -2.0; y0 = -2.0; nx = 4; ny = 4; cell = 1.0; break;
    case 3: x0 = -2.0; y0 = -1.0; nx = 8; ny = 4; cell = 0.5; break;
    default: throw std::invalid_argument("unknown example id " + std::to_string(example_id));
  }

  std::vector<Vertex> verts;
  std::vector<std::array<index_t, 3>> tris;
  std::vector<int> ref;

  std::vector<index_t> grid(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
  auto grid_vertex = [&](int i, int j) -> index_t {
    index_t& id = grid[static_cast<std::size_t>(j * (nx + 1) + i)];
    if (id < 0) {
      id = static_cast<index_t>(verts.size());
      verts.push_back({x0 + cell * i, y0 + cell * j, false});
    }
    return id;
  };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double cx = x0 + cell * (i + 0.5);
      double cy = y0 + cell * (j + 0.5);
      // example 2 drops the quadrant [0,2) x (-2,0]
      if (example_id == 2 && cx > 0.0 && cy < 0.0) continue;

      index_t bl = grid_vertex(i, j);
      index_t br = grid_vertex(i + 1, j);
      index_t tr = grid_vertex(i + 1, j + 1);
      index_t tl = grid_vertex(i, j + 1);
      index_t c = static_cast<index_t>(verts.size());
      verts.push_back({cx, cy, false});

      // four criss-cross triangles, outer side opposite the center vertex;
      // the outer side is the longest edge, so it is the refinement edge
      tris.push_back({bl, br, c});
      tris.push_back({br, tr, c});
      tris.push_back({tr, tl, c});
      tris.push_back({tl, bl, c});
      for (int r = 0; r < 4; ++r) ref.push_back(2);
    }
  }

  return build_mesh(std::move(verts), std::move(tris), std::move(ref));
}

Refinement bisect(const Mesh& mesh, const std::vector<index_t>& marked) {
  const index_t nt = mesh.num_triangles();
  for (index_t t : marked)
    if (t < 0 || t >= nt) throw std::invalid_argument("marked element id out of range");

  // Closure: an edge gets split iff it is marked here. Whenever a triangle has
  // any marked edge, its refinement edge must be marked too; propagate with a
  // work stack until stable. Terminates because edges are marked at most once.
  std::vector<char> edge_marked(mesh.num_edges(), 0);
  std::vector<index_t> stack;
  auto mark_edge = [&](index_t e) {
    if (edge_marked[e]) return;
    edge_marked[e] = 1;
    const Edge& ed = mesh.edges[e];
    stack.push_back(ed.elems[0]);
    if (ed.elems[1] >= 0) stack.push_back(ed.elems[1]);
  };
  for (index_t t : marked) mark_edge(mesh.triangle_edges[t][mesh.triangles[t].refinement_edge]);
  while (!stack.empty()) {
    index_t t = stack.back();
    stack.pop_back();
    const auto& te = mesh.triangle_edges[t];
    bool any = edge_marked[te[0]] || edge_marked[te[1]] || edge_marked[te[2]];
    index_t re = te[mesh.triangles[t].refinement_edge];
    if (any && !edge_marked[re]) mark_edge(re);
  }

  Refinement out;
  Mesh& nm = out.mesh;
  nm.vertices = mesh.vertices;

  // midpoint vertices in ascending edge-id order (deterministic numbering)
  std::vector<index_t> midpoint(mesh.num_edges(), -1);
  for (index_t e = 0; e < mesh.num_edges(); ++e) {
    if (!edge_marked[e]) continue;
    const Edge& ed = mesh.edges[e];
    midpoint[e] = nm.num_vertices();
    nm.vertices.push_back({0.5 * (mesh.vertices[ed.v[0]].x + mesh.vertices[ed.v[1]].x),
                           0.5 * (mesh.vertices[ed.v[0]].y + mesh.vertices[ed.v[1]].y), false});
  }

  out.children_range.resize(nt);
  auto emit = [&](index_t v0, index_t v1, index_t v2, int re) {
    nm.triangles.push_back({{v0, v1, v2}, re});
  };

  for (index_t t = 0; t < nt; ++t) {
    index_t begin = nm.num_triangles();
    const Triangle& tri = mesh.triangles[t];
    const auto& te = mesh.triangle_edges[t];
    int k = tri.refinement_edge;
    if (midpoint[te[k]] < 0) {
      nm.triangles.push_back(tri);
    } else {
      // split through the refinement edge; the midpoint becomes the newest
      // vertex (peak) of both children
      index_t p = tri.v[k];
      index_t a = tri.v[(k + 1) % 3];
      index_t b = tri.v[(k + 2) % 3];
      index_t mm = midpoint[te[k]];
      // child (p,a,m): refinement edge (p,a) = parent edge opposite b
      index_t ea = te[(k + 2) % 3];
      if (midpoint[ea] < 0) {
        emit(p, a, mm, 2);
      } else {
        index_t m2 = midpoint[ea];
        emit(mm, p, m2, 2);
        emit(mm, m2, a, 1);
      }
      // child (p,m,b): refinement edge (b,p) = parent edge opposite a
      index_t eb = te[(k + 1) % 3];
      if (midpoint[eb] < 0) {
        emit(p, mm, b, 1);
      } else {
        index_t m2 = midpoint[eb];
        emit(mm, b, m2, 2);
        emit(mm, m2, p, 1);
      }
    }
    out.children_range[t] = {begin, nm.num_triangles()};
  }

  out.parent.resize(nm.num_triangles());
  for (index_t t = 0; t < nt; ++t)
    for (index_t c = out.children_range[t][0]; c < out.children_range[t][1]; ++c) out.parent[c] = t;

  finalize(nm, false);
  return out;
}

double h_min(const Mesh& mesh) {
  if (mesh.triangles.empty()) throw std::invalid_argument("h_min of an empty mesh");
  double h = std::numeric_limits<double>::max();
  for (double d : mesh.diam) h = std::min(h, d);
  return h;
}

double min_angle(const Mesh& mesh) {
  double worst = std::numeric_limits<double>::max();
  for (const Triangle& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vertex& a = mesh.vertices[tri.v[k]];
      const Vertex& b = mesh.vertices[tri.v[(k + 1) % 3]];
      const Vertex& c = mesh.vertices[tri.v[(k + 2) % 3]];
      double ux = b.x - a.x, uy = b.y - a.y;
      double vx = c.x - a.x, vy = c.y - a.y;
      double ang = std::acos(std::clamp((ux * vx + uy * vy) / (std::hypot(ux, uy) * std::hypot(vx, vy)),
                                        -1.0, 1.0));
      worst = std::min(worst, ang);
    }
  }
  return worst;
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::json j;
  auto& jv = j["vertices"] = nlohmann::json::array();
  for (const Vertex& v : mesh.vertices) jv.push_back({v.x, v.y});
  auto& jt = j["triangles"] = nlohmann::json::array();
  auto& jr = j["refinement_edges"] = nlohmann::json::array();
  for (const Triangle& t : mesh.triangles) {
    jt.push_back({t.v[0], t.v[1], t.v[2]});
    jr.push_back(t.refinement_edge);
  }
  return j.dump();
}

Mesh mesh_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Vertex> verts;
  for (const auto& v : j.at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>(), false});
  std::vector<std::array<index_t, 3>> tris;
  for (const auto& t : j.at("triangles"))
    tris.push_back({t.at(0).get<index_t>(), t.at(1).get<index_t>(), t.at(2).get<index_t>()});
  std::vector<int> ref;
  if (j.contains("refinement_edges"))
    for (const auto& r : j.at("refinement_edges")) ref.push_back(r.get<int>());
  return build_mesh(std::move(verts), std::move(tris), std::move(ref));
}

}  // namespace odg
