#include "odg/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "odg/format.hpp"

namespace odg {

RateFit fit_rate(const std::vector<RunRecord>& records,
                 const std::function<double(const RunRecord&)>& quantity, int k) {
  if (k < 2) throw std::invalid_argument("need at least two points for a rate");
  if (static_cast<int>(records.size()) < k)
    throw std::invalid_argument("fewer records than requested fit window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = static_cast<int>(records.size()) - k; i < static_cast<int>(records.size()); ++i) {
    double q = quantity(records[i]);
    if (!(q > 0.0)) throw std::invalid_argument("rate fit needs positive quantities");
    double x = std::log(static_cast<double>(records[i].dofs));
    double y = std::log(q);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit fit;
  double d = k * sxx - sx * sx;
  fit.slope = (k * sxy - sx * sy) / d;
  fit.intercept = (sy - fit.slope * sx) / k;
  return fit;
}

namespace {

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "level,dofs,h_min,eta1,eta2,eta3,eta4,eta5,eta6,eta_total,linf_error,efficiency_index,pdas_"
      "iters\n";
  for (const RunRecord& r : records) {
    out += std::to_string(r.level) + ',' + std::to_string(r.dofs) + ',' + fmt(r.hmin) + ',' +
           fmt(r.eta1) + ',' + fmt(r.eta2) + ',' + fmt(r.eta3) + ',' + fmt(r.eta4) + ',' +
           fmt(r.eta5) + ',' + fmt(r.eta6) + ',' + fmt(r.eta_total) + ',' + fmt(r.linf_error) +
           ',' + fmt(r.efficiency_index) + ',' + std::to_string(r.pdas_iterations) + '\n';
  }
  return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << records_to_csv(records);
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_svg(const Mesh& mesh, const std::vector<ElementClass>& classes, const std::string& path) {
  if (classes.size() != static_cast<std::size_t>(mesh.num_triangles()))
    throw std::invalid_argument("class array size mismatch");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Vertex& v : mesh.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double size = 800.0;
  double span = std::max(xmax - xmin, ymax - ymin);
  double s = size / span;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.6g %.6g\">\n",
                s * (xmax - xmin), s * (ymax - ymin));
  out << buf;
  for (index_t t = 0; t < mesh.num_triangles(); ++t) {
    const char* fill = classes[t] == ElementClass::Contact       ? "#f3d11a"
                       : classes[t] == ElementClass::FreeBoundary ? "#f3921a"
                                                                  : "none";
    const Triangle& tri = mesh.triangles[t];
    std::string pts;
    for (int k = 0; k < 3; ++k) {
      const Vertex& p = mesh.vertices[tri.v[k]];
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g ", s * (p.x - xmin), s * (ymax - p.y));
      pts += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<polygon points=\"%s\" fill=\"%s\" stroke=\"#404040\" stroke-width=\"0.4\"/>\n",
                  pts.c_str(), fill);
    out << buf;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_solution_json(const Mesh& mesh, const DgFunction& u, const DgFunction& sigma,
                         const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(mesh_to_json(mesh));
  j["u"] = {{"dg_values", u.values}};
  j["sigma"] = {{"dg_values", sigma.values}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace odg
