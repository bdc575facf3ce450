#include "mesh/strip_mesh.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace lamlab::mesh {

Point2 StripMesh::centroid(int e) const {
  const auto& t = triangles[static_cast<std::size_t>(e)];
  Point2 c;
  for (int i = 0; i < 3; ++i) {
    c.x += vertices[static_cast<std::size_t>(t.v[i])].x / 3.0;
    c.y += vertices[static_cast<std::size_t>(t.v[i])].y / 3.0;
  }
  return c;
}

double StripMesh::signed_area(int e) const {
  const auto& t = triangles[static_cast<std::size_t>(e)];
  const Point2 a = vertices[static_cast<std::size_t>(t.v[0])];
  const Point2 b = vertices[static_cast<std::size_t>(t.v[1])];
  const Point2 c = vertices[static_cast<std::size_t>(t.v[2])];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::array<double, 2> StripMesh::p1_gradient(int e, const std::vector<double>& nodal) const {
  const auto& t = triangles[static_cast<std::size_t>(e)];
  const Point2 a = vertices[static_cast<std::size_t>(t.v[0])];
  const Point2 b = vertices[static_cast<std::size_t>(t.v[1])];
  const Point2 c = vertices[static_cast<std::size_t>(t.v[2])];
  const double ua = nodal[static_cast<std::size_t>(t.v[0])];
  const double ub = nodal[static_cast<std::size_t>(t.v[1])];
  const double uc = nodal[static_cast<std::size_t>(t.v[2])];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  return {((ub - ua) * (c.y - a.y) - (uc - ua) * (b.y - a.y)) / det,
          ((uc - ua) * (b.x - a.x) - (ub - ua) * (c.x - a.x)) / det};
}

int StripMesh::locate(double x, double y) const {
  const int nx = params.nx;
  if (x < -1.0 - 1e-12 || x > 1.0 + 1e-12) return -1;
  int col = static_cast<int>(std::floor((x + 1.0) * nx / 2.0));
  col = std::clamp(col, 0, nx - 1);
  const int R = rows();
  auto level_y = [&](int row, double xq) {
    const Point2 a = vertices[static_cast<std::size_t>(vid(col, row))];
    const Point2 b = vertices[static_cast<std::size_t>(vid(col + 1, row))];
    const double t = (b.x - a.x) > 0.0 ? (xq - a.x) / (b.x - a.x) : 0.0;
    return a.y + t * (b.y - a.y);
  };
  if (y < level_y(0, x) - 1e-12 || y > level_y(R, x) + 1e-12) return -1;
  int lo = 0, hi = R;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (y >= level_y(mid, x))
      lo = mid;
    else
      hi = mid;
  }
  // pick the triangle of quad (col, lo) containing the point
  for (int w = 0; w < 2; ++w) {
    const int e = eid(col, lo, w);
    const auto& t = triangles[static_cast<std::size_t>(e)];
    bool inside = true;
    for (int i = 0; i < 3 && inside; ++i) {
      const Point2 a = vertices[static_cast<std::size_t>(t.v[i])];
      const Point2 b = vertices[static_cast<std::size_t>(t.v[(i + 1) % 3])];
      const double cross = (b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y);
      if (cross < -1e-12) inside = false;
    }
    if (inside) return e;
  }
  return eid(col, lo, 0);
}

StripMesh build_strip_mesh(const geom::InterfaceStack& stack, const MeshParams& params,
                           BoundaryKind boundary) {
  if (stack.dimension() != 2)
    throw ValidationError("build_strip_mesh: solver meshes are two-dimensional");
  if (params.nx < 2 || params.ny < 1 || params.eta_min <= 0.0)
    throw ValidationError("build_strip_mesh: need nx >= 2, ny >= 1, eta_min > 0");

  StripMesh mesh;
  mesh.params = params;
  mesh.boundary = boundary;
  mesh.m = stack.count();
  const int nx = params.nx;
  const int ny = params.ny;
  const int m = mesh.m;
  const int R = (m + 1) * ny;

  mesh.vertices.resize(static_cast<std::size_t>((nx + 1) * (R + 1)));
  for (int i = 0; i <= nx; ++i) {
    const double xi = -1.0 + 2.0 * i / nx;
    const double xq = std::clamp(xi, -1.0 + 1e-15, 1.0 - 1e-15);  // interface eval column
    double y = -1.0;
    mesh.vertices[static_cast<std::size_t>(mesh.vid(i, 0))] = {xi, y};
    for (int j = 1; j <= m + 1; ++j) {
      const double target = stack.height(j, &xq);
      const double base = y;
      if (target - base < -params.eta_min)
        throw ValidationError("build_strip_mesh: interface ordering violated at column x=" +
                              std::to_string(xi));
      const double cell = (target - base) / ny;
      for (int r = 1; r <= ny; ++r) {
        double ideal = base + r * cell;
        if (ideal < y + params.eta_min) {
          ideal = y + params.eta_min;
          ++mesh.clamped_cells;
        }
        y = ideal;
        mesh.vertices[static_cast<std::size_t>(mesh.vid(i, (j - 1) * ny + r))] = {xi, y};
      }
    }
  }

  mesh.triangles.resize(static_cast<std::size_t>(2 * nx * R));
  for (int i = 0; i < nx; ++i) {
    for (int l = 0; l < R; ++l) {
      const int v00 = mesh.vid(i, l);
      const int v10 = mesh.vid(i + 1, l);
      const int v11 = mesh.vid(i + 1, l + 1);
      const int v01 = mesh.vid(i, l + 1);
      const int region = l / ny + 1;
      const double d1 = dist(mesh.vertices[static_cast<std::size_t>(v00)],
                              mesh.vertices[static_cast<std::size_t>(v11)]);
      const double d2 = dist(mesh.vertices[static_cast<std::size_t>(v10)],
                              mesh.vertices[static_cast<std::size_t>(v01)]);
      Triangle t0, t1;
      if (d1 <= d2) {
        t0.v = {v00, v10, v11};
        t1.v = {v00, v11, v01};
      } else {
        t0.v = {v00, v10, v01};
        t1.v = {v10, v11, v01};
      }
      t0.region = t1.region = region;
      mesh.triangles[static_cast<std::size_t>(mesh.eid(i, l, 0))] = t0;
      mesh.triangles[static_cast<std::size_t>(mesh.eid(i, l, 1))] = t1;
    }
  }

  for (int j = 1; j <= m; ++j) {
    const int row = j * ny;
    for (int i = 0; i < nx; ++i) {
      InterfaceEdge e;
      e.v0 = mesh.vid(i, row);
      e.v1 = mesh.vid(i + 1, row);
      e.iface = j;
      e.elem_lo = mesh.eid(i, row - 1, 1);  // upper triangle of the quad below
      e.elem_hi = mesh.eid(i, row, 0);      // lower triangle of the quad above
      mesh.interface_edges.push_back(e);
    }
  }

  for (int i = 0; i <= nx; ++i) {
    mesh.dirichlet.push_back(mesh.vid(i, 0));
    mesh.dirichlet.push_back(mesh.vid(i, R));
  }
  if (boundary == BoundaryKind::All) {
    for (int r = 1; r < R; ++r) {
      mesh.dirichlet.push_back(mesh.vid(0, r));
      mesh.dirichlet.push_back(mesh.vid(nx, r));
    }
  }
  std::sort(mesh.dirichlet.begin(), mesh.dirichlet.end());
  return mesh;
}

MeshQuality mesh_quality(const StripMesh& mesh) {
  MeshQuality q;
  q.clamped_cells = mesh.clamped_cells;
  q.min_signed_area = 1e300;
  q.max_signed_area = -1e300;
  q.min_angle_deg = 180.0;
  q.max_aspect_ratio = 0.0;
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const double area = mesh.signed_area(static_cast<int>(e));
    q.min_signed_area = std::min(q.min_signed_area, area);
    q.max_signed_area = std::max(q.max_signed_area, area);
    const auto& t = mesh.triangles[e];
    double elen[3];
    for (int i = 0; i < 3; ++i)
      elen[i] = dist(mesh.vertices[static_cast<std::size_t>(t.v[i])],
                      mesh.vertices[static_cast<std::size_t>(t.v[(i + 1) % 3])]);
    const double emin = std::min({elen[0], elen[1], elen[2]});
    const double emax = std::max({elen[0], elen[1], elen[2]});
    if (emin > 0.0) q.max_aspect_ratio = std::max(q.max_aspect_ratio, emax / emin);
    for (int i = 0; i < 3; ++i) {
      const Point2 a = mesh.vertices[static_cast<std::size_t>(t.v[i])];
      const Point2 b = mesh.vertices[static_cast<std::size_t>(t.v[(i + 1) % 3])];
      const Point2 c = mesh.vertices[static_cast<std::size_t>(t.v[(i + 2) % 3])];
      const double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - a.x, vy = c.y - a.y;
      const double nu = std::hypot(ux, uy), nv = std::hypot(vx, vy);
      if (nu == 0.0 || nv == 0.0) continue;
      const double cosv = std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0);
      q.min_angle_deg = std::min(q.min_angle_deg, std::acos(cosv) * 180.0 / M_PI);
    }
  }
  q.strip_min_gap.assign(static_cast<std::size_t>(mesh.m + 1), 1e300);
  const int ny = mesh.params.ny;
  for (int j = 0; j <= mesh.m; ++j)
    for (int i = 0; i <= mesh.params.nx; ++i) {
      const double lo = mesh.vertices[static_cast<std::size_t>(mesh.vid(i, j * ny))].y;
      const double hi = mesh.vertices[static_cast<std::size_t>(mesh.vid(i, (j + 1) * ny))].y;
      q.strip_min_gap[static_cast<std::size_t>(j)] =
          std::min(q.strip_min_gap[static_cast<std::size_t>(j)], hi - lo);
    }
  return q;
}

std::string mesh_to_json(const StripMesh& mesh) {
  nlohmann::json doc;
  auto& verts = doc["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices) verts.push_back({v.x, v.y});
  auto& tris = doc["triangles"] = nlohmann::json::array();
  for (const auto& t : mesh.triangles) tris.push_back({t.v[0], t.v[1], t.v[2], t.region});
  auto& edges = doc["interface_edges"] = nlohmann::json::array();
  for (const auto& e : mesh.interface_edges)
    edges.push_back({e.v0, e.v1, e.iface, e.elem_lo, e.elem_hi});
  doc["dirichlet"] = mesh.dirichlet;
  doc["params"] = {{"nx", mesh.params.nx}, {"ny", mesh.params.ny},
                   {"eta_min", mesh.params.eta_min}, {"m", mesh.m},
                   {"clamped_cells", mesh.clamped_cells}};
  return doc.dump();
}

StripMesh mesh_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  StripMesh mesh;
  for (const auto& v : doc.at("vertices"))
    mesh.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  for (const auto& t : doc.at("triangles")) {
    Triangle tri;
    tri.v = {t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()};
    tri.region = t.at(3).get<int>();
    mesh.triangles.push_back(tri);
  }
  for (const auto& e : doc.at("interface_edges")) {
    InterfaceEdge edge;
    edge.v0 = e.at(0).get<int>();
    edge.v1 = e.at(1).get<int>();
    edge.iface = e.at(2).get<int>();
    edge.elem_lo = e.at(3).get<int>();
    edge.elem_hi = e.at(4).get<int>();
    mesh.interface_edges.push_back(edge);
  }
  mesh.dirichlet = doc.at("dirichlet").get<std::vector<int>>();
  if (doc.contains("params")) {
    mesh.params.nx = doc["params"].value("nx", 0);
    mesh.params.ny = doc["params"].value("ny", 0);
    mesh.params.eta_min = doc["params"].value("eta_min", 1e-12);
    mesh.m = doc["params"].value("m", 0);
    mesh.clamped_cells = doc["params"].value("clamped_cells", 0);
  }
  return mesh;
}

}  // namespace lamlab::mesh
