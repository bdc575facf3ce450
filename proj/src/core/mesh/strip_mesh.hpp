#pragma once

#include <string>
#include <vector>

#include "geometry/interface.hpp"

namespace lamlab::mesh {

struct MeshParams {
  int nx = 64;            // columns
  int ny = 8;             // rows per strip
  double eta_min = 1e-12; // minimal cell height clamp
};

struct Triangle {
  std::array<int, 3> v{};
  int region = 1;
};

struct InterfaceEdge {
  int v0 = 0;
  int v1 = 0;
  int iface = 1;
  int elem_lo = 0;  // element on the lower side
  int elem_hi = 0;  // element on the upper side
};

enum class BoundaryKind {
  TopBottom,  // Dirichlet on y = -1 and y = +1, natural sides
  All,        // Dirichlet on the whole outer boundary
};

// Interface-fitted structured triangulation of [-1,1]^2: columns at
// x_i = -1 + 2i/nx, ny rows graded uniformly inside every strip, each quad
// split along its shorter diagonal. Interfaces are unions of element edges.
struct StripMesh {
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  std::vector<InterfaceEdge> interface_edges;
  std::vector<int> dirichlet;
  MeshParams params;
  BoundaryKind boundary = BoundaryKind::TopBottom;
  int m = 0;  // interior interface count
  int clamped_cells = 0;

  int rows() const { return (m + 1) * params.ny; }  // cells per column
  int vid(int col, int row) const { return col * (rows() + 1) + row; }
  // 2 triangles per quad, grouped by column then level
  int eid(int col, int level, int which) const {
    return 2 * (col * rows() + level) + which;
  }

  Point2 centroid(int e) const;
  double signed_area(int e) const;
  // gradient of the P1 interpolant of nodal values on element e
  std::array<double, 2> p1_gradient(int e, const std::vector<double>& nodal) const;
  // element containing (x, y); -1 if outside
  int locate(double x, double y) const;
};

// Builds the mesh; hard error if interfaces are out of order beyond
// -eta_min at some column. Cell heights below eta_min are raised to
// eta_min (counted), which can locally relax the interface fit by up to
// ny * eta_min.
StripMesh build_strip_mesh(const geom::InterfaceStack& stack, const MeshParams& params,
                           BoundaryKind boundary = BoundaryKind::TopBottom);

struct MeshQuality {
  double min_signed_area = 0.0;
  double max_signed_area = 0.0;
  double min_angle_deg = 0.0;
  double max_aspect_ratio = 0.0;  // longest/shortest edge
  int clamped_cells = 0;
  std::vector<double> strip_min_gap;  // per strip, min resolved gap over columns
};

MeshQuality mesh_quality(const StripMesh& mesh);

std::string mesh_to_json(const StripMesh& mesh);
StripMesh mesh_from_json(const std::string& text);

}  // namespace lamlab::mesh
