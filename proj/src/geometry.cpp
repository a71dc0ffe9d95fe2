#include "hichom/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hichom/errors.hpp"

namespace hichom {

UnitCellGeometry UnitCellGeometry::disk(double radius) {
  UnitCellGeometry g;
  g.kind = Kind::DiskInclusion;
  g.radius = radius;
  return g;
}

UnitCellGeometry UnitCellGeometry::laminate(double layer_fraction) {
  UnitCellGeometry g;
  g.kind = Kind::Laminate;
  g.layer_fraction = layer_fraction;
  return g;
}

UnitCellGeometry UnitCellGeometry::indicator(std::vector<std::vector<bool>> grid) {
  UnitCellGeometry g;
  g.kind = Kind::IndicatorGrid;
  g.grid = std::move(grid);
  return g;
}

void UnitCellGeometry::validate() const {
  switch (kind) {
    case Kind::DiskInclusion:
      if (!(radius > 0.0 && radius < 0.5))
        throw Error(ErrorCode::InvalidGeometry, "radius must lie in (0, 0.5), got " + std::to_string(radius));
      break;
    case Kind::Laminate:
      if (!(layer_fraction > 0.0 && layer_fraction < 1.0))
        throw Error(ErrorCode::InvalidGeometry,
                    "layerFraction must lie in (0, 1), got " + std::to_string(layer_fraction));
      break;
    case Kind::IndicatorGrid: {
      if (grid.empty() || grid.front().empty())
        throw Error(ErrorCode::InvalidGeometry, "indicator grid must be non-empty");
      const size_t cols = grid.front().size();
      bool any_true = false;
      for (const auto& row : grid) {
        if (row.size() != cols)
          throw Error(ErrorCode::InvalidGeometry, "indicator grid rows must have equal length");
        for (bool b : row) any_true = any_true || b;
      }
      if (!any_true)
        throw Error(ErrorCode::InvalidGeometry, "indicator grid has no inclusion cells");
      break;
    }
  }
}

bool UnitCellGeometry::contains(const Vec2& y) const {
  switch (kind) {
    case Kind::DiskInclusion:
      return (y - Vec2(0.5, 0.5)).squaredNorm() < radius * radius;
    case Kind::Laminate:
      return y[0] < layer_fraction;
    case Kind::IndicatorGrid: {
      const int rows = static_cast<int>(grid.size());
      const int cols = static_cast<int>(grid.front().size());
      const int ix = std::clamp(static_cast<int>(std::floor(y[0] * cols)), 0, cols - 1);
      const int iy = std::clamp(static_cast<int>(std::floor(y[1] * rows)), 0, rows - 1);
      return grid[iy][ix];
    }
  }
  return false;
}

double UnitCellGeometry::inclusion_area() const {
  switch (kind) {
    case Kind::DiskInclusion:
      return M_PI * radius * radius;
    case Kind::Laminate:
      return layer_fraction;
    case Kind::IndicatorGrid: {
      size_t count = 0, total = 0;
      for (const auto& row : grid) {
        total += row.size();
        count += static_cast<size_t>(std::count(row.begin(), row.end(), true));
      }
      return static_cast<double>(count) / static_cast<double>(total);
    }
  }
  return 0.0;
}

Vec2 StructuredMesh::element_centroid(int e) const {
  const auto [ex, ey] = element_cell(e);
  return origin + Vec2((ex + 0.5) * spacing, (ey + 0.5) * spacing);
}

bool StructuredMesh::is_boundary_node(int v) const {
  const int ix = v % (n + 1);
  const int iy = v / (n + 1);
  return ix == 0 || ix == n || iy == 0 || iy == n;
}

bool StructuredMesh::is_unit_cell(double tol) const {
  return origin.cwiseAbs().maxCoeff() <= tol && std::abs(edge_length - 1.0) <= tol;
}

int StructuredMesh::inclusion_element_count() const {
  return static_cast<int>(std::count(element_phase.begin(), element_phase.end(), Phase::Inclusion));
}

double StructuredMesh::inclusion_fraction() const {
  return static_cast<double>(inclusion_element_count()) / static_cast<double>(element_count());
}

namespace {

MeshPtr build_square_mesh(double edge_length, int n) {
  auto mesh = std::make_shared<StructuredMesh>();
  mesh->n = n;
  mesh->edge_length = edge_length;
  mesh->spacing = edge_length / n;
  mesh->nodes.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int iy = 0; iy <= n; ++iy)
    for (int ix = 0; ix <= n; ++ix)
      mesh->nodes.emplace_back(ix * mesh->spacing, iy * mesh->spacing);
  mesh->elements.reserve(static_cast<size_t>(n) * n);
  for (int ey = 0; ey < n; ++ey)
    for (int ex = 0; ex < n; ++ex)
      mesh->elements.push_back({mesh->node_index(ex, ey), mesh->node_index(ex + 1, ey),
                                mesh->node_index(ex + 1, ey + 1), mesh->node_index(ex, ey + 1)});
  mesh->element_phase.assign(mesh->elements.size(), Phase::Matrix);
  return mesh;
}

}  // namespace

MeshPtr build_unit_cell_mesh(const UnitCellGeometry& geometry, int n) {
  geometry.validate();
  if (n < 4) throw Error(ErrorCode::MeshTooCoarse, "unit cell resolution n must be >= 4, got " + std::to_string(n));
  auto mesh = std::const_pointer_cast<StructuredMesh>(build_square_mesh(1.0, n));
  for (int e = 0; e < mesh->element_count(); ++e)
    mesh->element_phase[e] = geometry.contains(mesh->element_centroid(e)) ? Phase::Inclusion : Phase::Matrix;
  return mesh;
}

MeshPtr build_macro_mesh(double edge_length, int n) {
  if (!(edge_length > 0.0))
    throw Error(ErrorCode::InvalidGeometry, "edgeLength must be positive, got " + std::to_string(edge_length));
  if (n < 4) throw Error(ErrorCode::MeshTooCoarse, "macro resolution n must be >= 4, got " + std::to_string(n));
  return build_square_mesh(edge_length, n);
}

PeriodicDofMap build_periodic_map(const StructuredMesh& mesh) {
  if (!mesh.is_unit_cell()) throw Error(ErrorCode::NonUnitCell, "periodic map requires a mesh over [0,1]^2");
  const int n = mesh.n;
  PeriodicDofMap map;
  map.master_of.resize(mesh.node_count());
  for (int iy = 0; iy <= n; ++iy)
    for (int ix = 0; ix <= n; ++ix)
      map.master_of[mesh.node_index(ix, iy)] = mesh.node_index(ix % n, iy % n);
  map.interior_count = (n - 1) * (n - 1);
  map.periodic_count = n * n;
  return map;
}

}  // namespace hichom
