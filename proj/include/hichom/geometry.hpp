#pragma once

#include <array>
#include <memory>
#include <vector>

#include "hichom/tensor.hpp"

namespace hichom {

enum class Phase { Matrix = 0, Inclusion = 1 };

// Description of the two-phase unit cell Y = [0,1]^2. The inclusion set Y_s is
// either a centered disk, a laminate slab {y0 < layerFraction}, or an
// arbitrary indicator grid.
struct UnitCellGeometry {
  enum class Kind { DiskInclusion, Laminate, IndicatorGrid };

  Kind kind = Kind::DiskInclusion;
  double radius = 0.25;         // DiskInclusion, fraction of the cell edge
  double layer_fraction = 0.5;  // Laminate, volume fraction of Y_s
  std::vector<std::vector<bool>> grid;  // IndicatorGrid, grid[iy][ix], true = Y_s

  static UnitCellGeometry disk(double radius);
  static UnitCellGeometry laminate(double layer_fraction);
  static UnitCellGeometry indicator(std::vector<std::vector<bool>> grid);

  // Throws InvalidGeometry. An all-true indicator grid is accepted (degenerate
  // whole-cell inclusion, used by tests); an all-false one is not.
  void validate() const;

  // Membership test for a point of the unit cell.
  bool contains(const Vec2& y) const;

  // Exact |Y_s| (disk/laminate analytic, grid by cell count).
  double inclusion_area() const;
};

// Axis-aligned quadrilateral grid over a square domain, with per-element
// phase labels. Nodes are ordered x-fastest; element corner order is
// SW, SE, NE, NW (counterclockwise).
struct StructuredMesh {
  int n = 0;                // cells per side
  double edge_length = 1.0;
  double spacing = 0.0;     // edge_length / n
  Vec2 origin = Vec2::Zero();
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> elements;
  std::vector<Phase> element_phase;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }

  int node_index(int ix, int iy) const { return iy * (n + 1) + ix; }
  int element_index(int ex, int ey) const { return ey * n + ex; }
  std::array<int, 2> element_cell(int e) const { return {e % n, e / n}; }

  Vec2 element_centroid(int e) const;
  bool is_boundary_node(int v) const;
  bool is_unit_cell(double tol = 1e-12) const;

  double element_area() const { return spacing * spacing; }
  double total_area() const { return edge_length * edge_length; }
  int inclusion_element_count() const;
  double inclusion_fraction() const;
};

using MeshPtr = std::shared_ptr<const StructuredMesh>;

// Mesh of the unit cell with centroid-rule phase labels. Requires n >= 4.
MeshPtr build_unit_cell_mesh(const UnitCellGeometry& geometry, int n);

// Mesh of the macro domain [0, edgeLength]^2, all elements labeled Matrix.
MeshPtr build_macro_mesh(double edge_length, int n);

// Identification of opposite-face nodes of a unit-cell mesh. master_of is a
// full per-node table (identity on masters); it is idempotent by construction.
struct PeriodicDofMap {
  std::vector<int> master_of;
  int interior_count = 0;  // nodes not on the cell boundary
  int periodic_count = 0;  // reduced node count after identification (n^2)

  bool is_slave(int v) const { return master_of[v] != v; }
};

PeriodicDofMap build_periodic_map(const StructuredMesh& mesh);

}  // namespace hichom
