#pragma once

#include <hcurl/common.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcurl {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Globally oriented edge, tail < head.
struct Edge {
  Index tail = kNoIndex;
  Index head = kNoIndex;
  bool operator==(const Edge&) const = default;
};

enum class CellKind { triangle, quadrilateral };

/// Unstructured 2D mesh of triangles or quadrilaterals (not mixed).
///
/// Cells are counterclockwise. Local edge k of a cell joins local vertices k
/// and k+1 (cyclically); cell_edge_signs holds +1 when the counterclockwise
/// traversal runs along the global orientation tail -> head.
struct Mesh2D {
  CellKind kind = CellKind::triangle;
  std::vector<Point> vertices;
  std::vector<std::array<Index, 4>> cells;
  std::vector<Edge> edges;
  std::vector<std::array<Index, 4>> cell_edges;
  std::vector<std::array<std::int8_t, 4>> cell_edge_signs;
  std::vector<char> boundary_edge;
  std::vector<char> boundary_vertex;

  int vertices_per_cell() const noexcept { return kind == CellKind::triangle ? 3 : 4; }
  Index num_vertices() const noexcept { return static_cast<Index>(vertices.size()); }
  Index num_cells() const noexcept { return static_cast<Index>(cells.size()); }
  Index num_edges() const noexcept { return static_cast<Index>(edges.size()); }

  Point centroid(Index cell) const;
  double signed_area(Index cell) const;
  /// Edge index joining a and b, or kNoIndex.
  Index find_edge(Index a, Index b) const;
};

/// Builds edges, orientations and boundary flags from vertices and cells.
/// Throws on clockwise cells, dangling vertices and non-manifold edges.
Mesh2D build_mesh(CellKind kind, std::vector<Point> vertices, std::vector<std::array<Index, 4>> cells);

/// Unit square, (2^L+1)^2 vertices, every square split along its SW-NE diagonal.
Mesh2D uniform_tri_mesh(int levels);
/// Unit square, 4^L quadrilaterals.
Mesh2D uniform_quad_mesh(int levels);

struct VertexParent {
  enum class Kind : std::uint8_t { vertex, edge_midpoint, cell_center };
  Kind kind = Kind::vertex;
  Index index = kNoIndex;
};

struct RefinementMap {
  /// Per coarse edge: fine child from the coarse tail to the midpoint, then the
  /// child from the midpoint to the coarse head.
  std::vector<std::array<Index, 2>> coarse_edge_children;
  std::vector<VertexParent> vertex_parent;
  std::vector<std::array<Index, 4>> cell_children;
  /// Fine vertex index of each coarse vertex.
  std::vector<Index> coarse_vertex_to_fine;
  /// Fine vertex index of each coarse edge midpoint.
  std::vector<Index> edge_midpoint;
};

/// Uniform refinement: red refinement for triangles, 4-way split with a center
/// vertex for quadrilaterals. Fine numbering lists coarse vertices first, then
/// edge midpoints, then cell centers.
std::pair<Mesh2D, RefinementMap> refine(const Mesh2D& coarse);

/// Relabels fine vertices (new index = new_of_old[old]) and rebuilds edges and
/// the refinement map accordingly.
std::pair<Mesh2D, RefinementMap> renumber_fine_vertices(const Mesh2D& fine, const RefinementMap& map,
                                                        std::span<const Index> new_of_old);

/// new_of_old relabelling that sorts vertices by (y, x).
std::vector<Index> row_major_order(const Mesh2D& mesh);

/// Text format: "NV NC", NV lines "x y", NC lines of 3 or 4 vertex indices.
/// Clockwise cells are flipped and reported through `warnings`.
Mesh2D load_mesh(std::istream& is, std::vector<std::string>* warnings = nullptr);
Mesh2D load_mesh_text(const std::string& text, std::vector<std::string>* warnings = nullptr);
void save_mesh(std::ostream& os, const Mesh2D& mesh);

/// Distinct vertices, edges and cells satisfy V - E + C == 1 for a disk.
int euler_characteristic(const Mesh2D& mesh);

/// Empty string when every structural invariant holds.
std::string validate_mesh(const Mesh2D& mesh);

} // namespace hcurl
