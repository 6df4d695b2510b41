#pragma once

#include <hcurl/coefficients.hpp>
#include <hcurl/mesh.hpp>
#include <hcurl/sparse.hpp>

#include <array>
#include <vector>

namespace hcurl {

/// Maps between mesh entities and algebraic unknowns.
struct DofMaps {
  /// mesh edge -> edge DoF (kNoIndex when eliminated)
  std::vector<Index> free_edges;
  /// mesh vertex -> gradient column (kNoIndex for boundary vertices)
  std::vector<Index> free_nodes;
  std::vector<Index> dof_edge;
  std::vector<Index> node_vertex;
  bool eliminate_boundary = true;

  Index num_dofs() const noexcept { return static_cast<Index>(dof_edge.size()); }
  Index num_nodes() const noexcept { return static_cast<Index>(node_vertex.size()); }
};

/// With `eliminate_boundary` every boundary edge and vertex is dropped
/// (tangential Dirichlet condition); otherwise all entities are kept.
DofMaps make_dof_maps(const Mesh2D& mesh, bool eliminate_boundary = true);

/// Signed edge-vertex incidence restricted to the free entities:
/// G[e, head] = +1, G[e, tail] = -1.
SparseMatrix discrete_gradient(const Mesh2D& mesh, const DofMaps& dofs);

struct AssemblyOptions {
  bool eliminate_boundary = true;
};

struct CurlCurlSystem {
  SparseMatrix A;
  SparseMatrix As;
  SparseMatrix Am;
  SparseMatrix G;
  double beta = 0.0;
  DofMaps dofs;

  Index size() const noexcept { return A.rows(); }
};

/// A = As(mu) + beta Am with lowest-order edge elements. DoFs are tangential
/// line integrals along the globally oriented edges.
CurlCurlSystem assemble(const Mesh2D& mesh, const CoefficientField& mu, double beta,
                        const AssemblyOptions& opts = {});

/// Element matrices in the cell's local counterclockwise edge basis (no global
/// orientation signs applied). Only the leading 3x3 block is used for triangles.
struct ElementMatrices {
  std::array<std::array<double, 4>, 4> curl{};
  std::array<std::array<double, 4>, 4> mass{};
};
ElementMatrices element_matrices(const Mesh2D& mesh, Index cell);

/// Reference coordinates of the cell's corners: (0,0),(1,0),(0,1) for the unit
/// triangle, (0,0),(1,0),(1,1),(0,1) for the unit square.
std::array<Point, 4> reference_corners(CellKind kind);

/// Local edge basis function k evaluated at reference point (xi, eta), in
/// reference coordinates. Its tangential integral along local edge k (run
/// counterclockwise) is 1.
Point reference_edge_basis(CellKind kind, int k, double xi, double eta);

/// Tangential integral of reference basis k along the straight reference
/// segment a -> b (exact for the lowest-order spaces).
double reference_line_integral(CellKind kind, int k, Point a, Point b);

/// Rows of G with a single nonzero: free edges with exactly one Dirichlet endpoint.
std::vector<Index> interior_node_rows(const CurlCurlSystem& system);

} // namespace hcurl
