#pragma once

#include <hcurl/cholesky.hpp>
#include <hcurl/mesh.hpp>
#include <hcurl/nedelec.hpp>
#include <hcurl/sparse.hpp>
#include <hcurl/splitting.hpp>

#include <Eigen/Dense>

#include <vector>

namespace hcurl {

enum class CoarseNodeMode { nonzero_columns, coarse_nodes };

struct TransferSet {
  SparseMatrix P;
  SparseMatrix R;
  SparseMatrix Gc;
  std::vector<Index> coarse_node_injection;
  /// Null pivots met while factoring the interior blocks (semidefinite mode only).
  Index interior_null_pivots = 0;
};

struct InterpOptions {
  CoarseNodeMode mode = CoarseNodeMode::nonzero_columns;
  /// Allow positive semidefinite interior blocks (beta = 0 with a consistent
  /// right-hand side); otherwise a zero pivot throws FactorizationBreakdown.
  bool semidefinite = false;
};

/// P = R^T - S_I A_II^{-1} S_I^T A R^T with A_II factored per connected
/// component; Gc = R G restricted to the selected node columns.
TransferSet sparse_ideal_interp(const SparseMatrix& a, const SparseMatrix& g, const Splitting& split,
                                const InterpOptions& opts = {});

/// Selects the nonzero columns of R G. With `restrict_to` nonempty only those
/// columns are candidates.
std::pair<SparseMatrix, std::vector<Index>> coarse_gradient(const SparseMatrix& r, const SparseMatrix& g,
                                                            std::span<const Index> restrict_to = {});

struct DenseInterpOptions {
  Index dense_cap = 2000;
  /// Use the pseudo-inverse of S^T A S (singular when A has a kernel).
  bool pseudo_inverse = false;
};

/// (I - S (S^T A S)^{-1} S^T A) R^T as a dense matrix.
Eigen::MatrixXd ideal_interp_dense(const SparseMatrix& a, const SparseMatrix& r, const SparseMatrix& s,
                                   const DenseInterpOptions& opts = {});

Eigen::MatrixXd to_dense(const SparseMatrix& a);

/// Tangential-moment interpolation of the coarse edge basis onto the fine
/// free edges (rows fine DoFs, columns coarse DoFs).
SparseMatrix geometric_interp(const Mesh2D& coarse, const Mesh2D& fine, const RefinementMap& map,
                              const DofMaps& coarse_dofs, const DofMaps& fine_dofs);

/// Piecewise linear (bilinear) nodal interpolation between the free nodes.
SparseMatrix nodal_interp(const Mesh2D& coarse, const Mesh2D& fine, const RefinementMap& map,
                          const DofMaps& coarse_dofs, const DofMaps& fine_dofs);

} // namespace hcurl
