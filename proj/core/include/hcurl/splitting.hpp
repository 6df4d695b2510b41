#pragma once

#include <hcurl/mesh.hpp>
#include <hcurl/nedelec.hpp>
#include <hcurl/sparse.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace hcurl {

/// Two fine edge DoFs joined through node k along the path i -> k -> j.
/// Signs are +1 when the DoF's global orientation agrees with the traversal.
struct ExteriorPair {
  Index dof1 = kNoIndex;
  Index dof2 = kNoIndex;
  int sign1 = 1;
  int sign2 = 1;
  Index tail_node = kNoIndex;
  Index mid_node = kNoIndex;
  Index head_node = kNoIndex;

  bool operator==(const ExteriorPair&) const = default;
};

struct Splitting {
  std::vector<ExteriorPair> exterior_pairs;
  std::vector<Index> interior_dofs;
  Index n = 0;
  /// Coarse nodes (columns of the augmented gradient); informational.
  std::vector<Index> coarse_nodes;

  Index num_pairs() const noexcept { return static_cast<Index>(exterior_pairs.size()); }
  bool operator==(const Splitting&) const = default;
};

/// Empty string when the partition and sign invariants hold.
std::string validate_splitting(const Splitting& split);

struct AugmentedGradient {
  SparseMatrix gtilde;
  std::vector<Index> boundary_cols;
  /// Row of G that each appended column belongs to.
  std::vector<Index> boundary_rows;
};

struct NodalSplit {
  std::vector<Index> coarse;
  std::vector<Index> fine;
};

/// Appends a column holding -delta for every row of G with a single entry delta.
/// Empty rows (free edges between two Dirichlet vertices) are left as they are.
AugmentedGradient augment_gradient(const SparseMatrix& g);

/// G~^T A G~.
SparseMatrix nodal_dual(const SparseMatrix& a, const SparseMatrix& gtilde);

struct CfOptions {
  double theta = 0.25;
  /// Weight of already-fine nodes in the measure.
  int fine_weight = 2;
};

/// Greedy coarse/fine colouring. The measure of an unassigned node is the
/// number of unassigned nodes it strongly influences plus `fine_weight` times
/// the number of fine nodes it strongly influences; ties go to the lowest
/// index. All graph neighbours of a new coarse node become fine.
NodalSplit classical_cf(const SparseMatrix& nodal, std::span<const Index> c_init,
                        std::span<const Index> f_init, const CfOptions& opts = {});

/// Coarse/fine split of A_G~ with the boundary columns prescribed as coarse and
/// their neighbours as fine. The returned coarse set excludes the boundary.
NodalSplit nodal_cf(const SparseMatrix& a, const AugmentedGradient& aug, const CfOptions& opts = {});

/// Fully algebraic interior/exterior splitting from (A, G).
Splitting build_algebraic_splitting(const SparseMatrix& a, const SparseMatrix& g, const CfOptions& opts = {});

/// One pair per coarse edge whose two children are both free fine DoFs. Node
/// indices refer to the augmented gradient of `fine_g`.
Splitting build_refinement_splitting(const Mesh2D& coarse, const Mesh2D& fine, const RefinementMap& map,
                                     const DofMaps& fine_dofs, const SparseMatrix& fine_g);

struct RealizedSplitting {
  SparseMatrix R;
  SparseMatrix S_I;
  SparseMatrix S_E;
};

/// R rows sign/sqrt(2) on each pair, S_E columns (sign1, -sign2)/sqrt(2),
/// S_I identity columns on the interior DoFs.
RealizedSplitting realize_RS(const Splitting& split);

/// [S_I S_E]
SparseMatrix complement_basis(const RealizedSplitting& rs);

/// One line per pair: "i k j dof1 sign1 dof2 sign2".
void write_splitting(std::ostream& os, const Splitting& split);

} // namespace hcurl
