#pragma once

#include <hcurl/sparse.hpp>

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace hcurl {

/// Node patches: the edge DoFs incident to each gradient column, plus
/// singleton patches for DoFs no column touches.
struct PatchSet {
  std::vector<std::vector<Index>> patches;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> factors;

  Index size() const noexcept { return static_cast<Index>(patches.size()); }
};

struct L1Jacobi {
  Vector d;
};

PatchSet build_patches(const SparseMatrix& a, const SparseMatrix& g);
L1Jacobi build_l1_jacobi(const SparseMatrix& a);

enum class SweepDirection { forward, backward, symmetric };

/// forward: Schwarz sweep over the patches in order, then one l1-Jacobi step.
/// backward: l1-Jacobi step, then the Schwarz sweep in reverse order (the
/// A-adjoint of forward). symmetric: forward followed by backward.
void smooth(const SparseMatrix& a, const PatchSet& patches, const L1Jacobi& l1, Vector& x,
            std::span<const double> b, SweepDirection direction);

/// diag(sum_j |A_ij|)
SparseMatrix l1_jacobi_matrix(const SparseMatrix& a);

} // namespace hcurl
