#pragma once

#include <hcurl/sparse.hpp>

#include <span>
#include <vector>

namespace hcurl {

struct CholeskyOptions {
  /// Accept positive semidefinite input: a pivot at or below
  /// `zero_pivot_tol * max|diag|` is recorded as a null pivot instead of
  /// raising. Solves then return a particular solution, which is exact only for
  /// right-hand sides in the range of A.
  bool semidefinite = false;
  double zero_pivot_tol = 1e-10;
  /// Without `semidefinite`, pivots at or below `breakdown_tol * max|diag|`
  /// raise FactorizationBreakdown.
  double breakdown_tol = 1e-14;
  /// Relative asymmetry accepted on input.
  double symmetry_tol = 1e-12;
};

/// L L^T = P A P^T with a minimum-degree permutation P.
struct CholeskyFactor {
  /// ordering[k] = original row eliminated k-th
  std::vector<Index> ordering;
  /// Lower-triangular factor in the permuted numbering.
  SparseMatrix factor;
  /// Original indices of null pivots (semidefinite mode only).
  std::vector<Index> null_pivots;

  Index size() const noexcept { return factor.rows(); }
};

/// Minimum-degree elimination order on the graph of a symmetric pattern.
/// Ties go to the lowest index.
std::vector<Index> minimum_degree_ordering(const SparseMatrix& a);

CholeskyFactor cholesky(const SparseMatrix& a, const CholeskyOptions& opts = {});

Vector solve(const CholeskyFactor& f, std::span<const double> b);

/// Column-by-column solve of a multi right-hand side given as a sparse matrix;
/// returns a dense column-major block (rows = f.size()).
std::vector<Vector> solve_columns(const CholeskyFactor& f, const SparseMatrix& b);

} // namespace hcurl
