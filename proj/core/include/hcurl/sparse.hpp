#pragma once

#include <hcurl/common.hpp>

#include <span>
#include <string>
#include <vector>

namespace hcurl {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed-row real sparse matrix.
///
/// Columns are strictly increasing inside each row and no exact zeros are
/// stored. Every constructor and kernel in this header returns a matrix in
/// that canonical form.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(Index nrows, Index ncols);

  /// Sums duplicates and drops exact zeros.
  static SparseMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries);

  /// Takes ownership of already-assembled arrays; validates and compresses.
  static SparseMatrix from_csr(Index nrows, Index ncols, std::vector<Index> row_offsets,
                               std::vector<Index> col_indices, std::vector<double> values);

  static SparseMatrix identity(Index n);
  static SparseMatrix diagonal(std::span<const double> d);

  Index rows() const noexcept { return nrows_; }
  Index cols() const noexcept { return ncols_; }
  Index nnz() const noexcept { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const noexcept {
    return {col_indices_.data() + row_offsets_[i],
            static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
  }
  std::span<const double> row_values(Index i) const noexcept {
    return {values_.data() + row_offsets_[i],
            static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
  }
  Index row_nnz(Index i) const noexcept { return row_offsets_[i + 1] - row_offsets_[i]; }

  /// Entry lookup by binary search; 0 if not stored.
  double coeff(Index i, Index j) const;

  /// Copy with every stored value multiplied by `s` (s == 0 gives an empty pattern).
  SparseMatrix scaled(double s) const;

  /// Largest absolute stored value (0 for an empty matrix).
  double max_abs() const noexcept;

  std::vector<Triplet> to_triplets() const;

  /// Returns an empty string when the structural invariants hold, otherwise a
  /// description of the first violation.
  std::string validate() const;

  bool operator==(const SparseMatrix&) const = default;

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

Vector spmv(const SparseMatrix& a, std::span<const double> x);
/// y = A x written into `y` (resized).
void spmv(const SparseMatrix& a, std::span<const double> x, Vector& y);
/// r = b - A x
Vector residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

SparseMatrix transpose(const SparseMatrix& a);
SparseMatrix matmat(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0, double beta = 1.0);

/// P^T A P, symmetrized as (M + M^T)/2 when A is exactly symmetric.
SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a);

/// Block A(rows, cols) in the order given. Indices must be in range and unique.
SparseMatrix extract_submatrix(const SparseMatrix& a, std::span<const Index> rows,
                               std::span<const Index> cols);

/// Identity columns I(:, cols) of an n-row identity.
SparseMatrix injection(Index n, std::span<const Index> cols);

bool is_symmetric(const SparseMatrix& a, double rel_tol = 0.0);

/// (A + A^T)/2
SparseMatrix symmetrize(const SparseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

} // namespace hcurl
