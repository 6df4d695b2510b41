#pragma once

#include <hcurl/sparse.hpp>
#include <hcurl/transfer.hpp>

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace hcurl::testing {

inline SparseMatrix random_sparse(Index rows, Index cols, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> t;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (keep(rng)) t.push_back({i, j, u(rng)});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

/// B^T B + shift I, a well conditioned SPD matrix.
inline SparseMatrix random_spd(Index n, double density, double shift, std::mt19937_64& rng) {
  const SparseMatrix b = random_sparse(n, n, density, rng);
  return add(matmat(transpose(b), b), SparseMatrix::identity(n), 1.0, shift);
}

inline Vector random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(static_cast<std::size_t>(n));
  for (auto& x : v) x = u(rng);
  return v;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
  return max_abs_diff(to_dense(a), to_dense(b));
}

inline Eigen::VectorXd as_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double energy(const SparseMatrix& a, const Vector& e) {
  return dot(e, spmv(a, e));
}

} // namespace hcurl::testing
