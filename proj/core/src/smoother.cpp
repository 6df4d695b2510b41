#include <hcurl/smoother.hpp>
#include <hcurl/parallel.hpp>

#include <cmath>

namespace hcurl {

PatchSet build_patches(const SparseMatrix& a, const SparseMatrix& g) {
  if (a.rows() != a.cols() || g.rows() != a.rows()) throw DimensionMismatch("build_patches");
  PatchSet ps;
  const SparseMatrix gt = transpose(g);
  std::vector<char> covered(static_cast<std::size_t>(a.rows()), 0);
  for (Index v = 0; v < gt.rows(); ++v) {
    const auto rows = gt.row_cols(v);
    if (rows.empty()) continue;
    ps.patches.emplace_back(rows.begin(), rows.end());
    for (Index e : rows) covered[e] = 1;
  }
  for (Index e = 0; e < a.rows(); ++e)
    if (!covered[e]) ps.patches.push_back({e});

  ps.factors.resize(ps.patches.size());
  std::vector<char> failed(ps.patches.size(), 0);
  parallel_for(
      static_cast<Index>(ps.patches.size()),
      [&](Index begin, Index end) {
        for (Index p = begin; p < end; ++p) {
          const auto& idx = ps.patches[p];
          const auto m = static_cast<Eigen::Index>(idx.size());
          Eigen::MatrixXd block(m, m);
          for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) block(i, j) = a.coeff(idx[i], idx[j]);
          ps.factors[p].compute(block);
          if (ps.factors[p].info() != Eigen::Success) failed[p] = 1;
        }
      },
      64);
  for (std::size_t p = 0; p < failed.size(); ++p)
    if (failed[p]) throw Error("build_patches: patch " + std::to_string(p) + " block is not positive definite");
  return ps;
}

L1Jacobi build_l1_jacobi(const SparseMatrix& a) {
  L1Jacobi l1;
  l1.d.assign(static_cast<std::size_t>(a.rows()), 0.0);
  for (Index i = 0; i < a.rows(); ++i) {
    for (double v : a.row_values(i)) l1.d[i] += std::abs(v);
    if (!(l1.d[i] > 0.0)) throw Error("build_l1_jacobi: zero row " + std::to_string(i));
  }
  return l1;
}

namespace {

void patch_step(const SparseMatrix& a, const PatchSet& ps, Index p, Vector& x, std::span<const double> b) {
  const auto& idx = ps.patches[p];
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::VectorXd r(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Index row = idx[i];
    double s = b[row];
    const auto cols = a.row_cols(row);
    const auto vals = a.row_values(row);
    for (std::size_t q = 0; q < cols.size(); ++q) s -= vals[q] * x[cols[q]];
    r(i) = s;
  }
  const Eigen::VectorXd dx = ps.factors[p].solve(r);
  for (Eigen::Index i = 0; i < m; ++i) x[idx[i]] += dx(i);
}

void jacobi_step(const SparseMatrix& a, const L1Jacobi& l1, Vector& x, std::span<const double> b) {
  const Vector r = residual(a, x, b);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i] / l1.d[i];
}

} // namespace

void smooth(const SparseMatrix& a, const PatchSet& patches, const L1Jacobi& l1, Vector& x,
            std::span<const double> b, SweepDirection direction) {
  if (x.size() != static_cast<std::size_t>(a.rows()) || b.size() != x.size() || l1.d.size() != x.size())
    throw DimensionMismatch("smooth");
  const Index np = patches.size();
  if (direction != SweepDirection::backward) {
    for (Index p = 0; p < np; ++p) patch_step(a, patches, p, x, b);
    jacobi_step(a, l1, x, b);
  }
  if (direction != SweepDirection::forward) {
    jacobi_step(a, l1, x, b);
    for (Index p = np - 1; p >= 0; --p) patch_step(a, patches, p, x, b);
  }
}

SparseMatrix l1_jacobi_matrix(const SparseMatrix& a) { return SparseMatrix::diagonal(build_l1_jacobi(a).d); }

} // namespace hcurl
