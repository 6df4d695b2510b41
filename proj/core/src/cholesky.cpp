#include <hcurl/cholesky.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hcurl {

std::vector<Index> minimum_degree_ordering(const SparseMatrix& a) {
  const Index n = a.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j : a.row_cols(i))
      if (j != i) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }

  std::vector<char> eliminated(static_cast<std::size_t>(n), 0);
  std::set<std::pair<Index, Index>> queue; // (degree, node)
  std::vector<Index> degree(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    degree[i] = static_cast<Index>(adj[i].size());
    queue.insert({degree[i], i});
  }

  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<Index> merged;
  while (!queue.empty()) {
    const Index v = queue.begin()->second;
    queue.erase(queue.begin());
    eliminated[v] = 1;
    order.push_back(v);
    std::vector<Index> nbrs;
    for (Index u : adj[v])
      if (!eliminated[u]) nbrs.push_back(u);
    // the remaining neighbours become a clique
    for (Index u : nbrs) {
      merged.clear();
      std::set_union(adj[u].begin(), adj[u].end(), nbrs.begin(), nbrs.end(), std::back_inserter(merged));
      std::vector<Index> cleaned;
      cleaned.reserve(merged.size());
      for (Index w : merged)
        if (w != u && !eliminated[w]) cleaned.push_back(w);
      adj[u] = std::move(cleaned);
      const auto d = static_cast<Index>(adj[u].size());
      if (d != degree[u]) {
        queue.erase({degree[u], u});
        degree[u] = d;
        queue.insert({d, u});
      }
    }
    adj[v].clear();
    adj[v].shrink_to_fit();
  }
  return order;
}

namespace {

// Nonzero pattern of row k of L: walk the elimination tree from each entry of
// the upper-triangular column k. Returns the start offset into `stack`.
Index ereach(const SparseMatrix& upper_t, Index k, const std::vector<Index>& parent,
             std::vector<Index>& stack, std::vector<Index>& mark) {
  const Index n = static_cast<Index>(parent.size());
  Index top = n;
  mark[k] = k;
  // upper_t row k holds the entries C(i,k), i <= k
  for (Index i : upper_t.row_cols(k)) {
    if (i > k) continue;
    Index len = 0;
    std::vector<Index> path;
    for (; mark[i] != k; i = parent[i]) {
      path.push_back(i);
      mark[i] = k;
      ++len;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) stack[--top] = *it;
  }
  return top;
}

} // namespace

CholeskyFactor cholesky(const SparseMatrix& a, const CholeskyOptions& opts) {
  if (a.rows() != a.cols()) throw DimensionMismatch("cholesky: matrix not square");
  if (!is_symmetric(a, opts.symmetry_tol)) throw Error("cholesky: matrix is not symmetric");
  const Index n = a.rows();

  CholeskyFactor f;
  f.ordering = minimum_degree_ordering(a);
  std::vector<Index> inv(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) inv[f.ordering[k]] = k;

  // C = P A P^T; we keep it row-wise, which for a symmetric C equals column-wise.
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz()));
  double max_diag = 0.0;
  for (Index i = 0; i < n; ++i) {
    const auto rc = a.row_cols(i);
    const auto rv = a.row_values(i);
    for (std::size_t q = 0; q < rc.size(); ++q) {
      t.push_back({inv[i], inv[rc[q]], rv[q]});
      if (rc[q] == i) max_diag = std::max(max_diag, std::abs(rv[q]));
    }
  }
  const SparseMatrix c = SparseMatrix::from_triplets(n, n, std::move(t));

  // elimination tree
  std::vector<Index> parent(static_cast<std::size_t>(n), kNoIndex);
  {
    std::vector<Index> ancestor(static_cast<std::size_t>(n), kNoIndex);
    for (Index k = 0; k < n; ++k) {
      for (Index i : c.row_cols(k)) {
        for (; i != kNoIndex && i < k;) {
          const Index next = ancestor[i];
          ancestor[i] = k;
          if (next == kNoIndex) {
            parent[i] = k;
            break;
          }
          i = next;
        }
      }
    }
  }

  std::vector<Index> stack(static_cast<std::size_t>(n));
  std::vector<Index> mark(static_cast<std::size_t>(n), kNoIndex);

  // column counts of L
  std::vector<Index> colcount(static_cast<std::size_t>(n), 1);
  for (Index k = 0; k < n; ++k) {
    const Index top = ereach(c, k, parent, stack, mark);
    for (Index p = top; p < n; ++p) ++colcount[stack[p]];
  }
  std::fill(mark.begin(), mark.end(), kNoIndex);

  std::vector<Index> cp(static_cast<std::size_t>(n) + 1, 0);
  for (Index j = 0; j < n; ++j) cp[j + 1] = cp[j] + colcount[j];
  std::vector<Index> li(static_cast<std::size_t>(cp[n]));
  std::vector<double> lx(static_cast<std::size_t>(cp[n]), 0.0);
  std::vector<Index> fill(cp.begin(), cp.end() - 1);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  const double zero_tol = opts.zero_pivot_tol * max_diag;
  const double breakdown_tol = opts.breakdown_tol * max_diag;

  for (Index k = 0; k < n; ++k) {
    const Index top = ereach(c, k, parent, stack, mark);
    double d = 0.0;
    {
      const auto rc = c.row_cols(k);
      const auto rv = c.row_values(k);
      for (std::size_t q = 0; q < rc.size(); ++q) {
        if (rc[q] < k) x[rc[q]] = rv[q];
        else if (rc[q] == k) d = rv[q];
      }
    }
    for (Index p = top; p < n; ++p) {
      const Index j = stack[p];
      const double ljj = lx[cp[j]];
      const double lkj = ljj != 0.0 ? x[j] / ljj : 0.0;
      x[j] = 0.0;
      for (Index q = cp[j] + 1; q < fill[j]; ++q) x[li[q]] -= lx[q] * lkj;
      d -= lkj * lkj;
      const Index q = fill[j]++;
      li[q] = k;
      lx[q] = lkj;
    }
    const bool positive = d > (opts.semidefinite ? zero_tol : breakdown_tol);
    if (!positive) {
      if (!opts.semidefinite || !(d > -zero_tol)) {
        std::ostringstream os;
        os << "cholesky: non-positive pivot " << d << " at row " << f.ordering[k];
        throw FactorizationBreakdown(os.str(), f.ordering[k]);
      }
      f.null_pivots.push_back(f.ordering[k]);
      d = 0.0;
    }
    const Index q = fill[k]++;
    li[q] = k;
    lx[q] = std::sqrt(d);
  }

  // CSC of L with the diagonal first in each column; store as CSR of L.
  std::vector<Triplet> lt;
  lt.reserve(li.size());
  for (Index j = 0; j < n; ++j)
    for (Index q = cp[j]; q < fill[j]; ++q)
      if (lx[q] != 0.0) lt.push_back({li[q], j, lx[q]});
  f.factor = SparseMatrix::from_triplets(n, n, std::move(lt));
  std::sort(f.null_pivots.begin(), f.null_pivots.end());
  return f;
}

Vector solve(const CholeskyFactor& f, std::span<const double> b) {
  const Index n = f.size();
  if (static_cast<Index>(b.size()) != n) throw DimensionMismatch("solve: rhs length mismatch");
  const SparseMatrix& l = f.factor;
  Vector y(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) y[k] = b[f.ordering[k]];
  // forward: L y = Pb (diagonal is the last stored entry of each row)
  for (Index i = 0; i < n; ++i) {
    const auto rc = l.row_cols(i);
    const auto rv = l.row_values(i);
    double s = y[i];
    double diag = 0.0;
    for (std::size_t q = 0; q < rc.size(); ++q) {
      if (rc[q] < i) s -= rv[q] * y[rc[q]];
      else diag = rv[q];
    }
    y[i] = diag != 0.0 ? s / diag : 0.0;
  }
  // backward: L^T z = y, column sweep over rows of L
  for (Index i = n - 1; i >= 0; --i) {
    const auto rc = l.row_cols(i);
    const auto rv = l.row_values(i);
    double diag = rc.empty() || rc.back() != i ? 0.0 : rv.back();
    y[i] = diag != 0.0 ? y[i] / diag : 0.0;
    for (std::size_t q = 0; q < rc.size(); ++q)
      if (rc[q] < i) y[rc[q]] -= rv[q] * y[i];
  }
  Vector out(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) out[f.ordering[k]] = y[k];
  return out;
}

std::vector<Vector> solve_columns(const CholeskyFactor& f, const SparseMatrix& b) {
  if (b.rows() != f.size()) throw DimensionMismatch("solve_columns: rhs row count mismatch");
  const SparseMatrix bt = transpose(b);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(b.cols()));
  Vector col(static_cast<std::size_t>(b.rows()));
  for (Index j = 0; j < b.cols(); ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    const auto rc = bt.row_cols(j);
    const auto rv = bt.row_values(j);
    for (std::size_t q = 0; q < rc.size(); ++q) col[rc[q]] = rv[q];
    out.push_back(solve(f, col));
  }
  return out;
}

} // namespace hcurl
