#include <hcurl/sparse.hpp>

#include <hcurl/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hcurl {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw DimensionMismatch(what);
}

} // namespace

SparseMatrix::SparseMatrix(Index nrows, Index ncols)
    : nrows_(nrows), ncols_(ncols), row_offsets_(static_cast<std::size_t>(nrows) + 1, 0) {
  if (nrows < 0 || ncols < 0) throw Error("negative matrix dimension");
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries) {
  SparseMatrix m(nrows, ncols);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw DimensionMismatch("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.col_indices_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::vector<Index> counts(static_cast<std::size_t>(nrows), 0);
  for (std::size_t k = 0; k < entries.size();) {
    const Index r = entries[k].row;
    const Index c = entries[k].col;
    double v = 0.0;
    while (k < entries.size() && entries[k].row == r && entries[k].col == c) v += entries[k++].value;
    if (v != 0.0) {
      m.col_indices_.push_back(c);
      m.values_.push_back(v);
      ++counts[r];
    }
  }
  for (Index i = 0; i < nrows; ++i) m.row_offsets_[i + 1] = m.row_offsets_[i] + counts[i];
  return m;
}

SparseMatrix SparseMatrix::from_csr(Index nrows, Index ncols, std::vector<Index> row_offsets,
                                    std::vector<Index> col_indices, std::vector<double> values) {
  if (row_offsets.size() != static_cast<std::size_t>(nrows) + 1 ||
      col_indices.size() != values.size() ||
      static_cast<std::size_t>(row_offsets.back()) != values.size())
    throw DimensionMismatch("inconsistent CSR arrays");
  SparseMatrix m(nrows, ncols);
  m.row_offsets_ = std::move(row_offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  // compress exact zeros in place
  Index out = 0;
  Index start = 0;
  for (Index i = 0; i < nrows; ++i) {
    const Index end = m.row_offsets_[i + 1];
    for (Index p = start; p < end; ++p) {
      if (m.values_[p] != 0.0) {
        m.col_indices_[out] = m.col_indices_[p];
        m.values_[out] = m.values_[p];
        ++out;
      }
    }
    start = end;
    m.row_offsets_[i + 1] = out;
  }
  m.col_indices_.resize(out);
  m.values_.resize(out);
  if (auto msg = m.validate(); !msg.empty()) throw Error("invalid CSR input: " + msg);
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<double> d(static_cast<std::size_t>(n), 1.0);
  return diagonal(d);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  const auto n = static_cast<Index>(d.size());
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (Index i = 0; i < n; ++i) t.push_back({i, i, d[i]});
  return from_triplets(n, n, std::move(t));
}

double SparseMatrix::coeff(Index i, Index j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + (it - cols.begin())];
}

SparseMatrix SparseMatrix::scaled(double s) const {
  if (s == 0.0) return SparseMatrix(nrows_, ncols_);
  SparseMatrix m = *this;
  for (auto& v : m.values_) v *= s;
  return m;
}

double SparseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      t.push_back({i, col_indices_[p], values_[p]});
  return t;
}

std::string SparseMatrix::validate() const {
  std::ostringstream os;
  if (row_offsets_.size() != static_cast<std::size_t>(nrows_) + 1) {
    os << "row_offsets length " << row_offsets_.size() << " != nrows+1";
    return os.str();
  }
  if (row_offsets_.front() != 0) return "row_offsets[0] != 0";
  if (static_cast<std::size_t>(row_offsets_.back()) != values_.size() ||
      col_indices_.size() != values_.size())
    return "last row offset does not match stored entry count";
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      os << "row_offsets decreasing at row " << i;
      return os.str();
    }
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const Index c = col_indices_[p];
      if (c < 0 || c >= ncols_) {
        os << "column index " << c << " out of range in row " << i;
        return os.str();
      }
      if (p > row_offsets_[i] && col_indices_[p - 1] >= c) {
        os << "columns not strictly increasing in row " << i;
        return os.str();
      }
      if (values_[p] == 0.0) {
        os << "explicit zero stored at (" << i << "," << c << ")";
        return os.str();
      }
    }
  }
  return {};
}

void spmv(const SparseMatrix& a, std::span<const double> x, Vector& y) {
  require(static_cast<std::size_t>(a.cols()) == x.size(), "spmv: A.ncols != x.len");
  y.assign(static_cast<std::size_t>(a.rows()), 0.0);
  const auto off = a.row_offsets();
  const auto col = a.col_indices();
  const auto val = a.values();
  parallel_for(a.rows(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) {
      double s = 0.0;
      for (Index p = off[i]; p < off[i + 1]; ++p) s += val[p] * x[col[p]];
      y[i] = s;
    }
  });
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y;
  spmv(a, x, y);
  return y;
}

Vector residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  require(static_cast<std::size_t>(a.rows()) == b.size(), "residual: A.nrows != b.len");
  Vector r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

SparseMatrix transpose(const SparseMatrix& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  std::vector<Index> off(static_cast<std::size_t>(n) + 1, 0);
  for (Index c : a.col_indices()) ++off[c + 1];
  std::partial_sum(off.begin(), off.end(), off.begin());
  std::vector<Index> cols(static_cast<std::size_t>(a.nnz()));
  std::vector<double> vals(static_cast<std::size_t>(a.nnz()));
  std::vector<Index> next(off.begin(), off.end() - 1);
  for (Index i = 0; i < m; ++i) {
    const auto rc = a.row_cols(i);
    const auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const Index q = next[rc[k]]++;
      cols[q] = i;
      vals[q] = rv[k];
    }
  }
  return SparseMatrix::from_csr(n, m, std::move(off), std::move(cols), std::move(vals));
}

SparseMatrix matmat(const SparseMatrix& a, const SparseMatrix& b) {
  require(a.cols() == b.rows(), "matmat: A.ncols != B.nrows");
  const Index m = a.rows();
  const Index n = b.cols();
  std::vector<Index> off(static_cast<std::size_t>(m) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  // Gustavson with a dense accumulator
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<Index> marker(static_cast<std::size_t>(n), kNoIndex);
  std::vector<Index> pattern;
  for (Index i = 0; i < m; ++i) {
    pattern.clear();
    const auto ac = a.row_cols(i);
    const auto av = a.row_values(i);
    for (std::size_t ka = 0; ka < ac.size(); ++ka) {
      const Index k = ac[ka];
      const auto bc = b.row_cols(k);
      const auto bv = b.row_values(k);
      for (std::size_t kb = 0; kb < bc.size(); ++kb) {
        const Index j = bc[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          pattern.push_back(j);
        }
        acc[j] += av[ka] * bv[kb];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index j : pattern) {
      if (acc[j] != 0.0) {
        cols.push_back(j);
        vals.push_back(acc[j]);
      }
    }
    off[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix::from_csr(m, n, std::move(off), std::move(cols), std::move(vals));
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape mismatch");
  std::vector<Index> off(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  vals.reserve(cols.capacity());
  for (Index i = 0; i < a.rows(); ++i) {
    const auto ac = a.row_cols(i);
    const auto av = a.row_values(i);
    const auto bc = b.row_cols(i);
    const auto bv = b.row_values(i);
    std::size_t p = 0, q = 0;
    while (p < ac.size() || q < bc.size()) {
      Index c;
      double v;
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        c = ac[p];
        v = alpha * av[p++];
      } else if (p == ac.size() || bc[q] < ac[p]) {
        c = bc[q];
        v = beta * bv[q++];
      } else {
        c = ac[p];
        v = alpha * av[p++] + beta * bv[q++];
      }
      if (v != 0.0) {
        cols.push_back(c);
        vals.push_back(v);
      }
    }
    off[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix::from_csr(a.rows(), a.cols(), std::move(off), std::move(cols), std::move(vals));
}

SparseMatrix symmetrize(const SparseMatrix& a) {
  require(a.rows() == a.cols(), "symmetrize: matrix not square");
  return add(a, transpose(a), 0.5, 0.5);
}

bool is_symmetric(const SparseMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const SparseMatrix t = transpose(a);
  if (rel_tol == 0.0) return t == a;
  const double scale = std::max(a.max_abs(), 1e-300);
  return add(a, t, 1.0, -1.0).max_abs() <= rel_tol * scale;
}

SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a) {
  require(a.rows() == a.cols(), "galerkin_product: A not square");
  require(a.rows() == p.rows(), "galerkin_product: A.nrows != P.nrows");
  const SparseMatrix pt = transpose(p);
  SparseMatrix m = matmat(pt, matmat(a, p));
  if (is_symmetric(a)) m = symmetrize(m);
  return m;
}

SparseMatrix extract_submatrix(const SparseMatrix& a, std::span<const Index> rows,
                               std::span<const Index> cols) {
  std::vector<Index> col_pos(static_cast<std::size_t>(a.cols()), kNoIndex);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Index c = cols[k];
    if (c < 0 || c >= a.cols()) throw DimensionMismatch("extract_submatrix: column index out of range");
    if (col_pos[c] != kNoIndex) throw DimensionMismatch("extract_submatrix: duplicated column index");
    col_pos[c] = static_cast<Index>(k);
  }
  std::vector<char> seen(static_cast<std::size_t>(a.rows()), 0);
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index r = rows[k];
    if (r < 0 || r >= a.rows()) throw DimensionMismatch("extract_submatrix: row index out of range");
    if (seen[r]) throw DimensionMismatch("extract_submatrix: duplicated row index");
    seen[r] = 1;
    const auto rc = a.row_cols(r);
    const auto rv = a.row_values(r);
    for (std::size_t q = 0; q < rc.size(); ++q)
      if (const Index cp = col_pos[rc[q]]; cp != kNoIndex)
        t.push_back({static_cast<Index>(k), cp, rv[q]});
  }
  return SparseMatrix::from_triplets(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()),
                                     std::move(t));
}

SparseMatrix injection(Index n, std::span<const Index> cols) {
  std::vector<Triplet> t;
  t.reserve(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({cols[k], static_cast<Index>(k), 1.0});
  return SparseMatrix::from_triplets(n, static_cast<Index>(cols.size()), std::move(t));
}

double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace hcurl
