#include "test_helpers.hpp"

#include <hcurl/cholesky.hpp>
#include <hcurl/matrix_market.hpp>
#include <hcurl/mesh.hpp>
#include <hcurl/nedelec.hpp>
#include <hcurl/parallel.hpp>
#include <hcurl/sparse.hpp>

#include <doctest.h>

#include <numeric>
#include <sstream>

using namespace hcurl;
using namespace hcurl::testing;

namespace {

SparseMatrix tridiag2() {
  return SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, -1}, {1, 0, -1}, {1, 1, 2}});
}

SparseMatrix laplace1d(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

} // namespace

TEST_CASE("from_triplets sums duplicates and drops exact zeros") {
  const auto a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 2, 2.0}, {1, 0, 1.0}, {1, 0, -1.0}, {0, 0, 5.0}});
  CHECK(a.validate().empty());
  CHECK(a.nnz() == 2);
  CHECK(a.coeff(0, 2) == 3.0);
  CHECK(a.coeff(1, 0) == 0.0);
  CHECK(a.row_cols(0)[0] == 0);
}

TEST_CASE("tiny values survive compression") {
  const auto a = SparseMatrix::from_triplets(1, 1, {{0, 0, 1e-300}});
  CHECK(a.nnz() == 1);
}

TEST_CASE("from_triplets rejects out of range indices") {
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), Error);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, -1, 1.0}}), Error);
}

TEST_CASE("from_csr validates arrays") {
  CHECK_THROWS(SparseMatrix::from_csr(2, 2, {0, 1}, {0}, {1.0}));
  CHECK_THROWS(SparseMatrix::from_csr(1, 2, {0, 2}, {1, 0}, {1.0, 2.0}));
  const auto a = SparseMatrix::from_csr(1, 3, {0, 2}, {0, 2}, {1.0, 0.0});
  CHECK(a.nnz() == 1);
}

TEST_CASE("spmv examples") {
  CHECK(spmv(SparseMatrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  CHECK(spmv(SparseMatrix(2, 2), Vector{5, 7}) == Vector{0, 0});
  CHECK(spmv(tridiag2(), Vector{1, 1}) == Vector{1, 1});
  CHECK_THROWS_AS(spmv(tridiag2(), Vector{1, 1, 1}), DimensionMismatch);
}

TEST_CASE("residual is b - Ax") {
  CHECK(residual(tridiag2(), Vector{1, 0}, Vector{2, 0}) == Vector{0, 1});
}

TEST_CASE("transpose examples") {
  const auto s = tridiag2();
  CHECK(transpose(s) == s);
  const auto row = SparseMatrix::from_triplets(1, 3, {{0, 0, 1}, {0, 1, 2}, {0, 2, 3}});
  const auto col = transpose(row);
  CHECK(col.rows() == 3);
  CHECK(col.cols() == 1);
  CHECK(col.coeff(2, 0) == 3.0);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_sparse(10, 7, 0.3, rng);
    CHECK(transpose(transpose(a)) == a);
    CHECK(transpose(a).validate().empty());
  }
}

TEST_CASE("matmat examples") {
  std::mt19937_64 rng(11);
  const auto a = random_sparse(5, 4, 0.6, rng);
  const auto b = random_sparse(4, 3, 0.6, rng);
  CHECK(matmat(a, SparseMatrix::identity(4)) == a);
  CHECK(matmat(SparseMatrix::identity(5), a) == a);
  const auto c = matmat(a, b);
  CHECK(c.validate().empty());
  CHECK(max_abs_diff(to_dense(c), to_dense(a) * to_dense(b)) <= 1e-14);
  CHECK_THROWS_AS(matmat(a, a), DimensionMismatch);
}

TEST_CASE("matmat associativity on random triples") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_sparse(8, 6, 0.4, rng);
    const auto b = random_sparse(6, 9, 0.4, rng);
    const auto c = random_sparse(9, 5, 0.4, rng);
    const auto left = to_dense(matmat(matmat(a, b), c));
    const auto right = to_dense(matmat(a, matmat(b, c)));
    const double scale = std::max(1.0, left.cwiseAbs().maxCoeff());
    CHECK(max_abs_diff(left, right) <= 1e-12 * scale);
  }
}

TEST_CASE("add combines patterns") {
  const auto a = SparseMatrix::identity(2);
  const auto c = add(a, tridiag2(), 2.0, -1.0);
  CHECK(c.coeff(0, 0) == 0.0);
  CHECK(c.coeff(0, 1) == 1.0);
  CHECK(c.nnz() == 2);
}

TEST_CASE("galerkin product examples") {
  std::mt19937_64 rng(5);
  const auto a = random_spd(6, 0.4, 1.0, rng);
  CHECK(max_abs_diff(galerkin_product(SparseMatrix::identity(6), a), a) <= 1e-15);

  const std::vector<Index> first{0, 1, 2};
  const auto lead = galerkin_product(injection(6, first), a);
  CHECK(lead == extract_submatrix(a, first, first));

  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_sparse(6, 3, 0.5, rng);
    const auto g = galerkin_product(p, a);
    const Eigen::MatrixXd ref = to_dense(p).transpose() * to_dense(a) * to_dense(p);
    CHECK(max_abs_diff(to_dense(g), ref) <= 1e-13 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    CHECK(is_symmetric(g));
  }
  CHECK_THROWS_AS(galerkin_product(SparseMatrix::identity(3), a), DimensionMismatch);
}

TEST_CASE("extract_submatrix examples") {
  std::mt19937_64 rng(9);
  const auto a = random_sparse(6, 6, 0.5, rng);
  std::vector<Index> all(6);
  std::iota(all.begin(), all.end(), 0);
  CHECK(extract_submatrix(a, all, all) == a);
  const std::vector<Index> one{4};
  const auto s = extract_submatrix(a, one, one);
  CHECK(s.rows() == 1);
  CHECK(s.coeff(0, 0) == a.coeff(4, 4));

  const std::vector<Index> interior{1, 3, 4};
  const std::vector<Index> exterior{5, 0, 2};
  Eigen::MatrixXd blocks(6, 6);
  blocks << to_dense(extract_submatrix(a, interior, interior)), to_dense(extract_submatrix(a, interior, exterior)),
      to_dense(extract_submatrix(a, exterior, interior)), to_dense(extract_submatrix(a, exterior, exterior));
  std::vector<Index> order(interior);
  order.insert(order.end(), exterior.begin(), exterior.end());
  const Eigen::MatrixXd dense = to_dense(a);
  Eigen::MatrixXd permuted(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) permuted(i, j) = dense(order[i], order[j]);
  CHECK(max_abs_diff(blocks, permuted) == 0.0);

  const std::vector<Index> dup{1, 1};
  const std::vector<Index> bad{6};
  CHECK_THROWS(extract_submatrix(a, dup, all));
  CHECK_THROWS(extract_submatrix(a, bad, all));
}

TEST_CASE("symmetry helpers") {
  auto a = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0 + 1e-15}});
  CHECK_FALSE(is_symmetric(a));
  CHECK(is_symmetric(a, 1e-12));
  CHECK(is_symmetric(symmetrize(a)));
}

TEST_CASE("vector kernels") {
  CHECK(dot(Vector{1, 2}, Vector{3, 4}) == 11.0);
  CHECK(norm2(Vector{3, 4}) == 5.0);
  Vector y{1, 1};
  axpy(2.0, Vector{1, 2}, y);
  CHECK(y == Vector{3, 5});
}

TEST_CASE("cholesky examples") {
  const auto d = SparseMatrix::diagonal(std::vector<double>{4, 9});
  const auto f = cholesky(d);
  const auto x = solve(f, Vector{4, 9});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));

  const auto id = cholesky(SparseMatrix::identity(4));
  CHECK(solve(id, Vector{1, -2, 3, 5}) == Vector{1, -2, 3, 5});
}

TEST_CASE("cholesky solves an assembled mass matrix") {
  const auto mesh = uniform_tri_mesh(3);
  const auto sys = assemble(mesh, constant_mu(mesh), 1.0);
  std::mt19937_64 rng(1);
  const auto b = random_vector(sys.Am.rows(), rng);
  const auto f = cholesky(sys.Am);
  for (Index i = 0; i < f.factor.rows(); ++i) CHECK(f.factor.coeff(i, i) > 0.0);
  const auto x = solve(f, b);
  CHECK(norm2(residual(sys.Am, x, b)) / norm2(b) <= 1e-10);
}

TEST_CASE("cholesky residual property on random SPD matrices") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 5 + trial * 3;
    const auto a = random_spd(n, 0.15, 1e-3, rng);
    const auto b = random_vector(n, rng);
    const auto x = solve(cholesky(a), b);
    CHECK(norm2(residual(a, x, b)) / norm2(b) <= 1e-10);
  }
}

TEST_CASE("multiple right hand sides equal stacked single solves") {
  std::mt19937_64 rng(4);
  const auto a = random_spd(12, 0.3, 1.0, rng);
  const auto f = cholesky(a);
  const auto b = random_sparse(12, 3, 0.5, rng);
  const auto cols = solve_columns(f, b);
  const Eigen::MatrixXd bd = to_dense(b);
  for (int c = 0; c < 3; ++c) {
    Vector bc(12);
    for (int i = 0; i < 12; ++i) bc[i] = bd(i, c);
    const auto xc = solve(f, bc);
    for (int i = 0; i < 12; ++i) CHECK(cols[c][i] == doctest::Approx(xc[i]).epsilon(1e-14));
  }
}

TEST_CASE("cholesky breakdown reports the failing pivot") {
  const auto a = SparseMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, -1}, {2, 2, 1}});
  try {
    (void)cholesky(a);
    FAIL("expected breakdown");
  } catch (const FactorizationBreakdown& e) {
    CHECK(e.pivot() == 1);
  }
  CHECK_THROWS_AS(cholesky(SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 1, 1.0}, {0, 0, 1.0}})), Error);
}

TEST_CASE("semidefinite cholesky records null pivots") {
  const auto a = laplace1d(4);
  // singular graph Laplacian of a path
  auto lap = add(a, SparseMatrix::diagonal(std::vector<double>{-1, 0, 0, -1}));
  CholeskyOptions opts;
  opts.semidefinite = true;
  const auto f = cholesky(lap, opts);
  CHECK(f.null_pivots.size() == 1);
  const Vector b{1, -1, 2, -2};
  const auto x = solve(f, b);
  CHECK(norm2(residual(lap, x, b)) <= 1e-12);
}

TEST_CASE("minimum degree ordering is a permutation and prefers leaves") {
  // star graph: the hub has the largest degree
  std::vector<Triplet> t;
  for (Index i = 0; i < 6; ++i) t.push_back({i, i, 6.0});
  for (Index i = 1; i < 6; ++i) {
    t.push_back({0, i, -1.0});
    t.push_back({i, 0, -1.0});
  }
  const auto order = minimum_degree_ordering(SparseMatrix::from_triplets(6, 6, std::move(t)));
  std::vector<Index> sorted(order);
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<Index>{0, 1, 2, 3, 4, 5});
  CHECK(order.front() == 1);
}

TEST_CASE("matrix market round trip") {
  std::mt19937_64 rng(8);
  const auto a = random_sparse(7, 5, 0.4, rng);
  std::stringstream ss;
  write_matrix_market(ss, a);
  CHECK(ss.str().rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
  CHECK(read_matrix_market(ss) == a);
}

TEST_CASE("matrix market symmetric files are expanded") {
  std::stringstream ss("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2\n2 1 -1\n");
  const auto a = read_matrix_market(ss);
  CHECK(a.coeff(0, 1) == -1.0);
  CHECK(a.coeff(1, 0) == -1.0);
  std::stringstream bad("%%MatrixMarket matrix array real general\n");
  CHECK_THROWS_AS(read_matrix_market(bad), ParseError);
}

TEST_CASE("parallel_for covers the range once") {
  const unsigned saved = thread_limit();
  set_thread_limit(4);
  std::vector<int> hits(10000, 0);
  parallel_for(static_cast<Index>(hits.size()), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) ++hits[i];
  }, 100);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  set_thread_limit(saved);
}

TEST_CASE("parallel kernels match serial ones") {
  std::mt19937_64 rng(12);
  const auto a = random_sparse(3000, 3000, 0.002, rng);
  const auto x = random_vector(3000, rng);
  const unsigned saved = thread_limit();
  set_thread_limit(1);
  const auto y1 = spmv(a, x);
  const auto c1 = matmat(a, a);
  set_thread_limit(4);
  const auto y4 = spmv(a, x);
  const auto c4 = matmat(a, a);
  set_thread_limit(saved);
  CHECK(y1 == y4);
  CHECK(c1 == c4);
}
