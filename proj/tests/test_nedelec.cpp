#include "test_helpers.hpp"

#include <hcurl/cholesky.hpp>
#include <hcurl/delaunay.hpp>
#include <hcurl/nedelec.hpp>

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace hcurl;
using namespace hcurl::testing;

namespace {

// Whitney function of edge (a,b) on a triangle: l_a grad l_b - l_b grad l_a
struct WhitneyOracle {
  std::array<Point, 3> p;
  double area;
  std::array<Point, 3> grad;

  explicit WhitneyOracle(std::array<Point, 3> v) : p(v) {
    area = 0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
    for (int i = 0; i < 3; ++i) {
      const Point& b = p[(i + 1) % 3];
      const Point& c = p[(i + 2) % 3];
      grad[i] = {(b.y - c.y) / (2 * area), (c.x - b.x) / (2 * area)};
    }
  }
  Point phi(int k, const std::array<double, 3>& l) const {
    const int a = k, b = (k + 1) % 3;
    return {l[a] * grad[b].x - l[b] * grad[a].x, l[a] * grad[b].y - l[b] * grad[a].y};
  }
  double curl(int k) const {
    const int a = k, b = (k + 1) % 3;
    return 2.0 * (grad[a].x * grad[b].y - grad[a].y * grad[b].x);
  }
};

Eigen::Matrix3d oracle_mass(const WhitneyOracle& w) {
  // degree 2 rule: edge midpoints
  const std::array<std::array<double, 3>, 3> pts{{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (const auto& l : pts)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Point a = w.phi(i, l), b = w.phi(j, l);
        m(i, j) += w.area / 3.0 * (a.x * b.x + a.y * b.y);
      }
  return m;
}

Mesh2D single_triangle(Point a, Point b, Point c) {
  return build_mesh(CellKind::triangle, {a, b, c}, {{0, 1, 2, kNoIndex}});
}

std::pair<double, double> tangent_integral_oracle(const WhitneyOracle& w, int k, int e) {
  // Gauss 2 point rule along local edge e
  const Point& a = w.p[e];
  const Point& b = w.p[(e + 1) % 3];
  double s = 0.0;
  for (double t : {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)}) {
    std::array<double, 3> l{0, 0, 0};
    l[e] = 1 - t;
    l[(e + 1) % 3] = t;
    const Point f = w.phi(k, l);
    s += 0.5 * (f.x * (b.x - a.x) + f.y * (b.y - a.y));
  }
  return {s, k == e ? 1.0 : 0.0};
}

} // namespace

TEST_CASE("oracle whitney functions have unit tangential moments") {
  const WhitneyOracle w({Point{0.1, 0.2}, Point{1.3, 0.4}, Point{0.5, 1.1}});
  for (int k = 0; k < 3; ++k)
    for (int e = 0; e < 3; ++e) {
      const auto [got, want] = tangent_integral_oracle(w, k, e);
      CHECK(got == doctest::Approx(want).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("reference triangle element matrices match the quadrature oracle") {
  const auto mesh = single_triangle({0, 0}, {1, 0}, {0, 1});
  const auto em = element_matrices(mesh, 0);
  const WhitneyOracle w({Point{0, 0}, Point{1, 0}, Point{0, 1}});
  const Eigen::Matrix3d mass = oracle_mass(w);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(em.curl[i][j] - w.curl(i) * w.curl(j) * w.area) <= 1e-13);
      CHECK(std::abs(em.mass[i][j] - mass(i, j)) <= 1e-13);
    }
  // (1/|T|) sigma sigma^T in the counterclockwise local basis
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(em.curl[i][j] == doctest::Approx(2.0));
}

TEST_CASE("general triangle element matrices match the quadrature oracle") {
  const std::array<Point, 3> v{Point{0.1, 0.2}, Point{1.3, 0.4}, Point{0.5, 1.1}};
  const auto mesh = single_triangle(v[0], v[1], v[2]);
  const auto em = element_matrices(mesh, 0);
  const WhitneyOracle w(v);
  const Eigen::Matrix3d mass = oracle_mass(w);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(em.curl[i][j] - w.curl(i) * w.curl(j) * w.area) <= 1e-13);
      CHECK(std::abs(em.mass[i][j] - mass(i, j)) <= 1e-13);
    }
}

TEST_CASE("rectangle element matrices match closed form") {
  const double a = 2.0, b = 0.5;
  const auto mesh = build_mesh(CellKind::quadrilateral, {{0, 0}, {a, 0}, {a, b}, {0, b}}, {{0, 1, 2, 3}});
  const auto em = element_matrices(mesh, 0);
  // curl of every counterclockwise basis function is 1/|K|
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(em.curl[i][j] == doctest::Approx(1.0 / (a * b)).epsilon(1e-13));
  CHECK(em.mass[0][0] == doctest::Approx(b / (3 * a)).epsilon(1e-13));
  CHECK(em.mass[0][2] == doctest::Approx(-b / (6 * a)).epsilon(1e-13));
  CHECK(em.mass[1][1] == doctest::Approx(a / (3 * b)).epsilon(1e-13));
  CHECK(em.mass[1][3] == doctest::Approx(-a / (6 * b)).epsilon(1e-13));
  CHECK(std::abs(em.mass[0][1]) <= 1e-15);
  CHECK(std::abs(em.mass[0][3]) <= 1e-15);
}

TEST_CASE("reference basis moments are unit on their own edge") {
  for (CellKind kind : {CellKind::triangle, CellKind::quadrilateral}) {
    const auto c = reference_corners(kind);
    const int nv = kind == CellKind::triangle ? 3 : 4;
    for (int k = 0; k < nv; ++k)
      for (int e = 0; e < nv; ++e) {
        const double v = reference_line_integral(kind, k, c[e], c[(e + 1) % nv]);
        CHECK(v == doctest::Approx(k == e ? 1.0 : 0.0).scale(1.0).epsilon(1e-14));
      }
  }
}

TEST_CASE("exact sequence on assembled meshes") {
  std::vector<Mesh2D> meshes{uniform_tri_mesh(1), uniform_tri_mesh(3), uniform_quad_mesh(1), uniform_quad_mesh(3),
                             delaunay_mesh(60, 1)};
  for (const auto& m : meshes)
    for (bool eliminate : {true, false}) {
      const auto sys = assemble(m, assign_mu_regions(m, checkerboard_regions(), 1.0), 0.3, {eliminate});
      const double rel = matmat(sys.As, sys.G).max_abs() / sys.As.max_abs();
      CHECK(rel <= 1e-12);
    }
}

TEST_CASE("system invariants") {
  const auto m = uniform_tri_mesh(3);
  const auto sys = assemble(m, assign_mu_stripes(m, 3), 0.25);
  CHECK(is_symmetric(sys.A));
  CHECK(is_symmetric(sys.As));
  CHECK(is_symmetric(sys.Am));
  CHECK(max_abs_diff(sys.A, add(sys.As, sys.Am, 1.0, 0.25)) <= 1e-14 * sys.A.max_abs());
  for (Index r = 0; r < sys.G.rows(); ++r) {
    const auto v = sys.G.row_values(r);
    const Edge& e = m.edges[sys.dofs.dof_edge[r]];
    const auto on_boundary = static_cast<std::size_t>(m.boundary_vertex[e.tail] + m.boundary_vertex[e.head]);
    CHECK(v.size() == 2 - on_boundary);
    for (double x : v) CHECK(std::abs(x) == 1.0);
    if (v.size() == 2) CHECK(v[0] == -v[1]);
  }
  CHECK_NOTHROW(cholesky(sys.Am));
  CHECK_NOTHROW(cholesky(sys.A));
  for (Index i = 0; i < sys.Am.rows(); ++i) CHECK(sys.Am.coeff(i, i) > 0.0);
}

TEST_CASE("zero shift gives the stiffness matrix exactly") {
  const auto m = uniform_quad_mesh(2);
  const auto sys = assemble(m, constant_mu(m), 0.0);
  CHECK(sys.A == sys.As);
}

TEST_CASE("stiffness kernel dimension equals the number of gradient columns") {
  for (const auto& m : {uniform_tri_mesh(2), uniform_quad_mesh(2), delaunay_mesh(20, 2)}) {
    const auto sys = assemble(m, constant_mu(m), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(sys.As));
    const double tol = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
    const auto zeros = (es.eigenvalues().array().abs() < tol).count();
    CHECK(zeros == sys.G.cols());
    CHECK(es.eigenvalues().minCoeff() > -tol);
  }
  const auto m = uniform_tri_mesh(2);
  const auto kept = assemble(m, constant_mu(m), 0.0, {false});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(kept.As));
  const double tol = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
  CHECK((es.eigenvalues().array().abs() < tol).count() == m.num_vertices() - 1);
}

TEST_CASE("halving mu doubles the stiffness") {
  const auto m = uniform_tri_mesh(2);
  const auto a = assemble(m, constant_mu(m, 1.0), 0.0);
  const auto b = assemble(m, constant_mu(m, 0.5), 0.0);
  CHECK(max_abs_diff(b.As, a.As.scaled(2.0)) <= 1e-14 * b.As.max_abs());
}

TEST_CASE("dof maps and gradient orientation") {
  const auto m = uniform_tri_mesh(1);
  const auto d = make_dof_maps(m);
  Index interior_edges = 0;
  for (Index e = 0; e < m.num_edges(); ++e) interior_edges += m.boundary_edge[e] ? 0 : 1;
  CHECK(d.num_dofs() == interior_edges);
  CHECK(d.num_nodes() == 1);
  const auto g = discrete_gradient(m, d);
  for (Index r = 0; r < g.rows(); ++r) {
    const Edge& e = m.edges[d.dof_edge[r]];
    if (d.free_nodes[e.head] != kNoIndex) CHECK(g.coeff(r, d.free_nodes[e.head]) == 1.0);
    if (d.free_nodes[e.tail] != kNoIndex) CHECK(g.coeff(r, d.free_nodes[e.tail]) == -1.0);
  }
  const auto all = make_dof_maps(m, false);
  CHECK(all.num_dofs() == m.num_edges());
  CHECK(all.num_nodes() == m.num_vertices());
}

TEST_CASE("interior node rows") {
  const auto m = uniform_tri_mesh(1);
  const auto sys = assemble(m, constant_mu(m), 0.01);
  const auto rows = interior_node_rows(sys);
  Index expected = 0;
  for (Index e = 0; e < m.num_edges(); ++e) {
    if (m.boundary_edge[e]) continue;
    const int hits = m.boundary_vertex[m.edges[e].tail] + m.boundary_vertex[m.edges[e].head];
    expected += hits == 1 ? 1 : 0;
  }
  CHECK(static_cast<Index>(rows.size()) == expected);
  for (Index r : rows) CHECK(sys.G.row_nnz(r) == 1);

  const auto m3 = uniform_tri_mesh(3);
  const auto s3 = assemble(m3, constant_mu(m3), 0.01);
  Index expected3 = 0;
  for (Index e = 0; e < m3.num_edges(); ++e)
    if (!m3.boundary_edge[e] && m3.boundary_vertex[m3.edges[e].tail] + m3.boundary_vertex[m3.edges[e].head] == 1)
      ++expected3;
  CHECK(static_cast<Index>(interior_node_rows(s3).size()) == expected3);

  const auto kept = assemble(m, constant_mu(m), 0.01, {false});
  CHECK(interior_node_rows(kept).empty());
}

TEST_CASE("assembly errors") {
  const auto m = uniform_tri_mesh(1);
  CHECK_THROWS_AS(assemble(Mesh2D{}, CoefficientField{}, 0.0), Error);
  CHECK_THROWS_AS(assemble(m, constant_mu(m, 0.0), 0.0), Error);
  CHECK_THROWS_AS(assemble(m, constant_mu(m, -1.0), 0.0), Error);
  CHECK_THROWS_AS(assemble(m, constant_mu(m), -0.1), Error);
  CHECK_THROWS_AS(assemble(m, CoefficientField{{1.0}}, 0.0), Error);
}
