#include <hcurl/coefficients.hpp>
#include <hcurl/delaunay.hpp>
#include <hcurl/mesh.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace hcurl;

namespace {

using Segment = std::pair<std::pair<double, double>, std::pair<double, double>>;

std::set<Segment> geometric_edges(const Mesh2D& m) {
  std::set<Segment> out;
  for (const auto& e : m.edges) {
    auto a = std::make_pair(m.vertices[e.tail].x, m.vertices[e.tail].y);
    auto b = std::make_pair(m.vertices[e.head].x, m.vertices[e.head].y);
    if (b < a) std::swap(a, b);
    out.insert({a, b});
  }
  return out;
}

Index count_boundary_edges_by_cells(const Mesh2D& m) {
  std::vector<int> uses(m.edges.size(), 0);
  for (const auto& ce : m.cell_edges)
    for (int k = 0; k < m.vertices_per_cell(); ++k) ++uses[ce[k]];
  return static_cast<Index>(std::count(uses.begin(), uses.end(), 1));
}

} // namespace

TEST_CASE("uniform triangle mesh counts") {
  const auto m0 = uniform_tri_mesh(0);
  CHECK(m0.num_vertices() == 4);
  CHECK(m0.num_cells() == 2);
  CHECK(m0.num_edges() == 5);
  const auto m1 = uniform_tri_mesh(1);
  CHECK(m1.num_vertices() == 9);
  CHECK(m1.num_cells() == 8);
  CHECK(m1.num_edges() == 16);
  for (int l = 0; l <= 5; ++l) {
    const auto m = uniform_tri_mesh(l);
    const Index s = (1 << l) + 1;
    CHECK(m.num_vertices() == s * s);
    CHECK(euler_characteristic(m) == 1);
    CHECK(validate_mesh(m).empty());
  }
}

TEST_CASE("uniform quad mesh counts") {
  const auto m0 = uniform_quad_mesh(0);
  CHECK(m0.num_cells() == 1);
  CHECK(m0.num_edges() == 4);
  const auto m1 = uniform_quad_mesh(1);
  CHECK(m1.num_vertices() == 9);
  CHECK(m1.num_cells() == 4);
  CHECK(m1.num_edges() == 12);
  for (int l = 0; l <= 5; ++l) {
    const auto m = uniform_quad_mesh(l);
    const Index k = 1 << l;
    CHECK(m.num_cells() == k * k);
    CHECK(m.num_edges() == 2 * k * (k + 1));
    CHECK(euler_characteristic(m) == 1);
    CHECK(validate_mesh(m).empty());
  }
}

TEST_CASE("mesh invariants on every constructor") {
  for (const auto& m : {uniform_tri_mesh(3), uniform_quad_mesh(3), delaunay_mesh(60, 1)}) {
    for (const auto& e : m.edges) CHECK(e.tail < e.head);
    for (Index c = 0; c < m.num_cells(); ++c) CHECK(m.signed_area(c) > 0.0);
    // boundary flags cross-checked against cell incidence
    const auto flagged = static_cast<Index>(std::count(m.boundary_edge.begin(), m.boundary_edge.end(), 1));
    CHECK(flagged == count_boundary_edges_by_cells(m));
    std::vector<char> touched(m.vertices.size(), 0);
    for (Index e = 0; e < m.num_edges(); ++e)
      if (m.boundary_edge[e]) touched[m.edges[e].tail] = touched[m.edges[e].head] = 1;
    CHECK(touched == m.boundary_vertex);
  }
}

TEST_CASE("cell edge signs follow counterclockwise traversal") {
  const auto m = uniform_tri_mesh(2);
  for (Index c = 0; c < m.num_cells(); ++c)
    for (int k = 0; k < 3; ++k) {
      const Index a = m.cells[c][k];
      const Edge& e = m.edges[m.cell_edges[c][k]];
      CHECK(m.cell_edge_signs[c][k] == (e.tail == a ? 1 : -1));
    }
}

TEST_CASE("refine of the single-square triangulation matches the uniform mesh") {
  const auto [fine, map] = refine(uniform_tri_mesh(0));
  CHECK(geometric_edges(fine) == geometric_edges(uniform_tri_mesh(1)));
  const auto [fine2, map2] = refine(uniform_tri_mesh(2));
  CHECK(geometric_edges(fine2) == geometric_edges(uniform_tri_mesh(3)));
  const auto [q, qmap] = refine(uniform_quad_mesh(1));
  CHECK(geometric_edges(q) == geometric_edges(uniform_quad_mesh(2)));
}

TEST_CASE("refinement map invariants") {
  for (const auto& coarse : {uniform_tri_mesh(1), uniform_quad_mesh(1), delaunay_mesh(30, 3)}) {
    const auto [fine, map] = refine(coarse);
    CHECK(fine.num_cells() == 4 * coarse.num_cells());
    CHECK(validate_mesh(fine).empty());
    for (Index e = 0; e < coarse.num_edges(); ++e) {
      const Edge& c1 = fine.edges[map.coarse_edge_children[e][0]];
      const Edge& c2 = fine.edges[map.coarse_edge_children[e][1]];
      const Index mid = map.edge_midpoint[e];
      const Index tail = map.coarse_vertex_to_fine[coarse.edges[e].tail];
      const Index head = map.coarse_vertex_to_fine[coarse.edges[e].head];
      CHECK((c1.tail == mid || c1.head == mid));
      CHECK((c2.tail == mid || c2.head == mid));
      CHECK((c1.tail == tail || c1.head == tail));
      CHECK((c2.tail == head || c2.head == head));
      const Point pm = fine.vertices[mid];
      const Point pa = coarse.vertices[coarse.edges[e].tail];
      const Point pb = coarse.vertices[coarse.edges[e].head];
      CHECK(pm.x == doctest::Approx(0.5 * (pa.x + pb.x)));
      CHECK(pm.y == doctest::Approx(0.5 * (pa.y + pb.y)));
    }
    for (Index c = 0; c < coarse.num_cells(); ++c)
      for (Index child : map.cell_children[c]) {
        if (coarse.kind == CellKind::triangle || child != kNoIndex) {
          CHECK(child >= 0);
          CHECK(child < fine.num_cells());
        }
      }
  }
}

TEST_CASE("renumbering keeps geometry and remaps the refinement map") {
  const auto coarse = uniform_quad_mesh(1);
  const auto [fine, map] = refine(coarse);
  const auto new_of_old = row_major_order(fine);
  const auto [rfine, rmap] = renumber_fine_vertices(fine, map, new_of_old);
  CHECK(geometric_edges(rfine) == geometric_edges(fine));
  CHECK(validate_mesh(rfine).empty());
  for (Index v = 1; v < rfine.num_vertices(); ++v) {
    const Point a = rfine.vertices[v - 1];
    const Point b = rfine.vertices[v];
    CHECK((a.y < b.y || (a.y == b.y && a.x < b.x)));
  }
  for (Index e = 0; e < coarse.num_edges(); ++e)
    CHECK(rmap.edge_midpoint[e] == new_of_old[map.edge_midpoint[e]]);
}

TEST_CASE("mesh file examples") {
  const auto m = load_mesh_text("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n");
  CHECK(m.num_edges() == 5);
  CHECK(std::count(m.boundary_edge.begin(), m.boundary_edge.end(), 1) == 4);

  std::stringstream ss;
  const auto d = delaunay_mesh(60, 2);
  save_mesh(ss, d);
  const auto back = load_mesh(ss);
  CHECK(back.vertices == d.vertices);
  CHECK(back.cells == d.cells);
  CHECK(euler_characteristic(back) == 1);
}

TEST_CASE("clockwise cells are flipped with a warning") {
  std::vector<std::string> warnings;
  const auto m = load_mesh_text("3 1\n0 0\n1 0\n0 1\n0 2 1\n", &warnings);
  CHECK(warnings.size() == 1);
  CHECK(m.signed_area(0) > 0.0);
}

TEST_CASE("malformed mesh files are rejected") {
  CHECK_THROWS_AS(load_mesh_text("3 1\n0 0\n1 0\n"), ParseError);
  CHECK_THROWS_AS(load_mesh_text("4 1\n0 0\n1 0\n0 1\n5 5\n0 1 2\n"), Error);
  CHECK_THROWS_AS(load_mesh_text("3 1\n0 0\n1 0\n0 1\n0 1 7\n"), Error);
}

TEST_CASE("delaunay examples") {
  const auto four = delaunay_mesh(4, 1);
  CHECK(four.num_cells() == 2);
  const auto a = delaunay_mesh(60, 5);
  const auto b = delaunay_mesh(60, 5);
  CHECK(a.vertices == b.vertices);
  CHECK(a.cells == b.cells);
  CHECK(a.num_vertices() == 60);
  CHECK(satisfies_empty_circumcircle(a));
  CHECK(euler_characteristic(a) == 1);
  CHECK(a.num_cells() > 80);
  CHECK(a.num_cells() < 120);
  CHECK_THROWS(delaunay_mesh(3, 1));
}

TEST_CASE("empty circumcircle property over seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = delaunay_mesh(40 + static_cast<int>(seed) * 7, seed);
    CHECK(satisfies_empty_circumcircle(m));
    CHECK(validate_mesh(m).empty());
    double area = 0.0;
    for (Index c = 0; c < m.num_cells(); ++c) area += m.signed_area(c);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cocircular grid points triangulate") {
  std::vector<Point> pts;
  for (int j = 0; j <= 3; ++j)
    for (int i = 0; i <= 3; ++i) pts.push_back({i / 3.0, j / 3.0});
  const auto m = delaunay_triangulate(pts);
  CHECK(m.num_cells() == 18);
  CHECK(satisfies_empty_circumcircle(m));
}

TEST_CASE("stripe coefficients") {
  const auto m1 = uniform_tri_mesh(1);
  const auto s1 = assign_mu_stripes(m1, 1);
  for (Index c = 0; c < m1.num_cells(); ++c) CHECK(s1.mu[c] == (m1.centroid(c).x < 0.5 ? 10.0 : 0.1));
  const auto s0 = assign_mu_stripes(uniform_tri_mesh(0), 0);
  CHECK(std::all_of(s0.mu.begin(), s0.mu.end(), [](double v) { return v == 10.0; }));
  const auto iso = assign_mu_stripes(uniform_tri_mesh(3), 3, 2.0, 2.0);
  CHECK(std::all_of(iso.mu.begin(), iso.mu.end(), [](double v) { return v == 2.0; }));
}

TEST_CASE("region coefficients") {
  const auto m = delaunay_mesh(60, 1);
  const auto none = assign_mu_regions(m, {}, 3.0);
  CHECK(std::all_of(none.mu.begin(), none.mu.end(), [](double v) { return v == 3.0; }));
  const auto whole = assign_mu_regions(m, {{{0, 0, 1, 1}, 7.0}}, 3.0);
  CHECK(std::all_of(whole.mu.begin(), whole.mu.end(), [](double v) { return v == 7.0; }));
  const auto board = assign_mu_regions(m, checkerboard_regions(4, 0.1, 10.0), 1.0);
  for (Index c = 0; c < m.num_cells(); ++c) {
    const Point p = m.centroid(c);
    const int i = std::min(3, static_cast<int>(std::floor(p.x * 4)));
    const int j = std::min(3, static_cast<int>(std::floor(p.y * 4)));
    // centroids on a box edge belong to the first box listed
    if (std::abs(p.x * 4 - std::round(p.x * 4)) < 1e-12 || std::abs(p.y * 4 - std::round(p.y * 4)) < 1e-12) continue;
    CHECK(board.mu[c] == ((i + j) % 2 == 0 ? 0.1 : 10.0));
  }
}

TEST_CASE("region assignment on the fine mesh equals inheritance when boxes align") {
  const auto coarse = uniform_tri_mesh(2);
  const auto [fine, map] = refine(coarse);
  const auto regions = checkerboard_regions(4, 0.1, 10.0);
  const auto inherited = inherit_coefficients(assign_mu_regions(coarse, regions, 1.0), map, fine.num_cells());
  CHECK(inherited.mu == assign_mu_regions(fine, regions, 1.0).mu);
}
