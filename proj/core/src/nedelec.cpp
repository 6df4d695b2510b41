#include <hcurl/nedelec.hpp>

#include <cmath>

namespace hcurl {

DofMaps make_dof_maps(const Mesh2D& mesh, bool eliminate_boundary) {
  DofMaps d;
  d.eliminate_boundary = eliminate_boundary;
  d.free_edges.assign(mesh.edges.size(), kNoIndex);
  d.free_nodes.assign(mesh.vertices.size(), kNoIndex);
  for (Index e = 0; e < mesh.num_edges(); ++e)
    if (!eliminate_boundary || !mesh.boundary_edge[e]) {
      d.free_edges[e] = static_cast<Index>(d.dof_edge.size());
      d.dof_edge.push_back(e);
    }
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    if (!eliminate_boundary || !mesh.boundary_vertex[v]) {
      d.free_nodes[v] = static_cast<Index>(d.node_vertex.size());
      d.node_vertex.push_back(v);
    }
  return d;
}

SparseMatrix discrete_gradient(const Mesh2D& mesh, const DofMaps& dofs) {
  std::vector<Triplet> t;
  t.reserve(2 * dofs.dof_edge.size());
  for (Index r = 0; r < dofs.num_dofs(); ++r) {
    const Edge& e = mesh.edges[dofs.dof_edge[r]];
    if (const Index c = dofs.free_nodes[e.head]; c != kNoIndex) t.push_back({r, c, 1.0});
    if (const Index c = dofs.free_nodes[e.tail]; c != kNoIndex) t.push_back({r, c, -1.0});
  }
  return SparseMatrix::from_triplets(dofs.num_dofs(), dofs.num_nodes(), std::move(t));
}

std::array<Point, 4> reference_corners(CellKind kind) {
  if (kind == CellKind::triangle) return {Point{0, 0}, Point{1, 0}, Point{0, 1}, Point{0, 0}};
  return {Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}};
}

Point reference_edge_basis(CellKind kind, int k, double xi, double eta) {
  if (kind == CellKind::triangle) {
    const double lam[3] = {1.0 - xi - eta, xi, eta};
    const Point grad[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    const int a = k;
    const int b = (k + 1) % 3;
    return {lam[a] * grad[b].x - lam[b] * grad[a].x, lam[a] * grad[b].y - lam[b] * grad[a].y};
  }
  switch (k) {
  case 0: return {1.0 - eta, 0.0};
  case 1: return {0.0, xi};
  case 2: return {-eta, 0.0};
  default: return {0.0, -(1.0 - xi)};
  }
}

double reference_line_integral(CellKind kind, int k, Point a, Point b) {
  // two-point Gauss is exact: the integrand is linear along straight segments
  const double g = 0.5 / std::sqrt(3.0);
  double s = 0.0;
  for (double t : {0.5 - g, 0.5 + g}) {
    const Point phi = reference_edge_basis(kind, k, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
    s += 0.5 * (phi.x * (b.x - a.x) + phi.y * (b.y - a.y));
  }
  return s;
}

namespace {

ElementMatrices triangle_matrices(const Mesh2D& mesh, Index cell) {
  const auto& cv = mesh.cells[cell];
  const Point p[3] = {mesh.vertices[cv[0]], mesh.vertices[cv[1]], mesh.vertices[cv[2]]};
  const double area = mesh.signed_area(cell);
  Point grad[3];
  for (int i = 0; i < 3; ++i) {
    const Point& q = p[(i + 1) % 3];
    const Point& r = p[(i + 2) % 3];
    grad[i] = {(q.y - r.y) / (2.0 * area), (r.x - q.x) / (2.0 * area)};
  }
  auto gg = [&](int i, int j) { return grad[i].x * grad[j].x + grad[i].y * grad[j].y; };
  auto ll = [&](int i, int j) { return area * (i == j ? 2.0 : 1.0) / 12.0; };
  ElementMatrices m;
  for (int k = 0; k < 3; ++k) {
    const int a = k, b = (k + 1) % 3;
    for (int l = 0; l < 3; ++l) {
      const int c = l, d = (l + 1) % 3;
      // curl of every CCW Whitney function is 1/|T|
      m.curl[k][l] = 1.0 / area;
      m.mass[k][l] = ll(a, c) * gg(b, d) - ll(a, d) * gg(b, c) - ll(b, c) * gg(a, d) + ll(b, d) * gg(a, c);
    }
  }
  return m;
}

ElementMatrices quad_matrices(const Mesh2D& mesh, Index cell) {
  const auto& cv = mesh.cells[cell];
  const Point p[4] = {mesh.vertices[cv[0]], mesh.vertices[cv[1]], mesh.vertices[cv[2]], mesh.vertices[cv[3]]};
  // 3-point Gauss-Legendre on [0,1]
  const double gx[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  ElementMatrices m;
  for (int qi = 0; qi < 3; ++qi)
    for (int qj = 0; qj < 3; ++qj) {
      const double xi = gx[qi], eta = gx[qj], w = gw[qi] * gw[qj];
      // bilinear map derivatives
      const double dxdxi = (1 - eta) * (p[1].x - p[0].x) + eta * (p[2].x - p[3].x);
      const double dydxi = (1 - eta) * (p[1].y - p[0].y) + eta * (p[2].y - p[3].y);
      const double dxdeta = (1 - xi) * (p[3].x - p[0].x) + xi * (p[2].x - p[1].x);
      const double dydeta = (1 - xi) * (p[3].y - p[0].y) + xi * (p[2].y - p[1].y);
      const double det = dxdxi * dydeta - dxdeta * dydxi;
      // J^{-T}
      const double it00 = dydeta / det, it01 = -dydxi / det;
      const double it10 = -dxdeta / det, it11 = dxdxi / det;
      Point phys[4];
      for (int k = 0; k < 4; ++k) {
        const Point r = reference_edge_basis(CellKind::quadrilateral, k, xi, eta);
        phys[k] = {it00 * r.x + it01 * r.y, it10 * r.x + it11 * r.y};
      }
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          m.curl[k][l] += w / det;
          m.mass[k][l] += w * det * (phys[k].x * phys[l].x + phys[k].y * phys[l].y);
        }
    }
  return m;
}

} // namespace

ElementMatrices element_matrices(const Mesh2D& mesh, Index cell) {
  return mesh.kind == CellKind::triangle ? triangle_matrices(mesh, cell) : quad_matrices(mesh, cell);
}

CurlCurlSystem assemble(const Mesh2D& mesh, const CoefficientField& mu, double beta,
                        const AssemblyOptions& opts) {
  if (mesh.cells.empty()) throw Error("assemble: empty mesh");
  if (mu.mu.size() != mesh.cells.size()) throw DimensionMismatch("assemble: coefficient count != cell count");
  if (!(beta >= 0.0)) throw Error("assemble: beta must be nonnegative");
  for (double v : mu.mu)
    if (!(v > 0.0)) throw Error("assemble: nonpositive coefficient");

  CurlCurlSystem s;
  s.beta = beta;
  s.dofs = make_dof_maps(mesh, opts.eliminate_boundary);
  const Index n = s.dofs.num_dofs();
  const int nv = mesh.vertices_per_cell();

  std::vector<Triplet> ks, ms;
  ks.reserve(static_cast<std::size_t>(mesh.num_cells() * nv * nv));
  ms.reserve(ks.capacity());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const ElementMatrices em = element_matrices(mesh, c);
    const double inv_mu = 1.0 / mu.mu[c];
    for (int k = 0; k < nv; ++k) {
      const Index rk = s.dofs.free_edges[mesh.cell_edges[c][k]];
      if (rk == kNoIndex) continue;
      const double sk = mesh.cell_edge_signs[c][k];
      for (int l = 0; l < nv; ++l) {
        const Index rl = s.dofs.free_edges[mesh.cell_edges[c][l]];
        if (rl == kNoIndex) continue;
        const double sl = mesh.cell_edge_signs[c][l];
        ks.push_back({rk, rl, sk * sl * inv_mu * em.curl[k][l]});
        ms.push_back({rk, rl, sk * sl * em.mass[k][l]});
      }
    }
  }
  s.As = symmetrize(SparseMatrix::from_triplets(n, n, std::move(ks)));
  s.Am = symmetrize(SparseMatrix::from_triplets(n, n, std::move(ms)));
  s.A = beta == 0.0 ? s.As : add(s.As, s.Am, 1.0, beta);
  s.G = discrete_gradient(mesh, s.dofs);
  return s;
}

std::vector<Index> interior_node_rows(const CurlCurlSystem& system) {
  std::vector<Index> rows;
  for (Index r = 0; r < system.G.rows(); ++r)
    if (system.G.row_nnz(r) == 1) rows.push_back(r);
  return rows;
}

} // namespace hcurl
