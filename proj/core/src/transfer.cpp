#include <hcurl/transfer.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace hcurl {

namespace {

std::vector<std::vector<Index>> components(const SparseMatrix& a) {
  const Index n = a.rows();
  std::vector<Index> comp(static_cast<std::size_t>(n), kNoIndex);
  std::vector<std::vector<Index>> out;
  for (Index s = 0; s < n; ++s) {
    if (comp[s] != kNoIndex) continue;
    const Index id = static_cast<Index>(out.size());
    out.emplace_back();
    std::queue<Index> q;
    q.push(s);
    comp[s] = id;
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      out.back().push_back(v);
      for (Index w : a.row_cols(v))
        if (comp[w] == kNoIndex) {
          comp[w] = id;
          q.push(w);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

} // namespace

std::pair<SparseMatrix, std::vector<Index>> coarse_gradient(const SparseMatrix& r, const SparseMatrix& g,
                                                            std::span<const Index> restrict_to) {
  const SparseMatrix rg = matmat(r, g);
  std::vector<char> nonzero(static_cast<std::size_t>(rg.cols()), 0);
  for (Index c : rg.col_indices()) nonzero[c] = 1;
  std::vector<Index> cols;
  if (restrict_to.empty()) {
    for (Index c = 0; c < rg.cols(); ++c)
      if (nonzero[c]) cols.push_back(c);
  } else {
    for (Index c : restrict_to)
      if (c < rg.cols() && nonzero[c]) cols.push_back(c);
    std::sort(cols.begin(), cols.end());
  }
  return {matmat(rg, injection(rg.cols(), cols)), cols};
}

TransferSet sparse_ideal_interp(const SparseMatrix& a, const SparseMatrix& g, const Splitting& split,
                                const InterpOptions& opts) {
  if (a.rows() != split.n || a.cols() != split.n || g.rows() != split.n)
    throw DimensionMismatch("sparse_ideal_interp");
  const RealizedSplitting rs = realize_RS(split);
  const SparseMatrix rt = transpose(rs.R);
  const std::vector<Index>& interior = split.interior_dofs;
  const Index nc = rs.R.rows();

  std::vector<Triplet> p = rt.to_triplets();
  TransferSet out;
  if (!interior.empty() && nc > 0) {
    std::vector<Index> all(static_cast<std::size_t>(nc));
    for (Index c = 0; c < nc; ++c) all[c] = c;
    const SparseMatrix b = extract_submatrix(matmat(a, rt), interior, all);
    const SparseMatrix aii = extract_submatrix(a, interior, interior);
    CholeskyOptions copts;
    copts.semidefinite = opts.semidefinite;
    for (const auto& comp : components(aii)) {
      const SparseMatrix bc = extract_submatrix(b, comp, all);
      if (bc.nnz() == 0) continue;
      CholeskyFactor f;
      try {
        f = cholesky(extract_submatrix(aii, comp, comp), copts);
      } catch (const FactorizationBreakdown& e) {
        throw FactorizationBreakdown("sparse_ideal_interp: singular interior block at dof " +
                                         std::to_string(interior[comp[e.pivot()]]),
                                     interior[comp[e.pivot()]]);
      }
      out.interior_null_pivots += static_cast<Index>(f.null_pivots.size());
      // solve column by column for the coarse variables touching this block
      const SparseMatrix bct = transpose(bc);
      for (Index c = 0; c < nc; ++c) {
        if (bct.row_nnz(c) == 0) continue;
        Vector rhs(comp.size(), 0.0);
        const auto rows = bct.row_cols(c);
        const auto vals = bct.row_values(c);
        for (std::size_t q = 0; q < rows.size(); ++q) rhs[rows[q]] = vals[q];
        const Vector x = solve(f, rhs);
        for (std::size_t r = 0; r < comp.size(); ++r)
          if (x[r] != 0.0) p.push_back({interior[comp[r]], c, -x[r]});
      }
    }
  }
  out.P = SparseMatrix::from_triplets(split.n, nc, std::move(p));
  auto [gc, cols] = coarse_gradient(
      rs.R, g, opts.mode == CoarseNodeMode::coarse_nodes ? std::span<const Index>(split.coarse_nodes)
                                                         : std::span<const Index>());
  out.Gc = std::move(gc);
  out.coarse_node_injection = std::move(cols);
  out.R = rs.R;
  return out;
}

Eigen::MatrixXd to_dense(const SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    const auto c = a.row_cols(i);
    const auto v = a.row_values(i);
    for (std::size_t p = 0; p < c.size(); ++p) d(i, c[p]) = v[p];
  }
  return d;
}

Eigen::MatrixXd ideal_interp_dense(const SparseMatrix& a, const SparseMatrix& r, const SparseMatrix& s,
                                   const DenseInterpOptions& opts) {
  if (a.rows() > opts.dense_cap) throw Error("ideal_interp_dense: size exceeds the dense cap");
  if (r.cols() != a.rows() || s.rows() != a.rows()) throw DimensionMismatch("ideal_interp_dense");
  const Eigen::MatrixXd ad = to_dense(a);
  const Eigen::MatrixXd rt = to_dense(r).transpose();
  if (s.cols() == 0) return rt;
  const Eigen::MatrixXd sd = to_dense(s);
  const Eigen::MatrixXd sas = sd.transpose() * ad * sd;
  const Eigen::MatrixXd rhs = sd.transpose() * ad * rt;
  Eigen::MatrixXd y;
  if (opts.pseudo_inverse) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sas);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cut = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > cut) inv(i) = 1.0 / ev(i);
    y = es.eigenvectors() * inv.asDiagonal() * (es.eigenvectors().transpose() * rhs);
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(sas);
    if (llt.info() != Eigen::Success) throw Error("ideal_interp_dense: S^T A S is singular");
    y = llt.solve(rhs);
  }
  return rt - sd * y;
}

namespace {

// reference coordinates of the fine vertices inside coarse cell c
std::vector<std::pair<Index, Point>> local_reference_points(const Mesh2D& coarse, const RefinementMap& map,
                                                            Index c) {
  const auto corners = reference_corners(coarse.kind);
  const int nv = coarse.vertices_per_cell();
  std::vector<std::pair<Index, Point>> pts;
  for (int k = 0; k < nv; ++k) {
    const Point a = corners[k];
    const Point b = corners[(k + 1) % nv];
    pts.push_back({map.coarse_vertex_to_fine[coarse.cells[c][k]], a});
    pts.push_back({map.edge_midpoint[coarse.cell_edges[c][k]], {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}});
  }
  // the quad center index is filled in by the caller
  if (coarse.kind == CellKind::quadrilateral) pts.push_back({kNoIndex, {0.5, 0.5}});
  return pts;
}

} // namespace

SparseMatrix geometric_interp(const Mesh2D& coarse, const Mesh2D& fine, const RefinementMap& map,
                              const DofMaps& coarse_dofs, const DofMaps& fine_dofs) {
  if (map.cell_children.size() != coarse.cells.size() || map.vertex_parent.size() != fine.vertices.size() ||
      coarse.kind != fine.kind)
    throw Error("geometric_interp: meshes are not nested through this refinement map");
  const int nv = coarse.vertices_per_cell();
  std::map<std::pair<Index, Index>, double> entries;
  std::vector<Index> center_of_cell(coarse.cells.size(), kNoIndex);
  for (Index v = 0; v < fine.num_vertices(); ++v)
    if (map.vertex_parent[v].kind == VertexParent::Kind::cell_center) center_of_cell[map.vertex_parent[v].index] = v;

  for (Index c = 0; c < coarse.num_cells(); ++c) {
    auto pts = local_reference_points(coarse, map, c);
    if (coarse.kind == CellKind::quadrilateral) pts.back().first = center_of_cell[c];
    auto ref = [&](Index v) {
      for (const auto& [id, p] : pts)
        if (id == v) return p;
      throw Error("geometric_interp: fine vertex outside its parent cell");
    };
    for (Index child : map.cell_children[c]) {
      if (child == kNoIndex) continue;
      for (int l = 0; l < nv; ++l) {
        const Index fe = fine.cell_edges[child][l];
        const Index row = fine_dofs.free_edges[fe];
        if (row == kNoIndex) continue;
        const Point a = ref(fine.edges[fe].tail);
        const Point b = ref(fine.edges[fe].head);
        for (int k = 0; k < nv; ++k) {
          const Index col = coarse_dofs.free_edges[coarse.cell_edges[c][k]];
          if (col == kNoIndex) continue;
          double v = coarse.cell_edge_signs[c][k] * reference_line_integral(coarse.kind, k, a, b);
          if (std::abs(v) < 1e-14) continue;
          entries[{row, col}] = v;
        }
      }
    }
  }
  std::vector<Triplet> t;
  t.reserve(entries.size());
  for (const auto& [rc, v] : entries) t.push_back({rc.first, rc.second, v});
  return SparseMatrix::from_triplets(fine_dofs.num_dofs(), coarse_dofs.num_dofs(), std::move(t));
}

SparseMatrix nodal_interp(const Mesh2D& coarse, const Mesh2D& fine, const RefinementMap& map,
                          const DofMaps& coarse_dofs, const DofMaps& fine_dofs) {
  std::vector<Triplet> t;
  auto add = [&](Index row, Index coarse_vertex, double w) {
    const Index col = coarse_dofs.free_nodes[coarse_vertex];
    if (col != kNoIndex) t.push_back({row, col, w});
  };
  for (Index v = 0; v < fine.num_vertices(); ++v) {
    const Index row = fine_dofs.free_nodes[v];
    if (row == kNoIndex) continue;
    const VertexParent& p = map.vertex_parent[v];
    switch (p.kind) {
    case VertexParent::Kind::vertex: add(row, p.index, 1.0); break;
    case VertexParent::Kind::edge_midpoint:
      add(row, coarse.edges[p.index].tail, 0.5);
      add(row, coarse.edges[p.index].head, 0.5);
      break;
    case VertexParent::Kind::cell_center:
      for (int k = 0; k < coarse.vertices_per_cell(); ++k) add(row, coarse.cells[p.index][k], 0.25);
      break;
    }
  }
  return SparseMatrix::from_triplets(fine_dofs.num_nodes(), coarse_dofs.num_nodes(), std::move(t));
}

} // namespace hcurl
