#include <hcurl/splitting.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

namespace hcurl {

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : -1; }

// Drops entries that are roundoff relative to their row maximum so that the
// nodal graph reflects the mesh connectivity.
SparseMatrix drop_roundoff(const SparseMatrix& a, double rel = 1e-12) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz()));
  for (Index i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (std::abs(vals[p]) > rel * m) t.push_back({i, cols[p], vals[p]});
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

// node -> (neighbour, row) through rows of an incidence matrix with two entries
std::vector<std::vector<std::pair<Index, Index>>> node_edges(const SparseMatrix& gt) {
  std::vector<std::vector<std::pair<Index, Index>>> adj(static_cast<std::size_t>(gt.cols()));
  for (Index r = 0; r < gt.rows(); ++r) {
    const auto c = gt.row_cols(r);
    if (c.size() != 2) continue;
    adj[c[0]].push_back({c[1], r});
    adj[c[1]].push_back({c[0], r});
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

void fill_interior(Splitting& s) {
  std::vector<char> used(static_cast<std::size_t>(s.n), 0);
  for (const auto& p : s.exterior_pairs) used[p.dof1] = used[p.dof2] = 1;
  s.interior_dofs.clear();
  for (Index d = 0; d < s.n; ++d)
    if (!used[d]) s.interior_dofs.push_back(d);
}

} // namespace

std::string validate_splitting(const Splitting& split) {
  std::ostringstream err;
  std::vector<int> count(static_cast<std::size_t>(std::max<Index>(split.n, 0)), 0);
  auto mark = [&](Index d) {
    if (d < 0 || d >= split.n) {
      err << "dof " << d << " out of range; ";
      return;
    }
    ++count[d];
  };
  std::set<Index> mids;
  for (const auto& p : split.exterior_pairs) {
    mark(p.dof1);
    mark(p.dof2);
    if (std::abs(p.sign1) != 1 || std::abs(p.sign2) != 1) err << "sign not +-1; ";
    if (!mids.insert(p.mid_node).second) err << "node " << p.mid_node << " used by two pairs; ";
  }
  for (Index d : split.interior_dofs) mark(d);
  for (Index d = 0; d < split.n; ++d)
    if (count[d] != 1) err << "dof " << d << " covered " << count[d] << " times; ";
  return err.str();
}

AugmentedGradient augment_gradient(const SparseMatrix& g) {
  std::vector<Triplet> t = g.to_triplets();
  AugmentedGradient out;
  Index next = g.cols();
  for (Index r = 0; r < g.rows(); ++r) {
    const auto vals = g.row_values(r);
    if (vals.size() == 1) {
      t.push_back({r, next, -vals[0]});
      out.boundary_cols.push_back(next);
      out.boundary_rows.push_back(r);
      ++next;
    } else if (vals.size() == 2) {
      if (sign_of(vals[0]) == sign_of(vals[1]))
        throw Error("augment_gradient: row " + std::to_string(r) + " entries share a sign");
    } else if (vals.size() > 2) {
      throw Error("augment_gradient: row " + std::to_string(r) + " has " + std::to_string(vals.size()) +
                  " nonzeros");
    }
  }
  out.gtilde = SparseMatrix::from_triplets(g.rows(), next, std::move(t));
  return out;
}

SparseMatrix nodal_dual(const SparseMatrix& a, const SparseMatrix& gtilde) {
  if (a.cols() != gtilde.rows() || a.rows() != a.cols()) throw DimensionMismatch("nodal_dual");
  return galerkin_product(gtilde, a);
}

NodalSplit classical_cf(const SparseMatrix& nodal, std::span<const Index> c_init, std::span<const Index> f_init,
                        const CfOptions& opts) {
  const Index n = nodal.rows();
  enum : char { U = 0, C = 1, F = 2 };
  std::vector<char> state(static_cast<std::size_t>(n), U);
  for (Index c : c_init) state.at(c) = C;
  for (Index f : f_init) {
    if (state.at(f) == C) throw Error("classical_cf: initial coarse and fine sets overlap");
    state[f] = F;
  }

  // strong[i]: nodes i depends on; influences[i]: nodes depending on i
  std::vector<std::vector<Index>> strong(static_cast<std::size_t>(n)), influences(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto cols = nodal.row_cols(i);
    const auto vals = nodal.row_values(i);
    double m = 0.0;
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (cols[p] != i) m = std::max(m, std::abs(vals[p]));
    if (m == 0.0) continue;
    for (std::size_t p = 0; p < cols.size(); ++p)
      if (cols[p] != i && std::abs(vals[p]) >= opts.theta * m) {
        strong[i].push_back(cols[p]);
        influences[cols[p]].push_back(i);
      }
  }

  std::vector<int> measure(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i)
    for (Index j : influences[i]) measure[i] += state[j] == U ? 1 : (state[j] == F ? opts.fine_weight : 0);

  std::set<std::pair<int, Index>> queue;
  for (Index i = 0; i < n; ++i)
    if (state[i] == U) queue.insert({-measure[i], i});
  auto bump = [&](Index k, int delta) {
    if (state[k] != U) return;
    queue.erase({-measure[k], k});
    measure[k] += delta;
    queue.insert({-measure[k], k});
  };

  while (!queue.empty()) {
    const Index i = queue.begin()->second;
    queue.erase(queue.begin());
    state[i] = C;
    for (Index k : strong[i]) bump(k, -1);
    for (Index j : nodal.row_cols(i)) {
      if (j == i || state[j] != U) continue;
      queue.erase({-measure[j], j});
      state[j] = F;
      for (Index k : strong[j]) bump(k, opts.fine_weight - 1);
    }
  }

  NodalSplit out;
  for (Index i = 0; i < n; ++i) (state[i] == C ? out.coarse : out.fine).push_back(i);
  return out;
}

NodalSplit nodal_cf(const SparseMatrix& a, const AugmentedGradient& aug, const CfOptions& opts) {
  const SparseMatrix nodal = drop_roundoff(nodal_dual(a, aug.gtilde));
  std::vector<char> in_b(static_cast<std::size_t>(nodal.rows()), 0);
  for (Index b : aug.boundary_cols) in_b[b] = 1;
  std::vector<Index> f_init;
  for (Index b : aug.boundary_cols)
    for (Index j : nodal.row_cols(b))
      if (!in_b[j]) f_init.push_back(j);
  std::sort(f_init.begin(), f_init.end());
  f_init.erase(std::unique(f_init.begin(), f_init.end()), f_init.end());

  NodalSplit cf = classical_cf(nodal, aug.boundary_cols, f_init, opts);
  std::erase_if(cf.coarse, [&](Index c) { return in_b[c] != 0; });
  return cf;
}

Splitting build_algebraic_splitting(const SparseMatrix& a, const SparseMatrix& g, const CfOptions& opts) {
  if (a.rows() != g.rows()) throw DimensionMismatch("build_algebraic_splitting");
  const AugmentedGradient aug = augment_gradient(g);
  const SparseMatrix nodal = drop_roundoff(nodal_dual(a, aug.gtilde));
  const NodalSplit cf = nodal_cf(a, aug, opts);
  const Index m = aug.gtilde.cols();

  Splitting s;
  s.n = a.rows();
  s.coarse_nodes = cf.coarse;

  std::vector<char> in_b(static_cast<std::size_t>(m), 0), coarse(static_cast<std::size_t>(m), 0);
  for (Index b : aug.boundary_cols) in_b[b] = coarse[b] = 1;
  for (Index c : cf.coarse) coarse[c] = 1;
  std::vector<Index> cset;
  for (Index i = 0; i < m; ++i)
    if (coarse[i]) cset.push_back(i);

  const auto adj = node_edges(aug.gtilde);
  std::vector<char> assigned(static_cast<std::size_t>(s.n), 0), used_mid(static_cast<std::size_t>(m), 0);
  std::vector<Index> stamp(static_cast<std::size_t>(m), kNoIndex);

  for (Index i : cset) {
    for (Index k : nodal.row_cols(i)) stamp[k] = i;
    std::vector<Index> partners;
    for (Index k : nodal.row_cols(i)) {
      if (k == i) continue;
      for (Index j : nodal.row_cols(k))
        if (j > i && coarse[j] && stamp[j] != i) partners.push_back(j);
    }
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());

    for (Index j : partners) {
      if (in_b[i] && in_b[j]) continue;
      for (const auto& [k, row1] : adj[i]) {
        if (k == j || used_mid[k] || assigned[row1]) continue;
        Index row2 = kNoIndex;
        for (const auto& [j2, r2] : adj[k])
          if (j2 == j && !assigned[r2]) {
            row2 = r2;
            break;
          }
        if (row2 == kNoIndex) continue;
        ExteriorPair p;
        p.dof1 = row1;
        p.dof2 = row2;
        p.sign1 = sign_of(aug.gtilde.coeff(row1, k));
        p.sign2 = -sign_of(aug.gtilde.coeff(row2, k));
        p.tail_node = i;
        p.mid_node = k;
        p.head_node = j;
        s.exterior_pairs.push_back(p);
        assigned[row1] = assigned[row2] = 1;
        used_mid[k] = 1;
        break;
      }
    }
  }
  fill_interior(s);
  return s;
}

Splitting build_refinement_splitting(const Mesh2D& coarse, const Mesh2D& fine, const RefinementMap& map,
                                     const DofMaps& fine_dofs, const SparseMatrix& fine_g) {
  if (map.coarse_edge_children.size() != coarse.edges.size() ||
      map.vertex_parent.size() != fine.vertices.size())
    throw Error("build_refinement_splitting: refinement map does not match the meshes");
  if (fine_g.rows() != fine_dofs.num_dofs()) throw DimensionMismatch("build_refinement_splitting");
  const AugmentedGradient aug = augment_gradient(fine_g);
  std::vector<Index> aug_of_row(static_cast<std::size_t>(fine_g.rows()), kNoIndex);
  for (std::size_t b = 0; b < aug.boundary_cols.size(); ++b) aug_of_row[aug.boundary_rows[b]] = aug.boundary_cols[b];

  auto node = [&](Index v, Index row) {
    const Index c = fine_dofs.free_nodes[v];
    return c != kNoIndex ? c : aug_of_row[row];
  };

  Splitting s;
  s.n = fine_dofs.num_dofs();
  for (Index e = 0; e < coarse.num_edges(); ++e) {
    const auto [c1, c2] = map.coarse_edge_children[e];
    const Index d1 = fine_dofs.free_edges[c1];
    const Index d2 = fine_dofs.free_edges[c2];
    if (d1 == kNoIndex || d2 == kNoIndex) continue;
    ExteriorPair p;
    p.dof1 = d1;
    p.dof2 = d2;
    p.tail_node = node(map.coarse_vertex_to_fine[coarse.edges[e].tail], d1);
    p.mid_node = node(map.edge_midpoint[e], d1);
    p.head_node = node(map.coarse_vertex_to_fine[coarse.edges[e].head], d2);
    if (p.tail_node == kNoIndex || p.mid_node == kNoIndex || p.head_node == kNoIndex)
      throw Error("build_refinement_splitting: gradient does not match the fine mesh");
    p.sign1 = sign_of(aug.gtilde.coeff(d1, p.mid_node));
    p.sign2 = -sign_of(aug.gtilde.coeff(d2, p.mid_node));
    s.exterior_pairs.push_back(p);
  }
  for (Index v = 0; v < coarse.num_vertices(); ++v)
    if (const Index c = fine_dofs.free_nodes[map.coarse_vertex_to_fine[v]]; c != kNoIndex) s.coarse_nodes.push_back(c);
  std::sort(s.coarse_nodes.begin(), s.coarse_nodes.end());
  fill_interior(s);
  return s;
}

RealizedSplitting realize_RS(const Splitting& split) {
  const double w = 1.0 / std::sqrt(2.0);
  const Index nc = split.num_pairs();
  std::vector<Triplet> r, se, si;
  for (Index c = 0; c < nc; ++c) {
    const auto& p = split.exterior_pairs[c];
    r.push_back({c, p.dof1, p.sign1 * w});
    r.push_back({c, p.dof2, p.sign2 * w});
    se.push_back({p.dof1, c, p.sign1 * w});
    se.push_back({p.dof2, c, -p.sign2 * w});
  }
  for (std::size_t c = 0; c < split.interior_dofs.size(); ++c)
    si.push_back({split.interior_dofs[c], static_cast<Index>(c), 1.0});
  return {SparseMatrix::from_triplets(nc, split.n, std::move(r)),
          SparseMatrix::from_triplets(split.n, static_cast<Index>(split.interior_dofs.size()), std::move(si)),
          SparseMatrix::from_triplets(split.n, nc, std::move(se))};
}

SparseMatrix complement_basis(const RealizedSplitting& rs) {
  std::vector<Triplet> t = rs.S_I.to_triplets();
  const Index off = rs.S_I.cols();
  for (const Triplet& x : rs.S_E.to_triplets()) t.push_back({x.row, x.col + off, x.value});
  return SparseMatrix::from_triplets(rs.S_I.rows(), off + rs.S_E.cols(), std::move(t));
}

void write_splitting(std::ostream& os, const Splitting& split) {
  for (const auto& p : split.exterior_pairs)
    os << p.tail_node << ' ' << p.mid_node << ' ' << p.head_node << ' ' << p.dof1 << ' ' << p.sign1 << ' '
       << p.dof2 << ' ' << p.sign2 << '\n';
}

} // namespace hcurl
