#include <hcurl/multilevel.hpp>
#include <hcurl/transfer.hpp>

#include <cmath>
#include <limits>

namespace hcurl {

const char* method_name(Method m) {
  switch (m) {
  case Method::geo: return "geo";
  case Method::ref: return "ref";
  case Method::alg: return "alg";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "geo") return Method::geo;
  if (s == "ref") return Method::ref;
  if (s == "alg") return Method::alg;
  throw Error("unknown method '" + s + "'");
}

NestedMeshes refine_sequence(Mesh2D base, int levels) {
  NestedMeshes nm;
  nm.meshes.push_back(std::move(base));
  for (int l = 0; l < levels; ++l) {
    auto [fine, map] = refine(nm.meshes.back());
    nm.meshes.push_back(std::move(fine));
    nm.maps.push_back(std::move(map));
  }
  return nm;
}

namespace {

// Renumbers the columns of a Ref coarse gradient from fine node columns to the
// coarse mesh's node numbering.
SparseMatrix to_coarse_node_order(const SparseMatrix& gc, std::span<const Index> cols, const RefinementMap& map,
                                  const DofMaps& fine_dofs, const DofMaps& coarse_dofs) {
  std::vector<Index> target(cols.size());
  for (std::size_t q = 0; q < cols.size(); ++q) {
    const VertexParent& vp = map.vertex_parent[fine_dofs.node_vertex[cols[q]]];
    const Index c = vp.kind == VertexParent::Kind::vertex ? coarse_dofs.free_nodes[vp.index] : kNoIndex;
    if (c == kNoIndex) throw Error("coarse gradient column is not a free coarse vertex");
    target[q] = c;
  }
  std::vector<Triplet> t;
  for (const Triplet& x : gc.to_triplets()) t.push_back({x.row, target[x.col], x.value});
  return SparseMatrix::from_triplets(gc.rows(), coarse_dofs.num_nodes(), std::move(t));
}

} // namespace

Hierarchy build_hierarchy(const CurlCurlSystem& system, Method method, const HierarchyConfig& config,
                          const NestedMeshes* meshes) {
  if ((method == Method::geo || method == Method::ref) && (meshes == nullptr || meshes->meshes.empty()))
    throw Error("build_hierarchy: geometric methods need nested meshes");
  if (meshes && meshes->maps.size() + 1 != meshes->meshes.size())
    throw Error("build_hierarchy: mesh sequence and refinement maps disagree");

  Hierarchy h;
  h.method = method;
  h.levels.emplace_back();
  h.levels[0].A = system.A;
  h.levels[0].G = system.G;

  const bool eliminate = system.dofs.eliminate_boundary;
  DofMaps fine_dofs = system.dofs;
  Index mesh_index = meshes ? static_cast<Index>(meshes->meshes.size()) - 1 : 0;

  while (static_cast<int>(h.levels.size()) < config.max_levels && h.levels.back().A.rows() > config.min_coarse) {
    Level& cur = h.levels.back();
    SparseMatrix p, gc;
    std::optional<Splitting> split;
    DofMaps coarse_dofs;
    if (method == Method::alg) {
      split = build_algebraic_splitting(cur.A, cur.G, config.cf);
      if (split->exterior_pairs.empty()) {
        h.stalled = true;
        h.note = "no exterior pairs on level " + std::to_string(h.levels.size() - 1);
        break;
      }
      InterpOptions io;
      io.mode = CoarseNodeMode::coarse_nodes;
      TransferSet t = sparse_ideal_interp(cur.A, cur.G, *split, io);
      p = std::move(t.P);
      gc = std::move(t.Gc);
    } else {
      if (mesh_index == 0) break;
      const Mesh2D& fine = meshes->meshes[mesh_index];
      const Mesh2D& coarse = meshes->meshes[mesh_index - 1];
      const RefinementMap& map = meshes->maps[mesh_index - 1];
      coarse_dofs = make_dof_maps(coarse, eliminate);
      if (coarse_dofs.num_dofs() == 0) break;
      if (method == Method::geo) {
        p = geometric_interp(coarse, fine, map, coarse_dofs, fine_dofs);
        gc = discrete_gradient(coarse, coarse_dofs);
      } else {
        split = build_refinement_splitting(coarse, fine, map, fine_dofs, cur.G);
        if (split->num_pairs() != coarse_dofs.num_dofs())
          throw Error("build_hierarchy: refinement pairs do not match the coarse edges");
        TransferSet t = sparse_ideal_interp(cur.A, cur.G, *split);
        p = std::move(t.P);
        gc = to_coarse_node_order(t.Gc, t.coarse_node_injection, map, fine_dofs, coarse_dofs);
      }
      --mesh_index;
    }
    if (p.cols() == 0 || p.cols() >= p.rows()) {
      h.stalled = true;
      h.note = "coarsening did not reduce the problem on level " + std::to_string(h.levels.size() - 1);
      break;
    }
    Level next;
    next.A = galerkin_product(p, cur.A);
    next.G = std::move(gc);
    cur.P = std::move(p);
    cur.splitting = std::move(split);
    h.levels.push_back(std::move(next));
    fine_dofs = std::move(coarse_dofs);
  }

  for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
    Level& lv = h.levels[l];
    lv.patches = build_patches(lv.A, lv.G);
    lv.l1 = build_l1_jacobi(lv.A);
  }
  Level& last = h.levels.back();
  if (last.A.rows() > 0) last.coarse_factor = cholesky(last.A);
  return h;
}

namespace {

void cycle(const Hierarchy& h, std::size_t l, std::span<const double> b, Vector& x) {
  const Level& lv = h.levels[l];
  if (l + 1 == h.levels.size()) {
    if (lv.A.rows() > 0) x = solve(*lv.coarse_factor, b);
    return;
  }
  smooth(lv.A, lv.patches, lv.l1, x, b, SweepDirection::forward);
  const Vector r = residual(lv.A, x, b);
  const SparseMatrix& p = lv.P;
  Vector rc(static_cast<std::size_t>(p.cols()), 0.0);
  for (Index i = 0; i < p.rows(); ++i) {
    const auto cols = p.row_cols(i);
    const auto vals = p.row_values(i);
    for (std::size_t q = 0; q < cols.size(); ++q) rc[cols[q]] += vals[q] * r[i];
  }
  Vector ec(rc.size(), 0.0);
  cycle(h, l + 1, rc, ec);
  const Vector corr = spmv(p, ec);
  axpy(1.0, corr, x);
  smooth(lv.A, lv.patches, lv.l1, x, b, SweepDirection::backward);
}

} // namespace

void vcycle(const Hierarchy& h, std::span<const double> b, Vector& x) {
  if (h.levels.empty()) throw Error("vcycle: empty hierarchy");
  if (b.size() != static_cast<std::size_t>(h.levels[0].A.rows()) || x.size() != b.size())
    throw DimensionMismatch("vcycle");
  cycle(h, 0, b, x);
}

double operator_complexity(const Hierarchy& h) {
  if (h.levels.empty() || h.levels[0].A.nnz() == 0) return 1.0;
  double total = 0.0;
  for (const Level& l : h.levels) total += static_cast<double>(l.A.nnz());
  return total / static_cast<double>(h.levels[0].A.nnz());
}

namespace {

bool record(SolveReport& rep, double rel, const SolveOptions& opts, int& growth) {
  if (!rep.residual_history.empty() && rel > rep.residual_history.back())
    ++growth;
  else
    growth = 0;
  rep.residual_history.push_back(rel);
  rep.iterations = static_cast<Index>(rep.residual_history.size());
  if (rel <= opts.tol) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    return true;
  }
  if (!std::isfinite(rel) || growth >= opts.divergence_window) {
    rep.status = SolveStatus::diverged;
    return true;
  }
  return false;
}

} // namespace

SolveReport amg_solve(const Hierarchy& h, std::span<const double> b, Vector& x, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error("amg_solve: tolerance must be positive");
  SolveReport rep;
  rep.operator_complexity = operator_complexity(h);
  const SparseMatrix& a = h.levels.at(0).A;
  const double bn = norm2(b);
  const double scale = bn > 0.0 ? bn : 1.0;
  if (norm2(residual(a, x, b)) / scale <= opts.tol) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    return rep;
  }
  int growth = 0;
  for (Index it = 0; it < opts.max_iterations; ++it) {
    vcycle(h, b, x);
    if (record(rep, norm2(residual(a, x, b)) / scale, opts, growth)) return rep;
  }
  return rep;
}

Preconditioner vcycle_preconditioner(const Hierarchy& h) {
  return [&h](std::span<const double> r, Vector& z) {
    z.assign(r.size(), 0.0);
    vcycle(h, r, z);
  };
}

SolveReport pcg(const SparseMatrix& a, std::span<const double> b, const Preconditioner& precond, Vector& x,
                const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error("pcg: tolerance must be positive");
  if (a.rows() != a.cols() || b.size() != static_cast<std::size_t>(a.rows()) || x.size() != b.size())
    throw DimensionMismatch("pcg");
  SolveReport rep;
  const double bn = norm2(b);
  const double scale = bn > 0.0 ? bn : 1.0;
  Vector r = residual(a, x, b);
  if (norm2(r) / scale <= opts.tol) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    return rep;
  }
  Vector z;
  precond(r, z);
  Vector p = z;
  double rz = dot(r, z);
  // CG residuals are not monotone; only non-finite values abort
  SolveOptions cg_opts = opts;
  cg_opts.divergence_window = std::numeric_limits<int>::max();
  int growth = 0;
  Vector ap(r.size());
  for (Index it = 0; it < opts.max_iterations; ++it) {
    spmv(a, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0) || !(rz > 0.0)) {
      rep.status = SolveStatus::breakdown;
      return rep;
    }
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    if (record(rep, norm2(r) / scale, cg_opts, growth)) return rep;
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
  }
  return rep;
}

} // namespace hcurl
