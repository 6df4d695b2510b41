#include <hcurl/delaunay.hpp>
#include <hcurl/experiment.hpp>
#include <hcurl/transfer.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace hcurl {

const char* family_name(Family f) {
  switch (f) {
  case Family::uniform: return "uniform";
  case Family::jump: return "jump";
  case Family::delaunay: return "delaunay";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "uniform") return Family::uniform;
  if (s == "jump") return Family::jump;
  if (s == "delaunay") return Family::delaunay;
  throw Error("unknown family '" + s + "'");
}

ProblemInstance make_problem(const ExperimentConfig& config, int level) {
  if (level < 0) throw Error("make_problem: negative refinement level");
  ProblemInstance pi;
  if (config.family == Family::delaunay) {
    Mesh2D base;
    if (!config.mesh_file.empty()) {
      std::ifstream in(config.mesh_file);
      if (!in) throw Error("cannot open mesh file " + config.mesh_file);
      base = load_mesh(in);
    } else {
      base = delaunay_mesh(config.delaunay_points, config.seed);
    }
    pi.meshes = refine_sequence(std::move(base), level);
    const auto regions = config.regions.empty() ? checkerboard_regions() : config.regions;
    pi.mu = assign_mu_regions(pi.meshes.meshes.back(), regions, config.default_mu);
  } else {
    pi.meshes = refine_sequence(uniform_tri_mesh(0), level);
    const Mesh2D& fine = pi.meshes.meshes.back();
    pi.mu = config.family == Family::jump ? assign_mu_stripes(fine, level) : constant_mu(fine);
  }
  pi.system = assemble(pi.meshes.meshes.back(), pi.mu, config.beta);
  return pi;
}

Vector experiment_rhs(Index n) {
  Vector b(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) b[i] = static_cast<double>(i + 1);
  return b;
}

Vector experiment_initial_guess(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

MethodResult run_method(const ProblemInstance& problem, Method method, const ExperimentConfig& config) {
  MethodResult out;
  try {
    HierarchyConfig hc;
    hc.max_levels = config.two_grid_only ? 2 : config.max_levels;
    hc.min_coarse = config.min_coarse;
    const Hierarchy h = build_hierarchy(problem.system, method, hc, &problem.meshes);
    out.num_levels = h.num_levels();
    for (const Level& l : h.levels) out.level_sizes.push_back(l.A.rows());
    out.stalled = h.stalled;
    out.operator_complexity = operator_complexity(h);

    const Index n = problem.system.size();
    const Vector b = experiment_rhs(n);
    SolveOptions so;
    so.tol = config.tol;
    so.max_iterations = config.max_iterations;

    Vector x = experiment_initial_guess(n, config.seed);
    const SolveReport amg = amg_solve(h, b, x, so);
    if (amg.status != SolveStatus::diverged) out.amg_iterations = amg.iterations;

    x = experiment_initial_guess(n, config.seed);
    const SolveReport cg = pcg(problem.system.A, b, vcycle_preconditioner(h), x, so);
    if (cg.status == SolveStatus::converged || cg.status == SolveStatus::max_iterations)
      out.pcg_iterations = cg.iterations;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  if (!(config.tol > 0.0)) throw Error("run_experiment: tolerance must be positive");
  if (config.levels.empty()) throw Error("run_experiment: no refinement levels");
  std::vector<ResultRow> rows;
  for (int level : config.levels) {
    const ProblemInstance problem = make_problem(config, level);
    ResultRow row;
    row.refinement_level = level;
    row.size = problem.system.size();
    for (Method m : config.methods) row.methods[static_cast<int>(m)] = run_method(problem, m, config);
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "refinement level,size,amg_iter_geo,amg_iter_ref,amg_iter_alg,pcg_iter_geo,pcg_iter_ref,pcg_iter_alg,"
        "operator_complexity_geo,operator_complexity_ref,operator_complexity_alg\n";
  auto iter = [](const std::optional<Index>& v) { return v ? std::to_string(*v) : std::string("-"); };
  for (const auto& r : rows) {
    os << r.refinement_level << ',' << r.size;
    for (const auto& m : r.methods) os << ',' << iter(m.amg_iterations);
    for (const auto& m : r.methods) os << ',' << iter(m.pcg_iterations);
    for (const auto& m : r.methods) {
      if (m.operator_complexity) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", *m.operator_complexity);
        os << ',' << buf;
      } else {
        os << ",-";
      }
    }
    os << '\n';
  }
}

void emit_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  emit_csv(out, rows);
  if (!out) throw Error("failed writing " + path);
}

namespace {

double orthogonality_defect(const Splitting& split) {
  const RealizedSplitting rs = realize_RS(split);
  const SparseMatrix s = complement_basis(rs);
  double d = matmat(rs.R, s).max_abs();
  d = std::max(d, add(matmat(transpose(s), s), SparseMatrix::identity(s.cols()), 1.0, -1.0).max_abs());
  d = std::max(d, add(matmat(rs.R, transpose(rs.R)), SparseMatrix::identity(rs.R.rows()), 1.0, -1.0).max_abs());
  return d;
}

void tag(std::vector<CheckReport>& reports, std::size_t from, const std::string& ctx) {
  for (std::size_t i = from; i < reports.size(); ++i)
    reports[i].context = ctx + (reports[i].context.empty() ? "" : " " + reports[i].context);
}

// (1/sqrt 2)^2 rounds one ulp above 1/2
constexpr double kOrthogonalityTol = 1e-15;

struct VerifyCase {
  std::string label;
  Mesh2D coarse;
  CoefficientField mu_coarse;
  bool eliminate = true;
};

} // namespace

std::vector<CheckReport> run_verification(const VerificationConfig& config) {
  std::vector<CheckReport> reports;
  auto uniform = [](CellKind k, int l) { return k == CellKind::triangle ? uniform_tri_mesh(l) : uniform_quad_mesh(l); };

  std::vector<VerifyCase> cases;
  for (int l = 1; l <= 3; ++l) cases.push_back({"tri L=" + std::to_string(l), uniform(CellKind::triangle, l - 1), {}, true});
  for (int l = 1; l <= 2; ++l)
    cases.push_back({"quad L=" + std::to_string(l), uniform(CellKind::quadrilateral, l - 1), {}, true});
  cases.push_back({"quad L=1 boundary kept", uniform(CellKind::quadrilateral, 0), {}, false});
  cases.push_back({"tri L=1 boundary kept", uniform(CellKind::triangle, 0), {}, false});
  {
    VerifyCase dc{"delaunay L=1", delaunay_mesh(config.delaunay_points, config.seed), {}, true};
    dc.mu_coarse = assign_mu_regions(dc.coarse, checkerboard_regions(), 1.0);
    cases.push_back(std::move(dc));
  }

  for (auto& c : cases) {
    auto [fine, map] = refine(c.coarse);
    CoefficientField mu = c.mu_coarse.mu.empty() ? constant_mu(fine)
                                                 : inherit_coefficients(c.mu_coarse, map, fine.num_cells());
    AssemblyOptions ao;
    ao.eliminate_boundary = c.eliminate;
    const CurlCurlSystem s0 = assemble(fine, mu, 0.0, ao);
    const CurlCurlSystem s1 = assemble(fine, mu, 0.01, ao);
    const DofMaps coarse_dofs = make_dof_maps(c.coarse, c.eliminate);

    std::size_t from = reports.size();
    reports.push_back(check_exact_sequence(s0));

    const Splitting ref = build_refinement_splitting(c.coarse, fine, map, s0.dofs, s0.G);
    const Splitting alg = build_algebraic_splitting(s1.A, s1.G);
    for (const auto* sp : {&ref, &alg}) {
      const std::string mode = sp == &ref ? "ref" : "alg";
      std::size_t f2 = reports.size();
      reports.push_back(make_report("orthogonality", orthogonality_defect(*sp), kOrthogonalityTol, ""));
      const std::string invalid = validate_splitting(*sp);
      if (!invalid.empty()) {
        reports.back().passed = false;
        reports.back().note = invalid;
      }
      for (auto& r : check_schur_kernel(s0.As, s0.G, *sp)) reports.push_back(std::move(r));
      InterpOptions io;
      io.semidefinite = true;
      io.mode = sp == &ref ? CoarseNodeMode::nonzero_columns : CoarseNodeMode::coarse_nodes;
      const TransferSet t = sparse_ideal_interp(s0.As, s0.G, *sp, io);
      for (auto& r : check_commuting(s0.As, s0.G, t.P, t.Gc)) reports.push_back(std::move(r));
      if (s0.size() <= 2000 && sp->num_pairs() > 0) {
        EtaEstimate eta;
        reports.push_back(check_eta_inequality(s0.As, s0.G, *sp, config.seed, 200, &eta));
        if (eta.eta_star_sampled < 1.0 - 1e-8) {
          reports.back().passed = false;
          reports.back().note += " eta_star below 1";
        }
      }
      tag(reports, f2, mode);
    }
    if (coarse_dofs.num_dofs() > 0) {
      std::size_t f2 = reports.size();
      const SparseMatrix pgeo = geometric_interp(c.coarse, fine, map, coarse_dofs, s0.dofs);
      for (auto& r : check_commuting(s0.As, s0.G, pgeo, discrete_gradient(c.coarse, coarse_dofs)))
        reports.push_back(std::move(r));
      tag(reports, f2, "geo");
    }
    if (config.inject_double_path && ref.num_pairs() > 0) {
      std::size_t f2 = reports.size();
      try {
        const Splitting bad = make_double_path_splitting(ref, s0.G);
        for (auto& r : check_schur_kernel(s0.As, s0.G, bad)) reports.push_back(std::move(r));
      } catch (const Error&) {
        // no node carries two free interior edges on this mesh
      }
      tag(reports, f2, "double-path");
    }
    if (s1.size() <= 2000 && ref.num_pairs() > 0) {
      std::size_t f2 = reports.size();
      reports.push_back(check_eta_inequality(s1.A, s1.G, ref, config.seed, 200));
      tag(reports, f2, "ref beta=0.01");
    }
    tag(reports, from, c.label);
  }

  {
    // coefficient jumps
    const Mesh2D coarse = uniform_tri_mesh(2);
    auto [fine, map] = refine(coarse);
    const CoefficientField stripes = assign_mu_stripes(fine, 3);
    const CurlCurlSystem s = assemble(fine, stripes, 0.0);
    std::size_t from = reports.size();
    reports.push_back(check_exact_sequence(s));
    const Splitting ref = build_refinement_splitting(coarse, fine, map, s.dofs, s.G);
    reports.push_back(check_beta_scaling(fine, stripes, ref, {1e-1, 1e-2, 1e-3, 1e-4}));
    tag(reports, from, "tri L=3 stripes");
    from = reports.size();
    const CurlCurlSystem sr = assemble(fine, assign_mu_regions(fine, checkerboard_regions(), 1.0), 0.0);
    reports.push_back(check_exact_sequence(sr));
    reports.back().name += "_regions";
    tag(reports, from, "tri L=3 regions");
  }

  {
    const Mesh2D coarse = uniform_tri_mesh(1);
    auto [fine, map] = refine(coarse);
    const CurlCurlSystem s = assemble(fine, constant_mu(fine), 0.01);
    const Splitting ref = build_refinement_splitting(coarse, fine, map, s.dofs, s.G);
    const TransferSet t = sparse_ideal_interp(s.A, s.G, ref);
    const TwoGridConstant k = compute_two_grid_K(s.A, t.P, t.R, l1_jacobi_matrix(s.A));
    std::size_t from = reports.size();
    reports.push_back(make_report("two_grid_bound", k.propagator_norm_sq - k.bound, 1e-8, ""));
    reports.back().note = "K=" + std::to_string(k.K) + " |E|^2=" + std::to_string(k.propagator_norm_sq);
    if (k.K < 1.0) reports.back().passed = false;
    tag(reports, from, "tri L=2 beta=0.01 ref");
  }
  return reports;
}

} // namespace hcurl
