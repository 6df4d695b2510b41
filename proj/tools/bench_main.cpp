#include <hcurl/experiment.hpp>
#include <hcurl/parallel.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hcurl;

namespace {

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw Error("empty level range " + text);
    for (int l = lo; l <= hi; ++l) out.push_back(l);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  if (out.empty()) throw Error("no levels given");
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_method(item));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel solvers for the 2D curl-curl problem"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string family = "uniform", levels = "2..5", methods = "geo,ref,alg", out;
  auto* run = app.add_subcommand("run", "run the solver comparison and write a CSV table");
  run->add_option("--family", family, "uniform | jump | delaunay")->check(CLI::IsMember({"uniform", "jump", "delaunay"}));
  run->add_option("--levels", levels, "refinement levels, e.g. 2..6 or 2,3,4");
  run->add_option("--beta", cfg.beta, "mass shift")->check(CLI::NonNegativeNumber);
  run->add_option("--tol", cfg.tol, "relative residual tolerance")->check(CLI::PositiveNumber);
  run->add_option("--maxit", cfg.max_iterations, "iteration cap");
  run->add_option("--methods", methods, "subset of geo,ref,alg");
  run->add_flag("--two-grid", cfg.two_grid_only, "truncate every hierarchy to two levels");
  run->add_option("--max-levels", cfg.max_levels, "maximum hierarchy depth");
  run->add_option("--min-coarse", cfg.min_coarse, "coarsest size");
  run->add_option("--mesh", cfg.mesh_file, "base mesh file for the delaunay family");
  run->add_option("--points", cfg.delaunay_points, "points of the generated Delaunay base mesh");
  run->add_option("--seed", cfg.seed, "random seed");
  run->add_option("--out", out, "CSV output path (stdout when omitted)");
  bool verbose = false;
  run->add_flag("-v,--verbose", verbose, "print hierarchy sizes to stderr");

  VerificationConfig vcfg;
  std::string vcsv;
  auto* verify = app.add_subcommand("verify", "run the structural verification checks");
  verify->add_option("--seed", vcfg.seed, "random seed");
  verify->add_flag("--inject-double-path", vcfg.inject_double_path, "add a splitting with two paths through one node");
  verify->add_option("--csv", vcsv, "also write the reports as CSV");

  std::string sfamily = "uniform", smethod = "alg", sout = "coarsening.svg";
  int slevel = 3;
  std::uint64_t sseed = 1;
  auto* svg = app.add_subcommand("svg", "draw the finest-level coarsening pattern");
  svg->add_option("--family", sfamily, "uniform | jump | delaunay")->check(CLI::IsMember({"uniform", "jump", "delaunay"}));
  svg->add_option("--level", slevel, "refinement level");
  svg->add_option("--method", smethod, "ref | alg")->check(CLI::IsMember({"geo", "ref", "alg"}));
  svg->add_option("--seed", sseed, "random seed");
  svg->add_option("--out", sout, "SVG output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cfg.family = parse_family(family);
      cfg.levels = parse_levels(levels);
      cfg.methods = parse_methods(methods);
      const auto rows = run_experiment(cfg);
      for (const auto& r : rows)
        for (Method m : cfg.methods) {
          const auto& res = r.methods[static_cast<int>(m)];
          if (!res.error.empty()) std::cerr << "L=" << r.refinement_level << ' ' << method_name(m) << ": " << res.error << '\n';
          if (verbose) {
            std::cerr << "L=" << r.refinement_level << ' ' << method_name(m) << " levels:";
            for (Index n : res.level_sizes) std::cerr << ' ' << n;
            std::cerr << '\n';
          }
          if (res.stalled) std::cerr << "L=" << r.refinement_level << ' ' << method_name(m) << ": coarsening stalled\n";
        }
      if (out.empty())
        emit_csv(std::cout, rows);
      else
        emit_csv(out, rows);
      return 0;
    }
    if (*verify) {
      const auto reports = run_verification(vcfg);
      write_reports_text(std::cout, reports);
      if (!vcsv.empty()) {
        std::ofstream f(vcsv);
        write_reports_csv(f, reports);
      }
      bool ok = true;
      for (const auto& r : reports) ok = ok && (r.skipped || r.passed);
      std::cout << (ok ? "all checks passed" : "some checks failed") << '\n';
      return ok ? 0 : 1;
    }
    if (*svg) {
      ExperimentConfig c;
      c.family = parse_family(sfamily);
      c.seed = sseed;
      const ProblemInstance pi = make_problem(c, slevel);
      const Mesh2D& fine = pi.meshes.meshes.back();
      Splitting split;
      split.n = pi.system.size();
      if (smethod == "alg") {
        split = build_algebraic_splitting(pi.system.A, pi.system.G);
      } else if (smethod == "ref" && slevel > 0) {
        split = build_refinement_splitting(pi.meshes.meshes[slevel - 1], fine, pi.meshes.maps[slevel - 1],
                                           pi.system.dofs, pi.system.G);
      }
      dump_coarsening_svg(sout, fine, pi.system.dofs, split);
      std::cout << "wrote " << sout << ": " << split.num_pairs() << " pairs, " << split.coarse_nodes.size()
                << " coarse nodes\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
