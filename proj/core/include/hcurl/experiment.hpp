#pragma once

#include <hcurl/coefficients.hpp>
#include <hcurl/multilevel.hpp>
#include <hcurl/verify.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hcurl {

enum class Family { uniform, jump, delaunay };

const char* family_name(Family f);
Family parse_family(const std::string& s);

struct ExperimentConfig {
  Family family = Family::uniform;
  std::vector<int> levels{2, 3, 4, 5};
  double beta = 0.01;
  double tol = 1e-8;
  Index max_iterations = 500;
  int max_levels = 20;
  Index min_coarse = 32;
  std::vector<Method> methods{Method::geo, Method::ref, Method::alg};
  std::uint64_t seed = 1;
  bool two_grid_only = false;
  std::string mesh_file;
  int delaunay_points = 60;
  /// Coefficient boxes for the Delaunay family (checkerboard when empty).
  std::vector<CoefficientRegion> regions;
  double default_mu = 1.0;
};

/// Fine problem of one experiment level together with its nested meshes.
struct ProblemInstance {
  NestedMeshes meshes;
  CoefficientField mu;
  CurlCurlSystem system;
};

ProblemInstance make_problem(const ExperimentConfig& config, int level);

struct MethodResult {
  std::optional<Index> amg_iterations;
  std::optional<Index> pcg_iterations;
  std::optional<double> operator_complexity;
  Index num_levels = 0;
  std::vector<Index> level_sizes;
  bool stalled = false;
  std::string error;
};

struct ResultRow {
  int refinement_level = 0;
  Index size = 0;
  /// Indexed by Method.
  std::array<MethodResult, 3> methods;
};

/// b = (1, ..., n), x0 uniform in [-1, 1]^n from the seed.
Vector experiment_rhs(Index n);
Vector experiment_initial_guess(Index n, std::uint64_t seed);

MethodResult run_method(const ProblemInstance& problem, Method method, const ExperimentConfig& config);
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void emit_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void emit_csv(const std::string& path, const std::vector<ResultRow>& rows);

struct VerificationConfig {
  std::uint64_t seed = 1;
  int delaunay_points = 60;
  /// Adds a Schur kernel check on a splitting with two paths through one node; it is
  /// expected to fail.
  bool inject_double_path = false;
};

std::vector<CheckReport> run_verification(const VerificationConfig& config);

/// Mesh edges in gray, exterior pair paths in blue, coarse nodes as red circles.
void dump_coarsening_svg(std::ostream& os, const Mesh2D& mesh, const DofMaps& dofs, const Splitting& split);
void dump_coarsening_svg(const std::string& path, const Mesh2D& mesh, const DofMaps& dofs, const Splitting& split);

} // namespace hcurl
