#pragma once

#include <hcurl/cholesky.hpp>
#include <hcurl/mesh.hpp>
#include <hcurl/nedelec.hpp>
#include <hcurl/smoother.hpp>
#include <hcurl/sparse.hpp>
#include <hcurl/splitting.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hcurl {

enum class Method { geo, ref, alg };

const char* method_name(Method m);
Method parse_method(const std::string& s);

/// Meshes ordered coarse to fine; maps[l] refines meshes[l] into meshes[l+1].
struct NestedMeshes {
  std::vector<Mesh2D> meshes;
  std::vector<RefinementMap> maps;
};

/// meshes[0] = base, each further mesh one uniform refinement of the previous.
NestedMeshes refine_sequence(Mesh2D base, int levels);

struct HierarchyConfig {
  int max_levels = 20;
  Index min_coarse = 32;
  CfOptions cf;
};

struct Level {
  SparseMatrix A;
  SparseMatrix G;
  SparseMatrix P;
  PatchSet patches;
  L1Jacobi l1;
  std::optional<CholeskyFactor> coarse_factor;
  /// Splitting used to build P (Ref and Alg only).
  std::optional<Splitting> splitting;
};

struct Hierarchy {
  std::vector<Level> levels;
  Method method = Method::alg;
  bool stalled = false;
  std::string note;

  Index num_levels() const noexcept { return static_cast<Index>(levels.size()); }
};

/// Geo and Ref need `meshes` whose finest mesh is the one `system` was
/// assembled on.
Hierarchy build_hierarchy(const CurlCurlSystem& system, Method method, const HierarchyConfig& config = {},
                          const NestedMeshes* meshes = nullptr);

/// One V(1,1) cycle on the finest level, updating x in place.
void vcycle(const Hierarchy& h, std::span<const double> b, Vector& x);

double operator_complexity(const Hierarchy& h);

enum class SolveStatus { converged, max_iterations, diverged, breakdown };

struct SolveReport {
  Index iterations = 0;
  /// Relative residual after each iteration.
  std::vector<double> residual_history;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  double operator_complexity = 1.0;
};

struct SolveOptions {
  double tol = 1e-8;
  Index max_iterations = 500;
  /// Abort after this many consecutive residual increases.
  int divergence_window = 5;
};

SolveReport amg_solve(const Hierarchy& h, std::span<const double> b, Vector& x, const SolveOptions& opts = {});

/// z = B r
using Preconditioner = std::function<void(std::span<const double> r, Vector& z)>;

Preconditioner vcycle_preconditioner(const Hierarchy& h);

SolveReport pcg(const SparseMatrix& a, std::span<const double> b, const Preconditioner& precond, Vector& x,
                const SolveOptions& opts = {});

} // namespace hcurl
