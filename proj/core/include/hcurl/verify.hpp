#pragma once

#include <hcurl/coefficients.hpp>
#include <hcurl/mesh.hpp>
#include <hcurl/nedelec.hpp>
#include <hcurl/sparse.hpp>
#include <hcurl/splitting.hpp>
#include <hcurl/transfer.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hcurl {

struct CheckReport {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string context;
  std::string note;
};

CheckReport make_report(std::string name, double measured, double threshold, std::string context);

/// ||A^s G||_max / ||A^s||_max
CheckReport check_exact_sequence(const CurlCurlSystem& system, double threshold = 1e-12);

/// Schur complement of the interior block applied to S_E and to G_E, relative
/// to ||A^s||_max. Returns the S_E report followed by the G_E report. A
/// semidefinite interior block is accepted when the interior right-hand sides
/// are consistent; otherwise both reports are skipped.
std::vector<CheckReport> check_schur_kernel(const SparseMatrix& as, const SparseMatrix& g, const Splitting& split,
                                            double threshold = 1e-10);

/// A splitting in which a second pair is routed through the intermediate node
/// of an existing pair. Throws when no such node exists.
Splitting make_double_path_splitting(const Splitting& split, const SparseMatrix& g);

/// Column-wise least-squares residual of G y = (P Gc)_c (relative) and
/// ||A^s P Gc||_max / ||A^s||_max.
std::vector<CheckReport> check_commuting(const SparseMatrix& as, const SparseMatrix& g, const SparseMatrix& p,
                                         const SparseMatrix& gc, double range_threshold = 1e-9,
                                         double kernel_threshold = 1e-10);

struct BetaScaling {
  std::vector<double> betas;
  std::vector<double> defects;
  double slope = 0.0;
};

/// ||A^s P_app(beta) Gc||_max over the given shifts, with a least-squares fit
/// of log defect against log beta. Passes when the slope lies in [lo, hi].
CheckReport check_beta_scaling(const Mesh2D& mesh, const CoefficientField& mu, const Splitting& split,
                               const std::vector<double>& betas, BetaScaling* details = nullptr,
                               double lo = 0.8, double hi = 1.2);

struct EtaEstimate {
  double eta_star_sampled = 0.0;
  double eta_app_sampled = 0.0;
  double eta_star_exact = 0.0;
  double eta_app_exact = 0.0;
};

/// sqrt(eta_app) <= 1 + sqrt(eta_star) + slack, with both energy ratios
/// estimated from random samples refined by power iteration on range(A^s).
CheckReport check_eta_inequality(const SparseMatrix& as, const SparseMatrix& g, const Splitting& split,
                                 std::uint64_t seed = 1, int samples = 200, EtaEstimate* details = nullptr,
                                 double slack = 1e-8, Index dense_cap = 2000);

struct TwoGridConstant {
  double K = 1.0;
  double bound = 0.0;
  /// ||E_TG||_A^2 for E_TG = (I - M^{-1} A)(I - Pi_A(P)).
  double propagator_norm_sq = 0.0;
  std::string note;
};

TwoGridConstant compute_two_grid_K(const SparseMatrix& a, const SparseMatrix& p, const SparseMatrix& r,
                                   const SparseMatrix& m, Index dense_cap = 2000);

void write_reports_text(std::ostream& os, const std::vector<CheckReport>& reports);
void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports);

} // namespace hcurl
