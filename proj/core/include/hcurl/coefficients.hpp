#pragma once

#include <hcurl/mesh.hpp>

#include <vector>

namespace hcurl {

/// Piecewise-constant permeability mu, one positive value per cell.
struct CoefficientField {
  std::vector<double> mu;
};

struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  bool contains(const Point& p) const noexcept { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

struct CoefficientRegion {
  Box box;
  double mu = 1.0;
};

CoefficientField constant_mu(const Mesh2D& mesh, double mu = 1.0);

/// Column c of the 2^L vertical strips of the unit square gets `even_value` for
/// even c and `odd_value` otherwise (classified by cell centroid).
CoefficientField assign_mu_stripes(const Mesh2D& mesh, int fine_level, double even_value = 10.0,
                                   double odd_value = 0.1);

/// First region whose box contains the centroid wins; `default_mu` otherwise.
CoefficientField assign_mu_regions(const Mesh2D& mesh, const std::vector<CoefficientRegion>& regions,
                                   double default_mu);

/// n x n checkerboard over the unit square alternating `first` / `second`,
/// starting with `first` in the lower-left box.
std::vector<CoefficientRegion> checkerboard_regions(int n = 4, double first = 0.1, double second = 10.0);

/// Fine cells inherit the value of their parent cell.
CoefficientField inherit_coefficients(const CoefficientField& coarse, const RefinementMap& map,
                                      Index fine_cells);

} // namespace hcurl
