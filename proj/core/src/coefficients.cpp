#include <hcurl/coefficients.hpp>

#include <algorithm>
#include <cmath>

namespace hcurl {

CoefficientField constant_mu(const Mesh2D& mesh, double mu) {
  if (!(mu > 0.0)) throw Error("coefficient must be positive");
  return {std::vector<double>(mesh.cells.size(), mu)};
}

CoefficientField assign_mu_stripes(const Mesh2D& mesh, int fine_level, double even_value, double odd_value) {
  if (!(even_value > 0.0) || !(odd_value > 0.0)) throw Error("coefficient must be positive");
  const double columns = std::ldexp(1.0, fine_level);
  CoefficientField f;
  f.mu.reserve(mesh.cells.size());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto col = std::clamp<long>(static_cast<long>(std::floor(mesh.centroid(c).x * columns)), 0,
                                      static_cast<long>(columns) - 1);
    f.mu.push_back(col % 2 == 0 ? even_value : odd_value);
  }
  return f;
}

CoefficientField assign_mu_regions(const Mesh2D& mesh, const std::vector<CoefficientRegion>& regions,
                                   double default_mu) {
  if (!(default_mu > 0.0)) throw Error("coefficient must be positive");
  for (const auto& r : regions)
    if (!(r.mu > 0.0)) throw Error("coefficient must be positive");
  CoefficientField f;
  f.mu.reserve(mesh.cells.size());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Point p = mesh.centroid(c);
    double mu = default_mu;
    for (const auto& r : regions)
      if (r.box.contains(p)) {
        mu = r.mu;
        break;
      }
    f.mu.push_back(mu);
  }
  return f;
}

std::vector<CoefficientRegion> checkerboard_regions(int n, double first, double second) {
  std::vector<CoefficientRegion> out;
  const double h = 1.0 / n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out.push_back({{i * h, j * h, (i + 1) * h, (j + 1) * h}, (i + j) % 2 == 0 ? first : second});
  return out;
}

CoefficientField inherit_coefficients(const CoefficientField& coarse, const RefinementMap& map, Index fine_cells) {
  CoefficientField f;
  f.mu.assign(static_cast<std::size_t>(fine_cells), 0.0);
  for (std::size_t c = 0; c < map.cell_children.size(); ++c)
    for (Index child : map.cell_children[c]) f.mu[child] = coarse.mu[c];
  return f;
}

} // namespace hcurl
