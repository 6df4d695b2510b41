#pragma once

#include <hcurl/mesh.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace hcurl {

/// Bowyer-Watson triangulation of a point set. Points must be distinct.
Mesh2D delaunay_triangulate(std::span<const Point> points);

/// Triangulation of the unit square from its 4 corners, evenly spaced boundary
/// points and seeded, well-separated interior points; `npoints` in total.
Mesh2D delaunay_mesh(int npoints, std::uint64_t seed);

/// True when no vertex lies strictly inside any cell's circumcircle
/// (relative tolerance `tol`). Brute force.
bool satisfies_empty_circumcircle(const Mesh2D& mesh, double tol = 1e-10);

} // namespace hcurl
