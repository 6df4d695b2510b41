#include <hcurl/delaunay.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace hcurl {

namespace {

struct Tri {
  std::array<Index, 3> v;
  double cx, cy, r2;
  bool alive = true;
};

double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

Tri make_tri(const std::vector<Point>& p, Index a, Index b, Index c) {
  if (orient(p[a], p[b], p[c]) < 0.0) std::swap(b, c);
  const Point& A = p[a];
  const Point& B = p[b];
  const Point& C = p[c];
  const double d = 2.0 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
  const double a2 = A.x * A.x + A.y * A.y;
  const double b2 = B.x * B.x + B.y * B.y;
  const double c2 = C.x * C.x + C.y * C.y;
  Tri t{{a, b, c}, 0.0, 0.0, 0.0};
  t.cx = (a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d;
  t.cy = (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d;
  t.r2 = (A.x - t.cx) * (A.x - t.cx) + (A.y - t.cy) * (A.y - t.cy);
  return t;
}

bool strictly_inside(const Tri& t, const Point& q, double rel) {
  const double d2 = (q.x - t.cx) * (q.x - t.cx) + (q.y - t.cy) * (q.y - t.cy);
  return d2 < t.r2 * (1.0 - rel);
}

} // namespace

Mesh2D delaunay_triangulate(std::span<const Point> points) {
  const auto n = static_cast<Index>(points.size());
  if (n < 3) throw Error("delaunay: need at least 3 points");
  double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double mx = 0.5 * (xmin + xmax), my = 0.5 * (ymin + ymax);
  std::vector<Point> p(points.begin(), points.end());
  // super triangle far enough that boundary sagitta effects stay below 1e-8
  const double big = 1e4 * span;
  p.push_back({mx - big, my - big});
  p.push_back({mx + big, my - big});
  p.push_back({mx, my + big});

  std::vector<Tri> tris{make_tri(p, n, n + 1, n + 2)};
  std::vector<std::pair<Index, Index>> boundary;
  for (Index i = 0; i < n; ++i) {
    std::map<std::pair<Index, Index>, int> edge_count;
    std::vector<std::size_t> bad;
    for (std::size_t t = 0; t < tris.size(); ++t)
      if (tris[t].alive && strictly_inside(tris[t], p[i], 1e-12)) bad.push_back(t);
    for (auto t : bad) {
      tris[t].alive = false;
      for (int k = 0; k < 3; ++k) {
        Index a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        ++edge_count[{std::min(a, b), std::max(a, b)}];
      }
    }
    for (auto t : bad)
      for (int k = 0; k < 3; ++k) {
        Index a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) tris.push_back(make_tri(p, a, b, i));
      }
    std::erase_if(tris, [](const Tri& t) { return !t.alive; });
  }

  std::vector<std::array<Index, 4>> cells;
  for (const auto& t : tris) {
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    if (!(orient(p[t.v[0]], p[t.v[1]], p[t.v[2]]) > 1e-14 * span * span))
      throw Error("delaunay: degenerate triangle produced");
    cells.push_back({t.v[0], t.v[1], t.v[2], kNoIndex});
  }
  return build_mesh(CellKind::triangle, std::vector<Point>(points.begin(), points.end()), std::move(cells));
}

namespace {

std::vector<Point> unit_square_points(int npoints, std::uint64_t seed) {
  std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  if (npoints <= 4) return pts;
  // largest per-side count b with (b+1)^2 interior points still available
  int b = 0;
  while ((b + 2) * (b + 2) <= npoints - 4 - 4 * (b + 1)) ++b;
  const double h = 1.0 / (b + 1);
  for (int k = 1; k <= b; ++k) {
    pts.push_back({k * h, 0.0});
    pts.push_back({1.0, k * h});
    pts.push_back({1.0 - k * h, 1.0});
    pts.push_back({0.0, 1.0 - k * h});
  }
  const int interior = npoints - static_cast<int>(pts.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double rmin = 0.7 / std::sqrt(static_cast<double>(interior) + 4.0 * b + 4.0);
  const double margin = 0.35 * h;
  for (int k = 0; k < interior;) {
    bool placed = false;
    for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
      const Point q{margin + (1.0 - 2.0 * margin) * u(rng), margin + (1.0 - 2.0 * margin) * u(rng)};
      bool ok = true;
      for (const auto& s : pts)
        if ((s.x - q.x) * (s.x - q.x) + (s.y - q.y) * (s.y - q.y) < rmin * rmin) {
          ok = false;
          break;
        }
      if (ok) {
        pts.push_back(q);
        placed = true;
      }
    }
    if (placed) ++k;
    else rmin *= 0.9;
  }
  return pts;
}

} // namespace

Mesh2D delaunay_mesh(int npoints, std::uint64_t seed) {
  if (npoints < 4) throw Error("delaunay_mesh: need at least 4 points");
  auto pts = unit_square_points(npoints, seed);
  try {
    return delaunay_triangulate(pts);
  } catch (const Error&) {
    // deterministic perturbation of interior points, then one retry
    for (std::size_t k = 4; k < pts.size(); ++k) {
      if (pts[k].x > 0.0 && pts[k].x < 1.0 && pts[k].y > 0.0 && pts[k].y < 1.0) {
        pts[k].x += 1e-9 * static_cast<double>((k * 7919) % 13) / 13.0;
        pts[k].y += 1e-9 * static_cast<double>((k * 104729) % 17) / 17.0;
      }
    }
    return delaunay_triangulate(pts);
  }
}

bool satisfies_empty_circumcircle(const Mesh2D& mesh, double tol) {
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    const Tri t = make_tri(mesh.vertices, cv[0], cv[1], cv[2]);
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
      if (v == cv[0] || v == cv[1] || v == cv[2]) continue;
      if (strictly_inside(t, mesh.vertices[v], tol)) return false;
    }
  }
  return true;
}

} // namespace hcurl
