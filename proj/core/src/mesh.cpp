#include <hcurl/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace hcurl {

Point Mesh2D::centroid(Index cell) const {
  Point c;
  const int nv = vertices_per_cell();
  for (int k = 0; k < nv; ++k) {
    c.x += vertices[cells[cell][k]].x;
    c.y += vertices[cells[cell][k]].y;
  }
  c.x /= nv;
  c.y /= nv;
  return c;
}

double Mesh2D::signed_area(Index cell) const {
  const int nv = vertices_per_cell();
  double a = 0.0;
  for (int k = 0; k < nv; ++k) {
    const Point& p = vertices[cells[cell][k]];
    const Point& q = vertices[cells[cell][(k + 1) % nv]];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

Index Mesh2D::find_edge(Index a, Index b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  const auto it = std::lower_bound(edges.begin(), edges.end(), key, [](const Edge& l, const Edge& r) {
    return l.tail != r.tail ? l.tail < r.tail : l.head < r.head;
  });
  if (it == edges.end() || !(*it == key)) return kNoIndex;
  return static_cast<Index>(it - edges.begin());
}

Mesh2D build_mesh(CellKind kind, std::vector<Point> vertices, std::vector<std::array<Index, 4>> cells) {
  Mesh2D m;
  m.kind = kind;
  m.vertices = std::move(vertices);
  m.cells = std::move(cells);
  const int nv = m.vertices_per_cell();
  const Index nverts = m.num_vertices();

  std::vector<char> used(static_cast<std::size_t>(nverts), 0);
  for (Index c = 0; c < m.num_cells(); ++c) {
    for (int k = 0; k < nv; ++k) {
      const Index v = m.cells[c][k];
      if (v < 0 || v >= nverts) throw Error("cell " + std::to_string(c) + " references a missing vertex");
      used[v] = 1;
    }
    if (kind == CellKind::triangle) m.cells[c][3] = kNoIndex;
    if (!(m.signed_area(c) > 0.0)) throw Error("cell " + std::to_string(c) + " is not counterclockwise");
  }
  for (Index v = 0; v < nverts; ++v)
    if (!used[v]) throw Error("dangling vertex " + std::to_string(v));

  for (const auto& cell : m.cells)
    for (int k = 0; k < nv; ++k) {
      const Index a = cell[k];
      const Index b = cell[(k + 1) % nv];
      if (a == b) throw Error("degenerate cell edge");
      m.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(m.edges.begin(), m.edges.end(), [](const Edge& l, const Edge& r) {
    return l.tail != r.tail ? l.tail < r.tail : l.head < r.head;
  });
  m.edges.erase(std::unique(m.edges.begin(), m.edges.end()), m.edges.end());

  std::vector<int> incidence(m.edges.size(), 0);
  m.cell_edges.resize(m.cells.size());
  m.cell_edge_signs.resize(m.cells.size());
  for (Index c = 0; c < m.num_cells(); ++c) {
    m.cell_edges[c].fill(kNoIndex);
    m.cell_edge_signs[c].fill(0);
    for (int k = 0; k < nv; ++k) {
      const Index a = m.cells[c][k];
      const Index b = m.cells[c][(k + 1) % nv];
      const Index e = m.find_edge(a, b);
      m.cell_edges[c][k] = e;
      m.cell_edge_signs[c][k] = a < b ? 1 : -1;
      ++incidence[e];
    }
  }
  m.boundary_edge.assign(m.edges.size(), 0);
  m.boundary_vertex.assign(static_cast<std::size_t>(nverts), 0);
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    if (incidence[e] > 2) throw Error("non-manifold edge " + std::to_string(e));
    if (incidence[e] == 1) {
      m.boundary_edge[e] = 1;
      m.boundary_vertex[m.edges[e].tail] = 1;
      m.boundary_vertex[m.edges[e].head] = 1;
    }
  }
  return m;
}

namespace {

std::vector<Point> grid_vertices(Index n) {
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (Index j = 0; j <= n; ++j)
    for (Index i = 0; i <= n; ++i)
      v.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  return v;
}

} // namespace

Mesh2D uniform_tri_mesh(int levels) {
  if (levels < 0) throw Error("uniform_tri_mesh: negative level");
  const Index n = Index{1} << levels;
  std::vector<std::array<Index, 4>> cells;
  cells.reserve(static_cast<std::size_t>(2 * n * n));
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Index v00 = j * (n + 1) + i;
      const Index v10 = v00 + 1;
      const Index v01 = v00 + n + 1;
      const Index v11 = v01 + 1;
      cells.push_back({v00, v10, v11, kNoIndex});
      cells.push_back({v00, v11, v01, kNoIndex});
    }
  return build_mesh(CellKind::triangle, grid_vertices(n), std::move(cells));
}

Mesh2D uniform_quad_mesh(int levels) {
  if (levels < 0) throw Error("uniform_quad_mesh: negative level");
  const Index n = Index{1} << levels;
  std::vector<std::array<Index, 4>> cells;
  cells.reserve(static_cast<std::size_t>(n * n));
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Index v00 = j * (n + 1) + i;
      cells.push_back({v00, v00 + 1, v00 + n + 2, v00 + n + 1});
    }
  return build_mesh(CellKind::quadrilateral, grid_vertices(n), std::move(cells));
}

std::pair<Mesh2D, RefinementMap> refine(const Mesh2D& coarse) {
  const Index nv = coarse.num_vertices();
  const Index ne = coarse.num_edges();
  const Index nc = coarse.num_cells();
  const bool quad = coarse.kind == CellKind::quadrilateral;

  RefinementMap map;
  std::vector<Point> verts = coarse.vertices;
  for (Index v = 0; v < nv; ++v) map.vertex_parent.push_back({VertexParent::Kind::vertex, v});
  map.coarse_vertex_to_fine.resize(static_cast<std::size_t>(nv));
  std::iota(map.coarse_vertex_to_fine.begin(), map.coarse_vertex_to_fine.end(), 0);
  map.edge_midpoint.resize(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    const Point& a = coarse.vertices[coarse.edges[e].tail];
    const Point& b = coarse.vertices[coarse.edges[e].head];
    map.edge_midpoint[e] = static_cast<Index>(verts.size());
    verts.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    map.vertex_parent.push_back({VertexParent::Kind::edge_midpoint, e});
  }
  std::vector<Index> center(static_cast<std::size_t>(nc), kNoIndex);
  if (quad) {
    for (Index c = 0; c < nc; ++c) {
      center[c] = static_cast<Index>(verts.size());
      verts.push_back(coarse.centroid(c));
      map.vertex_parent.push_back({VertexParent::Kind::cell_center, c});
    }
  }

  std::vector<std::array<Index, 4>> cells;
  cells.reserve(static_cast<std::size_t>(4 * nc));
  map.cell_children.resize(static_cast<std::size_t>(nc));
  for (Index c = 0; c < nc; ++c) {
    const auto& cv = coarse.cells[c];
    const auto& ce = coarse.cell_edges[c];
    const Index first = static_cast<Index>(cells.size());
    if (!quad) {
      const Index m01 = map.edge_midpoint[ce[0]];
      const Index m12 = map.edge_midpoint[ce[1]];
      const Index m20 = map.edge_midpoint[ce[2]];
      cells.push_back({cv[0], m01, m20, kNoIndex});
      cells.push_back({m01, cv[1], m12, kNoIndex});
      cells.push_back({m20, m12, cv[2], kNoIndex});
      cells.push_back({m01, m12, m20, kNoIndex});
    } else {
      const Index m01 = map.edge_midpoint[ce[0]];
      const Index m12 = map.edge_midpoint[ce[1]];
      const Index m23 = map.edge_midpoint[ce[2]];
      const Index m30 = map.edge_midpoint[ce[3]];
      const Index x = center[c];
      cells.push_back({cv[0], m01, x, m30});
      cells.push_back({m01, cv[1], m12, x});
      cells.push_back({x, m12, cv[2], m23});
      cells.push_back({m30, x, m23, cv[3]});
    }
    map.cell_children[c] = {first, first + 1, first + 2, first + 3};
  }

  Mesh2D fine = build_mesh(coarse.kind, std::move(verts), std::move(cells));
  map.coarse_edge_children.resize(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    const Index mid = map.edge_midpoint[e];
    map.coarse_edge_children[e] = {fine.find_edge(coarse.edges[e].tail, mid),
                                   fine.find_edge(mid, coarse.edges[e].head)};
  }
  return {std::move(fine), std::move(map)};
}

std::pair<Mesh2D, RefinementMap> renumber_fine_vertices(const Mesh2D& fine, const RefinementMap& map,
                                                        std::span<const Index> new_of_old) {
  const Index nv = fine.num_vertices();
  if (static_cast<Index>(new_of_old.size()) != nv) throw DimensionMismatch("renumber: permutation length");
  std::vector<Point> verts(fine.vertices.size());
  std::vector<char> hit(fine.vertices.size(), 0);
  for (Index v = 0; v < nv; ++v) {
    const Index w = new_of_old[v];
    if (w < 0 || w >= nv || hit[w]) throw Error("renumber: not a permutation");
    hit[w] = 1;
    verts[w] = fine.vertices[v];
  }
  auto cells = fine.cells;
  const int npc = fine.vertices_per_cell();
  for (auto& c : cells)
    for (int k = 0; k < npc; ++k) c[k] = new_of_old[c[k]];
  Mesh2D out = build_mesh(fine.kind, std::move(verts), std::move(cells));

  RefinementMap m = map;
  m.vertex_parent.assign(map.vertex_parent.size(), {});
  for (Index v = 0; v < nv; ++v) m.vertex_parent[new_of_old[v]] = map.vertex_parent[v];
  for (auto& v : m.coarse_vertex_to_fine) v = new_of_old[v];
  for (auto& v : m.edge_midpoint) v = new_of_old[v];
  for (auto& ch : m.coarse_edge_children)
    for (auto& e : ch) {
      const Edge& old = fine.edges[e];
      e = out.find_edge(new_of_old[old.tail], new_of_old[old.head]);
    }
  return {std::move(out), std::move(m)};
}

std::vector<Index> row_major_order(const Mesh2D& mesh) {
  std::vector<Index> order(mesh.vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Point& p = mesh.vertices[a];
    const Point& q = mesh.vertices[b];
    return p.y != q.y ? p.y < q.y : p.x < q.x;
  });
  std::vector<Index> new_of_old(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_of_old[order[k]] = static_cast<Index>(k);
  return new_of_old;
}

Mesh2D load_mesh(std::istream& is, std::vector<std::string>* warnings) {
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(is, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p != std::string::npos && line[p] != '#') return;
    }
    throw ParseError(std::string("mesh: unexpected end of input while reading ") + what);
  };
  next_line("header");
  long nv = 0, nc = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> nv >> nc) || nv <= 0 || nc <= 0) throw ParseError("mesh: malformed header line: " + line);
  }
  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  for (long k = 0; k < nv; ++k) {
    next_line("vertices");
    std::istringstream ls(line);
    Point p;
    if (!(ls >> p.x >> p.y)) throw ParseError("mesh: malformed vertex line: " + line);
    verts.push_back(p);
  }
  std::vector<std::array<Index, 4>> cells;
  int arity = 0;
  for (long k = 0; k < nc; ++k) {
    next_line("cells");
    std::istringstream ls(line);
    std::vector<long> ids;
    long id;
    while (ls >> id) ids.push_back(id);
    if (!ls.eof() || (ids.size() != 3 && ids.size() != 4))
      throw ParseError("mesh: malformed cell line: " + line);
    if (arity == 0) arity = static_cast<int>(ids.size());
    if (static_cast<int>(ids.size()) != arity) throw ParseError("mesh: mixed cell types are not supported");
    std::array<Index, 4> c{kNoIndex, kNoIndex, kNoIndex, kNoIndex};
    for (std::size_t q = 0; q < ids.size(); ++q) {
      if (ids[q] < 0 || ids[q] >= nv) throw ParseError("mesh: vertex index out of range: " + line);
      c[q] = static_cast<Index>(ids[q]);
    }
    cells.push_back(c);
  }
  const CellKind kind = arity == 3 ? CellKind::triangle : CellKind::quadrilateral;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double a = 0.0;
    for (int q = 0; q < arity; ++q) {
      const Point& p = verts[cells[c][q]];
      const Point& r = verts[cells[c][(q + 1) % arity]];
      a += p.x * r.y - r.x * p.y;
    }
    if (a < 0.0) {
      std::reverse(cells[c].begin(), cells[c].begin() + arity);
      if (warnings) warnings->push_back("cell " + std::to_string(c) + " was clockwise; flipped");
    }
  }
  return build_mesh(kind, std::move(verts), std::move(cells));
}

Mesh2D load_mesh_text(const std::string& text, std::vector<std::string>* warnings) {
  std::istringstream is(text);
  return load_mesh(is, warnings);
}

void save_mesh(std::ostream& os, const Mesh2D& mesh) {
  os << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  os << std::setprecision(17);
  for (const auto& p : mesh.vertices) os << p.x << ' ' << p.y << '\n';
  const int npc = mesh.vertices_per_cell();
  for (const auto& c : mesh.cells) {
    for (int k = 0; k < npc; ++k) os << (k ? " " : "") << c[k];
    os << '\n';
  }
}

int euler_characteristic(const Mesh2D& mesh) {
  return static_cast<int>(mesh.num_vertices() - mesh.num_edges() + mesh.num_cells());
}

std::string validate_mesh(const Mesh2D& mesh) {
  std::vector<int> incidence(mesh.edges.size(), 0);
  const int npc = mesh.vertices_per_cell();
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    if (!(mesh.signed_area(c) > 0.0)) return "cell " + std::to_string(c) + " not counterclockwise";
    for (int k = 0; k < npc; ++k) ++incidence[mesh.cell_edges[c][k]];
  }
  std::vector<char> bv(mesh.vertices.size(), 0);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!(mesh.edges[e].tail < mesh.edges[e].head)) return "edge " + std::to_string(e) + " violates tail < head";
    if (incidence[e] < 1 || incidence[e] > 2) return "edge " + std::to_string(e) + " has bad incidence";
    if ((incidence[e] == 1) != static_cast<bool>(mesh.boundary_edge[e]))
      return "boundary flag mismatch on edge " + std::to_string(e);
    if (incidence[e] == 1) bv[mesh.edges[e].tail] = bv[mesh.edges[e].head] = 1;
  }
  for (std::size_t v = 0; v < bv.size(); ++v)
    if (bv[v] != mesh.boundary_vertex[v]) return "boundary vertex flag mismatch at " + std::to_string(v);
  return {};
}

} // namespace hcurl
