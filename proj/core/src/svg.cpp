#include <hcurl/experiment.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace hcurl {

void dump_coarsening_svg(std::ostream& os, const Mesh2D& mesh, const DofMaps& dofs, const Splitting& split) {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  if (!mesh.vertices.empty()) {
    x0 = x1 = mesh.vertices[0].x;
    y0 = y1 = mesh.vertices[0].y;
    for (const Point& p : mesh.vertices) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  const double size = 600.0, margin = 20.0;
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  auto sx = [&](const Point& p) { return margin + (p.x - x0) / span * size; };
  auto sy = [&](const Point& p) { return margin + (y1 - p.y) / span * size; };

  const AugmentedGradient aug = augment_gradient(discrete_gradient(mesh, dofs));
  auto node_point = [&](Index c) -> Point {
    if (c < dofs.num_nodes()) return mesh.vertices[dofs.node_vertex[c]];
    const auto it = std::find(aug.boundary_cols.begin(), aug.boundary_cols.end(), c);
    if (it == aug.boundary_cols.end()) throw Error("dump_coarsening_svg: node outside the mesh gradient");
    const Edge& e = mesh.edges[dofs.dof_edge[aug.boundary_rows[it - aug.boundary_cols.begin()]]];
    return mesh.vertices[dofs.free_nodes[e.tail] == kNoIndex ? e.tail : e.head];
  };

  const double w = size + 2 * margin;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << w << "\" viewBox=\"0 0 " << w
     << ' ' << w << "\">\n";
  os << "<g stroke=\"#b0b0b0\" stroke-width=\"1\">\n";
  for (const Edge& e : mesh.edges) {
    const Point& a = mesh.vertices[e.tail];
    const Point& b = mesh.vertices[e.head];
    os << "<line x1=\"" << sx(a) << "\" y1=\"" << sy(a) << "\" x2=\"" << sx(b) << "\" y2=\"" << sy(b) << "\"/>\n";
  }
  os << "</g>\n<g stroke=\"#1f4fd1\" stroke-width=\"3\" fill=\"none\">\n";
  for (const auto& p : split.exterior_pairs) {
    os << "<polyline points=\"";
    for (Index c : {p.tail_node, p.mid_node, p.head_node}) {
      const Point q = node_point(c);
      os << sx(q) << ',' << sy(q) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</g>\n<g fill=\"#d62728\">\n";
  for (Index c : split.coarse_nodes) {
    const Point q = node_point(c);
    os << "<circle cx=\"" << sx(q) << "\" cy=\"" << sy(q) << "\" r=\"5\"/>\n";
  }
  os << "</g>\n</svg>\n";
}

void dump_coarsening_svg(const std::string& path, const Mesh2D& mesh, const DofMaps& dofs, const Splitting& split) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  dump_coarsening_svg(out, mesh, dofs, split);
  if (!out) throw Error("failed writing " + path);
}

} // namespace hcurl
