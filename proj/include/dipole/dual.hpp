#pragma once

#include <cmath>
#include <vector>

#include "forms.hpp"

namespace dipole {

// Vertices 0..F-1 are faces, F..F+|E∂|-1 are boundary edges in E∂ order.
// Dual edge e is the dual of primal edge e, oriented from the face on the
// left of the stored orientation to the face on its right.
struct DualGraph {
  Graph graph;
  std::size_t num_faces = 0;
  std::vector<bool> is_boundary;
  std::vector<Half> boundary_edge;  // E∂ entry behind each boundary dual vertex
  std::vector<Point> points;        // layout only

  std::size_t boundary_vertex(std::size_t j) const { return num_faces + j; }
};

namespace detail {

inline Point interior_point(const std::vector<Point>& poly) {
  std::vector<double> ax, ay, aw;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    double w = p.x * q.y - q.x * p.y;
    aw.push_back(w);
    ax.push_back((p.x + q.x) * w);
    ay.push_back((p.y + q.y) * w);
  }
  double a = exact_sum(aw);
  if (a != 0) {
    Point c{exact_sum(ax) / (3 * a), exact_sum(ay) / (3 * a)};
    if (winding(poly, c) != 0) return c;
  }
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[(i + n - 1) % n];
    const Point& q = poly[i];
    const Point& r = poly[(i + 1) % n];
    if (orient2d(p, q, r) <= 0) continue;
    Point c{(p.x + q.x + r.x) / 3, (p.y + q.y + r.y) / 3};
    if (winding(poly, c) != 0) return c;
  }
  return poly.front();
}

}  // namespace detail

inline DualGraph dualize(const PlanarComplex& c) {
  if (!is_admissible(c)) fail(ErrorKind::NotAdmissible, "dual requires an admissible complex");
  const Graph& g = c.graph();
  BoundaryComplex b = boundary_complex(c);
  DualGraph d;
  d.num_faces = c.num_faces();
  d.graph = Graph(d.num_faces + b.edges.size());
  d.is_boundary.assign(d.graph.num_vertices(), false);
  std::vector<std::size_t> pos(2 * g.num_edges(), 0);
  for (std::size_t j = 0; j < b.edges.size(); ++j) {
    pos[half_slot(b.edges[j])] = j;
    d.is_boundary[d.num_faces + j] = true;
    d.boundary_edge.push_back(b.edges[j]);
  }
  auto node = [&](Half h) -> VertexIndex {
    int f = c.face_of(h);
    if (f != PlanarComplex::kOuter) return static_cast<VertexIndex>(f);
    return d.num_faces + pos[half_slot(h.reversed())];
  };
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) d.graph.add_edge(node({e, true}), node({e, false}));

  for (std::size_t f = 0; f < d.num_faces; ++f) d.points.push_back(detail::interior_point(c.polygon(c.face(f))));
  for (Half h : b.edges) {
    const Point& p = c.point(g.tail(h));
    const Point& q = c.point(g.head(h));
    double dx = q.x - p.x, dy = q.y - p.y;
    d.points.push_back({(p.x + q.x) / 2 + 0.25 * dy, (p.y + q.y) / 2 - 0.25 * dx});
  }
  return d;
}

// Dual edges share the primal edge indices and orientations, so transport is a copy.
inline OneForm push_form(const OneForm& a) { return a; }
inline OneForm pull_form(const OneForm& a) { return a; }

}  // namespace dipole
