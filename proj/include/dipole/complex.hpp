#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace dipole {

using VertexId = std::int64_t;

struct VertexSpec {
  VertexId id;
  double x, y;
};

using Cycle = std::vector<Half>;

struct BoundaryComplex {
  Cycle edges;                        // E∂, counterclockwise
  std::vector<bool> is_boundary;      // V∂ as a mask over vertex indices
  std::vector<VertexIndex> vertices;  // V∂ in first-visit order along E∂
};

inline std::size_t half_slot(Half h) { return 2 * h.edge + (h.forward ? 0 : 1); }

namespace detail {

inline bool same_point(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

// p lies on the closed segment [a,b], given orient(a,b,p) == 0
inline bool within_box(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

inline int cmp(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

// Segments a-b and a-d share endpoint a.
inline bool overlap_at_shared(const Point& a, const Point& b, const Point& d) {
  if (orient2d(a, b, d) != 0) return false;
  return cmp(b.x, a.x) == cmp(d.x, a.x) && cmp(b.y, a.y) == cmp(d.y, a.y);
}

inline bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d) {
  int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && within_box(a, b, c)) return true;
  if (o2 == 0 && within_box(a, b, d)) return true;
  if (o3 == 0 && within_box(c, d, a)) return true;
  if (o4 == 0 && within_box(c, d, b)) return true;
  return false;
}

// 0 for [0,pi), 1 for [pi,2pi)
inline int half_plane(const Point& v, const Point& p) { return (p.y < v.y || (p.y == v.y && p.x < v.x)) ? 1 : 0; }

// Winding number of `cycle` (as a vertex polygon) around p; p must not lie on it.
inline int winding(const std::vector<Point>& poly, const Point& p) {
  int w = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    if (a.y <= p.y) {
      if (b.y > p.y && orient2d(a, b, p) > 0) ++w;
    } else if (b.y <= p.y && orient2d(a, b, p) < 0) {
      --w;
    }
  }
  return w;
}

}  // namespace detail

class PlanarComplex {
 public:
  static constexpr int kOuter = -1;

  const Graph& graph() const { return graph_; }
  std::size_t num_vertices() const { return graph_.num_vertices(); }
  std::size_t num_edges() const { return graph_.num_edges(); }
  std::size_t num_faces() const { return faces_.size(); }
  VertexId id(VertexIndex v) const { return ids_[v]; }
  const std::vector<VertexId>& ids() const { return ids_; }
  const Point& point(VertexIndex v) const { return points_[v]; }
  const std::vector<Point>& points() const { return points_; }
  std::optional<VertexIndex> index_of(VertexId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  VertexIndex require_index(VertexId id) const {
    auto v = index_of(id);
    if (!v) fail(ErrorKind::UnknownVertex, "vertex id " + std::to_string(id));
    return *v;
  }

  const std::vector<Cycle>& faces() const { return faces_; }
  const Cycle& face(std::size_t f) const { return faces_[f]; }
  // One clockwise cycle of the exterior face per connected component.
  const std::vector<Cycle>& outer_cycles() const { return outer_; }
  int face_of(Half h) const { return half_face_[half_slot(h)]; }

  std::optional<EdgeIndex> find_edge(VertexIndex a, VertexIndex b) const {
    for (const auto& inc : graph_.incident(a))
      if (inc.other == b) return inc.edge;
    return std::nullopt;
  }

  // Outgoing edges at v sorted counterclockwise.
  const std::vector<Half>& rotation(VertexIndex v) const { return rotation_[v]; }

  std::vector<Point> polygon(const Cycle& c) const {
    std::vector<Point> p;
    for (Half h : c) p.push_back(points_[graph_.tail(h)]);
    return p;
  }

 private:
  friend PlanarComplex assemble_complex(const std::vector<VertexSpec>&,
                                        const std::vector<std::pair<VertexId, VertexId>>&);
  std::vector<VertexId> ids_;
  std::vector<Point> points_;
  std::unordered_map<VertexId, VertexIndex> index_;
  Graph graph_;
  std::vector<std::vector<Half>> rotation_;
  std::vector<Cycle> faces_;
  std::vector<Cycle> outer_;
  std::vector<int> half_face_;
};

inline double signed_area_twice(const PlanarComplex& c, const Cycle& cyc) {
  std::vector<double> terms;
  for (Half h : cyc) {
    const Point& a = c.point(c.graph().tail(h));
    const Point& b = c.point(c.graph().head(h));
    terms.push_back(a.x * b.y);
    terms.push_back(-(b.x * a.y));
  }
  return exact_sum(terms);
}

inline PlanarComplex assemble_complex(const std::vector<VertexSpec>& vertices,
                                      const std::vector<std::pair<VertexId, VertexId>>& edges) {
  PlanarComplex c;
  c.graph_ = Graph(vertices.size());
  for (const auto& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) fail(ErrorKind::MalformedInput, "non-finite coordinate");
    if (!c.index_.emplace(v.id, c.ids_.size()).second)
      fail(ErrorKind::MalformedInput, "duplicate vertex id " + std::to_string(v.id));
    c.ids_.push_back(v.id);
    c.points_.push_back({v.x, v.y});
  }
  {
    std::vector<VertexIndex> order(c.points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](VertexIndex a, VertexIndex b) {
      return std::pair(c.points_[a].x, c.points_[a].y) < std::pair(c.points_[b].x, c.points_[b].y);
    });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (detail::same_point(c.points_[order[i - 1]], c.points_[order[i]]))
        fail(ErrorKind::NonPlanarEmbedding, "vertices " + std::to_string(c.ids_[order[i - 1]]) + " and " +
                                                std::to_string(c.ids_[order[i]]) + " coincide");
  }
  std::map<std::pair<VertexIndex, VertexIndex>, EdgeIndex> seen;
  for (const auto& [ia, ib] : edges) {
    VertexIndex a = c.require_index(ia), b = c.require_index(ib);
    if (a == b) fail(ErrorKind::SelfLoop, "loop at vertex " + std::to_string(ia));
    auto key = std::minmax(a, b);
    if (seen.count(key)) fail(ErrorKind::DuplicateEdge, std::to_string(ia) + "-" + std::to_string(ib));
    seen[key] = c.graph_.add_edge(a, b);
  }

  // Straight-line planarity: sweep by minimum x.
  const Graph& g = c.graph_;
  std::vector<EdgeIndex> by_x(g.num_edges());
  std::iota(by_x.begin(), by_x.end(), 0);
  auto xmin = [&](EdgeIndex e) { return std::min(c.points_[g.edge(e).tail].x, c.points_[g.edge(e).head].x); };
  auto xmax = [&](EdgeIndex e) { return std::max(c.points_[g.edge(e).tail].x, c.points_[g.edge(e).head].x); };
  std::sort(by_x.begin(), by_x.end(), [&](EdgeIndex a, EdgeIndex b) { return xmin(a) < xmin(b); });
  for (std::size_t i = 0; i < by_x.size(); ++i) {
    EdgeIndex e = by_x[i];
    double hi = xmax(e);
    for (std::size_t j = i + 1; j < by_x.size() && xmin(by_x[j]) <= hi; ++j) {
      EdgeIndex f = by_x[j];
      VertexIndex a = g.edge(e).tail, b = g.edge(e).head, p = g.edge(f).tail, q = g.edge(f).head;
      const auto& P = c.points_;
      bool bad;
      if (a == p) bad = detail::overlap_at_shared(P[a], P[b], P[q]);
      else if (a == q) bad = detail::overlap_at_shared(P[a], P[b], P[p]);
      else if (b == p) bad = detail::overlap_at_shared(P[b], P[a], P[q]);
      else if (b == q) bad = detail::overlap_at_shared(P[b], P[a], P[p]);
      else bad = detail::segments_meet(P[a], P[b], P[p], P[q]);
      if (bad)
        fail(ErrorKind::NonPlanarEmbedding, "edges " + std::to_string(c.ids_[a]) + "-" + std::to_string(c.ids_[b]) +
                                                " and " + std::to_string(c.ids_[p]) + "-" + std::to_string(c.ids_[q]) +
                                                " intersect");
    }
  }

  // Rotation system.
  std::size_t n = g.num_vertices();
  c.rotation_.assign(n, {});
  std::vector<std::size_t> pos(2 * g.num_edges());
  for (VertexIndex v = 0; v < n; ++v) {
    auto& rot = c.rotation_[v];
    for (const auto& inc : g.incident(v)) rot.push_back(inc.half());
    const Point& o = c.points_[v];
    std::sort(rot.begin(), rot.end(), [&](Half x, Half y) {
      const Point& px = c.points_[g.head(x)];
      const Point& py = c.points_[g.head(y)];
      int hx = detail::half_plane(o, px), hy = detail::half_plane(o, py);
      if (hx != hy) return hx < hy;
      return orient2d(o, px, py) > 0;
    });
    for (std::size_t i = 0; i < rot.size(); ++i) pos[half_slot(rot[i])] = i;
  }

  // Face tracing: after u->v continue with the edge clockwise-next to v->u at v.
  auto next = [&](Half h) {
    VertexIndex v = g.head(h);
    const auto& rot = c.rotation_[v];
    std::size_t i = pos[half_slot(h.reversed())];
    return rot[(i + rot.size() - 1) % rot.size()];
  };
  std::vector<bool> visited(2 * g.num_edges(), false);
  std::vector<Cycle> cycles;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    for (bool fwd : {true, false}) {
      Half start{e, fwd};
      if (visited[half_slot(start)]) continue;
      Cycle cyc;
      Half h = start;
      do {
        visited[half_slot(h)] = true;
        cyc.push_back(h);
        h = next(h);
      } while (!(h == start));
      cycles.push_back(std::move(cyc));
    }
  }
  c.half_face_.assign(2 * g.num_edges(), PlanarComplex::kOuter);
  for (auto& cyc : cycles) {
    if (signed_area_twice(c, cyc) > 0) {
      for (Half h : cyc) c.half_face_[half_slot(h)] = static_cast<int>(c.faces_.size());
      c.faces_.push_back(std::move(cyc));
    } else {
      c.outer_.push_back(std::move(cyc));
    }
  }

  auto [label, ncomp] = g.components();
  if (ncomp > 1 && !c.faces_.empty()) {
    std::vector<VertexIndex> rep(ncomp, n);
    for (VertexIndex v = 0; v < n; ++v)
      if (rep[label[v]] == n) rep[label[v]] = v;
    for (const auto& face : c.faces_) {
      std::size_t comp = label[g.tail(face.front())];
      auto poly = c.polygon(face);
      for (std::size_t k = 0; k < ncomp; ++k)
        if (k != comp && detail::winding(poly, c.points_[rep[k]]) != 0)
          fail(ErrorKind::NestedComponents, "a component lies inside a face of another component");
    }
  }
  return c;
}

inline PlanarComplex build_complex(const std::vector<VertexSpec>& vertices,
                                   const std::vector<std::pair<VertexId, VertexId>>& edges) {
  return assemble_complex(vertices, edges);
}

// Oriented input: every pair must come with its reverse.
inline PlanarComplex build_complex_oriented(const std::vector<VertexSpec>& vertices,
                                            const std::vector<std::pair<VertexId, VertexId>>& oriented) {
  std::map<std::pair<VertexId, VertexId>, int> count;
  for (const auto& p : oriented) {
    if (++count[p] > 1) fail(ErrorKind::DuplicateEdge, std::to_string(p.first) + "->" + std::to_string(p.second));
  }
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (const auto& [p, k] : count) {
    if (!count.count({p.second, p.first}))
      fail(ErrorKind::NotBidirectional, std::to_string(p.first) + "->" + std::to_string(p.second) + " has no reverse");
    if (p.first < p.second) pairs.push_back(p);
  }
  return assemble_complex(vertices, pairs);
}

inline BoundaryComplex boundary_complex(const PlanarComplex& c) {
  BoundaryComplex b;
  b.is_boundary.assign(c.num_vertices(), false);
  for (const auto& outer : c.outer_cycles())
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) b.edges.push_back(it->reversed());
  for (Half h : b.edges) {
    VertexIndex v = c.graph().tail(h);
    if (!b.is_boundary[v]) {
      b.is_boundary[v] = true;
      b.vertices.push_back(v);
    }
  }
  return b;
}

inline bool is_admissible(const PlanarComplex& c) {
  if (c.num_vertices() == 0 || !c.graph().connected()) return false;
  for (const auto& outer : c.outer_cycles())
    for (Half h : outer)
      if (c.face_of(h.reversed()) == PlanarComplex::kOuter) return false;
  return !c.outer_cycles().empty();
}

inline PlanarComplex subcomplex(const PlanarComplex& c, const std::vector<EdgeIndex>& keep) {
  std::vector<bool> used(c.num_vertices(), false);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (EdgeIndex e : keep) {
    const Edge& ed = c.graph().edge(e);
    used[ed.tail] = used[ed.head] = true;
    pairs.emplace_back(c.id(ed.tail), c.id(ed.head));
  }
  std::vector<VertexSpec> vs;
  for (VertexIndex v = 0; v < c.num_vertices(); ++v)
    if (used[v]) vs.push_back({c.id(v), c.point(v).x, c.point(v).y});
  return build_complex(vs, pairs);
}

// Drops edges on no bounded face and splits into connected components.
inline std::vector<PlanarComplex> decompose_to_admissible(const PlanarComplex& c) {
  const Graph& g = c.graph();
  Graph kept(g.num_vertices());
  std::vector<EdgeIndex> origin;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (c.face_of({e, true}) != PlanarComplex::kOuter || c.face_of({e, false}) != PlanarComplex::kOuter) {
      kept.add_edge(g.edge(e).tail, g.edge(e).head);
      origin.push_back(e);
    }
  }
  auto [label, ncomp] = kept.components();
  std::vector<std::vector<EdgeIndex>> groups(ncomp);
  for (EdgeIndex k = 0; k < kept.num_edges(); ++k) groups[label[kept.edge(k).tail]].push_back(origin[k]);
  std::vector<PlanarComplex> out;
  for (const auto& grp : groups)
    if (!grp.empty()) out.push_back(subcomplex(c, grp));
  return out;
}

}  // namespace dipole
