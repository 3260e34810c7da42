#pragma once

#include <algorithm>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "../lattice.hpp"
#include "../pipeline.hpp"

namespace dipole::testkit {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// Jittered grid with random holes and diagonals, reduced to its largest admissible piece.
inline PlanarComplex random_admissible_complex(Rng& rng, std::size_t max_faces = 30) {
  for (;;) {
    int w = 1 + static_cast<int>(pick(rng, 5)), h = 1 + static_cast<int>(pick(rng, 4));
    std::vector<VertexSpec> vs;
    for (int y = 0; y <= h; ++y)
      for (int x = 0; x <= w; ++x)
        vs.push_back({y * (w + 1) + x, x + uniform(rng, -0.2, 0.2), y + uniform(rng, -0.2, 0.2)});
    std::set<std::pair<VertexId, VertexId>> es;
    auto id = [&](int x, int y) { return static_cast<VertexId>(y * (w + 1) + x); };
    std::size_t faces = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (uniform(rng, 0, 1) < 0.2) continue;
        es.insert({id(x, y), id(x + 1, y)});
        es.insert({id(x, y + 1), id(x + 1, y + 1)});
        es.insert({id(x, y), id(x, y + 1)});
        es.insert({id(x + 1, y), id(x + 1, y + 1)});
        ++faces;
        if (uniform(rng, 0, 1) < 0.3 && faces < max_faces) {
          es.insert(uniform(rng, 0, 1) < 0.5 ? std::pair{id(x, y), id(x + 1, y + 1)} : std::pair{id(x + 1, y), id(x, y + 1)});
          ++faces;
        }
      }
    if (es.empty()) continue;
    std::set<VertexId> used;
    for (auto [a, b] : es) used.insert(a), used.insert(b);
    std::vector<VertexSpec> keep;
    for (const auto& v : vs)
      if (used.count(v.id)) keep.push_back(v);
    auto parts = decompose_to_admissible(build_complex(keep, {es.begin(), es.end()}));
    if (parts.empty()) continue;
    auto best = std::max_element(parts.begin(), parts.end(),
                                 [](const auto& a, const auto& b) { return a.num_faces() < b.num_faces(); });
    if (best->num_faces() <= max_faces) return *best;
  }
}

struct FlowInstance {
  Graph graph;
  Capacity cap;
  std::vector<VertexIndex> V1, V2;
};

inline FlowInstance random_flow_instance(Rng& rng) {
  FlowInstance fi;
  std::size_t n = 2 + pick(rng, 7);
  fi.graph = Graph(n);
  std::set<std::pair<VertexIndex, VertexIndex>> es;
  for (VertexIndex v = 1; v < n; ++v) es.insert({pick(rng, v), v});
  std::size_t extra = pick(rng, 10);
  for (std::size_t i = 0; i < extra && es.size() < 14; ++i) {
    VertexIndex a = pick(rng, n), b = pick(rng, n);
    if (a != b) es.insert(std::minmax(a, b));
  }
  for (auto [a, b] : es) {
    fi.graph.add_edge(a, b);
    fi.cap.push_back(uniform(rng, 0, 1) < 0.1 ? 0.0 : uniform(rng, 0, 1));
  }
  std::vector<VertexIndex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::size_t k1 = 1 + pick(rng, std::max<std::size_t>(1, n / 2));
  std::size_t k2 = 1 + pick(rng, n - k1);
  fi.V1.assign(perm.begin(), perm.begin() + k1);
  fi.V2.assign(perm.begin() + k1, perm.begin() + k1 + k2);
  return fi;
}

namespace detail {

// Random shortest path from any of `from` to any of `to` through allowed vertices.
inline std::optional<std::vector<Half>> random_path(Rng& rng, const Graph& g, VertexIndex from, VertexIndex to,
                                                    const std::vector<bool>& allowed) {
  std::vector<std::optional<Half>> via(g.num_vertices());
  std::vector<bool> seen(g.num_vertices(), false);
  std::queue<VertexIndex> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty()) {
    VertexIndex v = q.front();
    q.pop();
    if (v == to) break;
    auto inc = g.incident(v);
    std::shuffle(inc.begin(), inc.end(), rng);
    for (const auto& i : inc) {
      if (seen[i.other] || (!allowed[i.other] && i.other != to)) continue;
      seen[i.other] = true;
      via[i.other] = i.half();
      q.push(i.other);
    }
  }
  if (!seen[to] || from == to) return std::nullopt;
  std::vector<Half> path;
  for (VertexIndex v = to; v != from; v = g.tail(*via[v])) path.push_back(*via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

inline void add_path(OneForm& a, const std::vector<Half>& p, double w) {
  for (Half h : p) a[h.edge] += h.forward ? w : -w;
}

struct Skeleton {
  ChargedGraph cg;
  std::vector<VertexIndex> interior, boundary;
  std::vector<bool> interior_mask;
};

inline Skeleton random_skeleton(Rng& rng) {
  Skeleton s;
  std::size_t ni = 3 + pick(rng, 7), nb = 2 + pick(rng, 4);
  s.cg.graph = Graph(ni + nb);
  s.cg.boundary.assign(ni + nb, false);
  s.interior_mask.assign(ni + nb, false);
  for (VertexIndex v = 0; v < ni; ++v) s.interior.push_back(v), s.interior_mask[v] = true;
  for (VertexIndex v = ni; v < ni + nb; ++v) s.boundary.push_back(v), s.cg.boundary[v] = true;
  std::set<std::pair<VertexIndex, VertexIndex>> es;
  for (VertexIndex v = 1; v < ni; ++v) es.insert({pick(rng, v), v});
  for (std::size_t i = 0, extra = pick(rng, ni + 2); i < extra; ++i) {
    VertexIndex a = pick(rng, ni), b = pick(rng, ni);
    if (a != b) es.insert(std::minmax(a, b));
  }
  for (VertexIndex b : s.boundary) {
    es.insert({pick(rng, ni), b});
    if (uniform(rng, 0, 1) < 0.4) es.insert({pick(rng, ni), b});
  }
  if (nb >= 2 && uniform(rng, 0, 1) < 0.5) es.insert({s.boundary[0], s.boundary[1]});
  for (auto [a, b] : es) {
    if (uniform(rng, 0, 1) < 0.5) s.cg.graph.add_edge(a, b);
    else s.cg.graph.add_edge(b, a);
  }
  s.cg.alpha = OneForm(s.cg.graph.num_edges());
  return s;
}

// Integer dipoles and real circulations, both supported on interior vertices.
inline void add_interior_noise(Rng& rng, Skeleton& s, OneForm& a) {
  const Graph& g = s.cg.graph;
  for (std::size_t i = 0, k = pick(rng, 4); i < k; ++i) {
    VertexIndex x = s.interior[pick(rng, s.interior.size())], y = s.interior[pick(rng, s.interior.size())];
    if (auto p = random_path(rng, g, x, y, s.interior_mask)) add_path(a, *p, uniform(rng, 0, 1) < 0.5 ? 1.0 : -1.0);
  }
  for (std::size_t i = 0, k = pick(rng, 3); i < k; ++i) {
    EdgeIndex e = pick(rng, g.num_edges());
    VertexIndex x = g.edge(e).tail, y = g.edge(e).head;
    if (!s.interior_mask[x] || !s.interior_mask[y]) continue;
    std::vector<bool> allowed = s.interior_mask;
    // route back from y to x avoiding e by removing it from a copy
    Graph h(g.num_vertices());
    for (EdgeIndex f = 0; f < g.num_edges(); ++f)
      if (f != e) h.add_edge(g.edge(f).tail, g.edge(f).head);
    if (auto p = random_path(rng, h, y, x, allowed)) {
      double w = uniform(rng, -0.7, 0.7);
      a[e] += w;
      for (Half q : *p) {
        EdgeIndex f = q.edge >= e ? q.edge + 1 : q.edge;
        a[f] += q.forward ? w : -w;
      }
    }
  }
}

}  // namespace detail

// Flux 0, boundary total variation at most 1 (sometimes exactly 1).
inline ChargedGraph zero_flux_instance(Rng& rng) {
  for (;;) {
    auto s = detail::random_skeleton(rng);
    const Graph& g = s.cg.graph;
    OneForm bg(g.num_edges());
    std::vector<bool> mids = s.interior_mask;
    for (std::size_t i = 0, k = 1 + pick(rng, 3); i < k; ++i) {
      VertexIndex x = s.boundary[pick(rng, s.boundary.size())], y = s.boundary[pick(rng, s.boundary.size())];
      if (auto p = detail::random_path(rng, g, x, y, mids)) detail::add_path(bg, *p, uniform(rng, 0.05, 1));
    }
    double tv = boundary_tv(g, bg, s.cg.boundary);
    if (tv <= 0) continue;
    double target = uniform(rng, 0, 1) < 0.2 ? 1.0 : uniform(rng, 0.05, 0.999);
    OneForm a(g.num_edges());
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) a[e] = bg[e] * (target / tv);
    detail::add_interior_noise(rng, s, a);
    s.cg.alpha = a;
    double t = boundary_tv(g, a, s.cg.boundary);
    if (t > 1 + 1e-12 || std::abs(flux(g, a, s.cg.boundary)) > 1e-12) continue;
    return s.cg;
  }
}

// Flux ±1 with boundary total variation 1.
inline ChargedGraph unit_flux_instance(Rng& rng) {
  for (;;) {
    auto s = detail::random_skeleton(rng);
    const Graph& g = s.cg.graph;
    VertexIndex x = s.interior[pick(rng, s.interior.size())];
    std::size_t k = 1 + pick(rng, 3);
    std::vector<double> w(k);
    for (auto& v : w) v = uniform(rng, 0.05, 1);
    double sum = exact_sum(w);
    OneForm a(g.num_edges());
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      VertexIndex b = s.boundary[pick(rng, s.boundary.size())];
      auto p = detail::random_path(rng, g, x, b, s.interior_mask);
      if (!p) ok = false;
      else detail::add_path(a, *p, w[i] / sum);
    }
    if (!ok) continue;
    detail::add_interior_noise(rng, s, a);
    if (uniform(rng, 0, 1) < 0.5) a = -a;
    s.cg.alpha = a;
    double fl = flux(g, a, s.cg.boundary), tv = boundary_tv(g, a, s.cg.boundary);
    if (std::abs(std::abs(fl) - 1) > 1e-12 || std::abs(tv - 1) > 1e-12) continue;
    return s.cg;
  }
}

struct PipelineInstance {
  PlanarComplex complex;
  VertexFunction u;
  bool unit = false;
};

inline PipelineInstance random_pipeline_instance(Rng& rng) {
  for (;;) {
    PipelineInstance pi{random_admissible_complex(rng), {}, uniform(rng, 0, 1) < 0.5};
    const auto& c = pi.complex;
    if (c.num_faces() < 2) continue;
    BoundaryComplex b = boundary_complex(c);
    Point center = dipole::detail::interior_point(c.polygon(c.face(pick(rng, c.num_faces()))));
    pi.u.assign(c.num_vertices(), 0.0);
    double amp = uniform(rng, 0, 0.3), phase = uniform(rng, 0, 1);
    int m = 1 + static_cast<int>(pick(rng, 2));
    for (VertexIndex v : b.vertices) {
      Point p{c.point(v).x - center.x, c.point(v).y - center.y};
      double t = turn_angle(p) / (2 * std::numbers::pi);
      pi.u[v] = pi.unit ? t : amp * std::sin(2 * std::numbers::pi * (m * t + phase));
    }
    bool noisy = uniform(rng, 0, 1) < 0.6;
    for (VertexIndex v = 0; v < c.num_vertices(); ++v)
      if (!b.is_boundary[v]) pi.u[v] = noisy ? uniform(rng, 0, 1) : uniform(rng, -0.1, 0.1);
    auto h = check_hypotheses(pi.u, c);
    if (!h.h0_ok || (pi.unit ? !h.h2_ok : !h.h1_ok)) continue;
    return pi;
  }
}

}  // namespace dipole::testkit
