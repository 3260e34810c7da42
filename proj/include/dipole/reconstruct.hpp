#pragma once

#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "forms.hpp"

namespace dipole {

inline VertexFunction integrate_curl_free(const PlanarComplex& c, VertexIndex base, double base_value,
                                          const OneForm& a, double tol = kTol) {
  auto cu = curl(a, c);
  for (std::size_t f = 0; f < cu.size(); ++f)
    if (std::abs(cu[f]) > tol)
      fail(ErrorKind::NonzeroCurl, "face " + std::to_string(f) + " has curl " + std::to_string(cu[f]));
  const Graph& g = c.graph();
  if (!g.connected()) fail(ErrorKind::PreconditionViolated, "complex is not connected");
  VertexFunction u(g.num_vertices(), 0.0);
  std::vector<bool> seen(g.num_vertices(), false);
  std::queue<VertexIndex> q;
  u[base] = base_value;
  seen[base] = true;
  q.push(base);
  while (!q.empty()) {
    VertexIndex v = q.front();
    q.pop();
    for (const auto& inc : g.incident(v)) {
      if (seen[inc.other]) continue;
      seen[inc.other] = true;
      u[inc.other] = u[v] + a.at(inc);
      q.push(inc.other);
    }
  }
  return u;
}

struct ReconstructInfo {
  Half e0;
  std::vector<Half> crossed;  // primal edges crossed by the dual path, in traversal orientation
  long charge = 0;
};

// Step 2 with a single singular face f0. The integer curl at f0 is carried out to
// the boundary along a dual path ending at the boundary edge e0; subtracting it
// on the crossed edges leaves a curl-free form which is then integrated.
inline VertexFunction reconstruct_with_singularity(const PlanarComplex& c, const VertexFunction& u,
                                                   const OneForm& at, std::optional<std::size_t> f0,
                                                   std::optional<EdgeIndex> e0_edge, double tol = kTol,
                                                   ReconstructInfo* info = nullptr) {
  const Graph& g = c.graph();
  BoundaryComplex b = boundary_complex(c);
  if (b.edges.empty()) fail(ErrorKind::PreconditionViolated, "complex has no boundary");
  for (EdgeIndex e = 0; e < at.size(); ++e)
    if (std::abs(at[e]) > 0.5 + tol) fail(ErrorKind::PreconditionViolated, "form value outside [-1/2, 1/2]");

  std::size_t e0_pos = 0;
  if (e0_edge) {
    bool found = false;
    for (std::size_t j = 0; j < b.edges.size(); ++j)
      if (b.edges[j].edge == *e0_edge) {
        e0_pos = j;
        found = true;
        break;
      }
    if (!found) fail(ErrorKind::PreconditionViolated, "e0 is not a boundary edge");
  }
  Half e0 = b.edges[e0_pos];
  OneForm du = differential(g, u);
  for (std::size_t j = 0; j < b.edges.size(); ++j) {
    Half h = b.edges[j];
    double d = du.at(h);
    if (j != e0_pos && std::abs(project_pi(d) - d) > tol)
      fail(ErrorKind::PreconditionViolated, "h0: pi(du) != du on a boundary edge other than e0");
    if (std::abs(project_pi(d) - at.at(h)) > tol)
      fail(ErrorKind::PreconditionViolated, "boundary: form differs from pi(du) on a boundary edge");
  }
  auto cu = curl(at, c);
  long k = 0;
  for (std::size_t f = 0; f < cu.size(); ++f) {
    if (f0 && f == *f0) {
      if (!near_integer(cu[f], tol)) fail(ErrorKind::PreconditionViolated, "curl at f0 is not an integer");
      k = std::lround(cu[f]);
    } else if (std::abs(cu[f]) > tol) {
      fail(ErrorKind::PreconditionViolated, "curl: nonzero curl at face " + std::to_string(f) + " other than f0");
    }
  }
  OneForm hat = at;
  ReconstructInfo local;
  local.e0 = e0;
  local.charge = k;
  if (k != 0) {
    // Dijkstra over faces, cost = (tie crossings that would leave [-1/2,1/2], length)
    std::size_t F = c.num_faces();
    using Cost = std::pair<long, long>;
    const Cost inf{1L << 60, 0};
    std::vector<Cost> dist(F + 1, inf);
    std::vector<std::optional<Half>> via(F + 1);
    std::priority_queue<std::pair<Cost, std::size_t>, std::vector<std::pair<Cost, std::size_t>>, std::greater<>> pq;
    const std::size_t target = F;
    dist[*f0] = {0, 0};
    pq.push({dist[*f0], *f0});
    auto bad = [&](Half h) {
      double v = at.at(h);
      return std::abs(v) >= 0.5 - kTightTol && (v > 0) == (k > 0);
    };
    while (!pq.empty()) {
      auto [d, f] = pq.top();
      pq.pop();
      if (d != dist[f] || f == target) continue;
      for (Half h : c.face(f)) {
        int nf = c.face_of(h.reversed());
        std::size_t to;
        if (nf == PlanarComplex::kOuter) {
          if (!(h == e0)) continue;
          to = target;
        } else {
          to = static_cast<std::size_t>(nf);
        }
        if (to == f) continue;
        Cost nd{d.first + (bad(h) ? 1 : 0), d.second + 1};
        if (nd < dist[to]) {
          dist[to] = nd;
          via[to] = h;
          pq.push({nd, to});
        }
      }
    }
    if (dist[target] == inf) fail(ErrorKind::PreconditionViolated, "f0 cannot reach e0 through the dual");
    for (std::size_t f = target; f != *f0;) {
      Half h = *via[f];
      local.crossed.push_back(h);
      hat[h.edge] -= k * h.sign();
      f = static_cast<std::size_t>(c.face_of(h));
    }
  }
  VertexIndex v0 = g.tail(e0);
  VertexFunction out = integrate_curl_free(c, v0, u[v0], hat, tol);
  for (VertexIndex v : b.vertices) {
    if (std::abs(out[v] - u[v]) > tol)
      fail(ErrorKind::InternalError, "reconstructed boundary value differs by " + std::to_string(out[v] - u[v]));
    out[v] = u[v];
  }
  if (info) *info = local;
  return out;
}

}  // namespace dipole
