#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "../removal.hpp"

namespace dipole::testkit {

// Minimum capacity over all edge subsets separating V1 from V2, by enumeration.
inline double brute_min_cut(const Graph& g, const Capacity& cap, const std::vector<VertexIndex>& V1,
                            const std::vector<VertexIndex>& V2) {
  std::vector<EdgeIndex> edges;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e)
    if (!g.is_loop(e)) edges.push_back(e);
  if (edges.size() > 14) fail(ErrorKind::TooLarge, std::to_string(edges.size()) + " edges, limit is 14");
  std::vector<bool> sink(g.num_vertices(), false);
  for (VertexIndex v : V2) sink[v] = true;
  double best = INFINITY;
  for (unsigned long mask = 0; mask < (1UL << edges.size()); ++mask) {
    std::vector<bool> removed(g.num_edges(), false);
    std::vector<double> terms;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (mask >> i & 1) removed[edges[i]] = true, terms.push_back(cap[edges[i]]);
    double c = exact_sum(terms);
    if (c >= best) continue;
    std::vector<bool> seen(g.num_vertices(), false);
    std::queue<VertexIndex> q;
    bool separated = true;
    for (VertexIndex v : V1) seen[v] = true, q.push(v);
    while (!q.empty() && separated) {
      VertexIndex v = q.front();
      q.pop();
      if (sink[v]) separated = false;
      for (const auto& inc : g.incident(v))
        if (!removed[inc.edge] && !seen[inc.other]) seen[inc.other] = true, q.push(inc.other);
    }
    if (separated) best = c;
  }
  return best;
}

enum class Forced { Unique, Indeterminate, Infeasible };

struct ForcedResult {
  Forced status = Forced::Infeasible;
  std::vector<OneForm> solutions;  // up to `limit`
};

// All forms γ on a tree with |γ| <= K|α|, γ = α on boundary-incident edges and
// integral divergence at interior vertices. Interior vertices are visited
// leaves-first; the integer divergence chosen at a vertex fixes its parent edge.
inline ForcedResult forced_form(const ChargedGraph& cg, double K = 1.0, std::size_t limit = 16, double tol = kTol) {
  const Graph& g = cg.graph;
  std::size_t n = g.num_vertices();
  if (g.num_edges() + 1 != n || !g.connected()) fail(ErrorKind::PreconditionViolated, "forced_form needs a tree");
  std::vector<bool> fixed(g.num_edges(), false);
  for (EdgeIndex e = 0; e < g.num_edges(); ++e)
    fixed[e] = cg.boundary[g.edge(e).tail] || cg.boundary[g.edge(e).head];

  // Orient the interior forest towards a root per component.
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent_edge(n, none);
  std::vector<VertexIndex> order;  // parents before children
  std::vector<bool> seen(n, false);
  for (VertexIndex r = 0; r < n; ++r) {
    if (cg.boundary[r] || seen[r]) continue;
    std::queue<VertexIndex> q;
    q.push(r);
    seen[r] = true;
    while (!q.empty()) {
      VertexIndex v = q.front();
      q.pop();
      order.push_back(v);
      for (const auto& inc : g.incident(v))
        if (!fixed[inc.edge] && !seen[inc.other]) seen[inc.other] = true, parent_edge[inc.other] = inc.edge, q.push(inc.other);
    }
  }
  std::reverse(order.begin(), order.end());

  ForcedResult res;
  OneForm gamma(g.num_edges());
  for (EdgeIndex e = 0; e < g.num_edges(); ++e)
    if (fixed[e]) gamma[e] = cg.alpha[e];

  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (res.solutions.size() >= limit) return;
    if (i == order.size()) {
      res.solutions.push_back(gamma);
      return;
    }
    VertexIndex v = order[i];
    double known = 0;
    const Incidence* up = nullptr;
    for (const auto& inc : g.incident(v)) {
      if (inc.edge == parent_edge[v]) up = &inc;
      else known += gamma.at(inc);
    }
    if (!up) {
      if (near_integer(known, tol)) visit(i + 1);
      return;
    }
    double bound = K * std::abs(cg.alpha[up->edge]) + tol;
    // x = k - known with |x| <= bound
    long lo = static_cast<long>(std::ceil(known - bound)), hi = static_cast<long>(std::floor(known + bound));
    for (long k = lo; k <= hi; ++k) {
      double x = k - known;
      gamma[up->edge] = up->sign * x;
      visit(i + 1);
    }
    gamma[up->edge] = 0;
  };
  visit(0);
  res.status = res.solutions.empty() ? Forced::Infeasible
                                     : (res.solutions.size() == 1 ? Forced::Unique : Forced::Indeterminate);
  return res;
}

// The three tree examples showing the removal hypotheses are sharp.
inline ChargedGraph sharpness_example(int which, double eps) {
  ChargedGraph cg;
  auto add = [&](VertexIndex a, VertexIndex b, double v) {
    cg.graph.add_edge(a, b);
    cg.alpha.values.push_back(v);
  };
  if (which == 1) {  // a A B b
    cg.graph = Graph(4);
    cg.boundary = {true, false, false, true};
    add(0, 1, 0.5 + eps);
    add(1, 2, -(0.5 - eps));
    add(2, 3, 0.5 + eps);
  } else if (which == 2) {  // a1 a2 A1 A2 B b
    cg.graph = Graph(6);
    cg.boundary = {true, true, false, false, false, true};
    add(0, 2, 0.5 + eps);
    add(1, 3, 0.5 + eps);
    add(2, 4, -0.5 + eps);
    add(3, 4, -0.5 + eps);
    add(4, 5, 2 * eps);
  } else {  // a1 a2 a3 A1 A2 A3 B
    cg.graph = Graph(7);
    cg.boundary = {true, true, true, false, false, false, false};
    for (VertexIndex i = 0; i < 3; ++i) add(i, 3 + i, 2.0 / 3);
    for (VertexIndex i = 0; i < 3; ++i) add(6, 3 + i, 1.0 / 3);
  }
  return cg;
}

}  // namespace dipole::testkit
