#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "graph.hpp"

namespace dipole {

using Capacity = std::vector<double>;  // per stored edge, both orientations

struct WeightedPath {
  std::vector<VertexIndex> vertices;
  std::vector<Half> edges;
  double multiplicity = 0;
};

struct PathFlow {
  std::vector<WeightedPath> paths;
  double stripped_circulation = 0;  // largest cycle amount removed

  double total() const {
    std::vector<double> m;
    for (const auto& p : paths) m.push_back(p.multiplicity);
    return exact_sum(m);
  }
};

inline OneForm flow_form(const PathFlow& pf, std::size_t num_edges) {
  std::vector<std::vector<double>> terms(num_edges);
  for (const auto& p : pf.paths)
    for (Half h : p.edges) terms[h.edge].push_back(h.forward ? p.multiplicity : -p.multiplicity);
  OneForm a(num_edges);
  for (EdgeIndex e = 0; e < num_edges; ++e) a[e] = exact_sum(terms[e]);
  return a;
}

struct FlowResult {
  OneForm flow;  // acyclic net flow form
  PathFlow paths;
  double value = 0;
  double cut_capacity = 0;
  std::vector<EdgeIndex> cut_edges;
  std::vector<Half> oriented_cut;        // source side -> sink side
  std::vector<bool> source_side;         // reachable from V1 without crossing the cut
  std::vector<bool> sink_side;           // reachable from V2 without crossing the cut
  std::vector<VertexIndex> cut_source_endpoints;
  std::vector<VertexIndex> cut_sink_endpoints;
};

struct FlowOptions {
  std::optional<std::uint64_t> shuffle_seed;
  double residual_tol = kTightTol;
};

namespace detail {

inline std::vector<bool> vertex_mask(std::size_t n, const std::vector<VertexIndex>& vs) {
  std::vector<bool> m(n, false);
  for (VertexIndex v : vs) {
    if (v >= n) fail(ErrorKind::UnknownVertex, "terminal out of range");
    m[v] = true;
  }
  return m;
}

}  // namespace detail

// Splits a flow form into simple source-to-sink paths; circulations are dropped.
inline PathFlow decompose(const Graph& g, const OneForm& form, const std::vector<VertexIndex>& V1,
                          const std::vector<VertexIndex>& V2, double tol = kTol) {
  std::size_t n = g.num_vertices();
  auto in1 = detail::vertex_mask(n, V1);
  auto in2 = detail::vertex_mask(n, V2);
  auto div = divergence(g, form);
  for (VertexIndex v = 0; v < n; ++v) {
    if (!in1[v] && !in2[v] && std::abs(div[v]) > tol)
      fail(ErrorKind::NotAFlow, "divergence " + std::to_string(div[v]) + " at a non-terminal vertex");
    if (in1[v] && !in2[v] && div[v] < -tol) fail(ErrorKind::NotAFlow, "negative outflow at a source");
  }
  // residual arc amounts along the positive direction of each edge
  std::vector<double> amount(g.num_edges());
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) amount[e] = g.is_loop(e) ? 0.0 : std::abs(form[e]);
  auto arc_dir = [&](EdgeIndex e) { return form[e] >= 0; };
  auto out_arcs = [&](VertexIndex v, std::vector<Half>& arcs) {
    arcs.clear();
    for (const auto& inc : g.incident(v))
      if (amount[inc.edge] > 0 && inc.half().forward == arc_dir(inc.edge) && inc.other != v) arcs.push_back(inc.half());
  };
  std::vector<double> net(div);  // remaining outflow per vertex
  const double residue = tol * 1e-3;
  PathFlow pf;
  std::vector<Half> arcs;
  std::vector<long> on_walk(n, -1);

  auto strip = [&](std::vector<Half>& walk, std::vector<VertexIndex>& verts, std::size_t from) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = from; i < walk.size(); ++i) m = std::min(m, amount[walk[i].edge]);
    for (std::size_t i = from; i < walk.size(); ++i) {
      amount[walk[i].edge] -= m;
      if (amount[walk[i].edge] <= residue) amount[walk[i].edge] = 0;
    }
    pf.stripped_circulation = std::max(pf.stripped_circulation, m);
    for (std::size_t i = from + 1; i < verts.size(); ++i) on_walk[verts[i]] = -1;
    walk.resize(from);
    verts.resize(from + 1);
  };

  for (VertexIndex s = 0; s < n; ++s) {
    if (!in1[s]) continue;
    while (net[s] > residue) {
      std::vector<Half> walk;
      std::vector<VertexIndex> verts{s};
      on_walk[s] = 0;
      bool done = false;
      while (!done) {
        VertexIndex v = verts.back();
        if (in2[v] && v != s && -net[v] > residue) break;
        out_arcs(v, arcs);
        if (arcs.empty()) {
          if (walk.empty()) {
            done = true;
            break;
          }
          // stranded on a rounding residue: discard the arc and step back
          Half last = walk.back();
          if (amount[last.edge] > tol) fail(ErrorKind::NotAFlow, "flow is not conserved");
          amount[last.edge] = 0;
          on_walk[v] = -1;
          walk.pop_back();
          verts.pop_back();
          continue;
        }
        Half h = *std::max_element(arcs.begin(), arcs.end(),
                                   [&](Half a, Half b) { return amount[a.edge] < amount[b.edge]; });
        VertexIndex w = g.head(h);
        walk.push_back(h);
        if (on_walk[w] >= 0) {
          strip(walk, verts, static_cast<std::size_t>(on_walk[w]));
          continue;
        }
        on_walk[w] = static_cast<long>(verts.size());
        verts.push_back(w);
      }
      for (VertexIndex v : verts) on_walk[v] = -1;
      if (done) {
        // only rounding residue can strand a walk
        if (net[s] > 1e-7) fail(ErrorKind::NotAFlow, "unroutable source excess");
        net[s] = 0;
        break;
      }
      VertexIndex t = verts.back();
      double m = std::min(net[s], -net[t]);
      for (Half h : walk) m = std::min(m, amount[h.edge]);
      for (Half h : walk) {
        amount[h.edge] -= m;
        if (amount[h.edge] <= residue) amount[h.edge] = 0;
      }
      net[s] -= m;
      net[t] += m;
      pf.paths.push_back({verts, walk, m});
    }
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e)
    pf.stripped_circulation = std::max(pf.stripped_circulation, amount[e]);
  return pf;
}

inline FlowResult max_flow_min_cut(const Graph& g, const Capacity& cap, const std::vector<VertexIndex>& V1,
                                   const std::vector<VertexIndex>& V2, const FlowOptions& opt = {}) {
  if (V1.empty() || V2.empty()) fail(ErrorKind::EmptyTerminalSet, "both terminal sets must be nonempty");
  std::size_t n = g.num_vertices();
  auto in1 = detail::vertex_mask(n, V1);
  auto in2 = detail::vertex_mask(n, V2);
  for (VertexIndex v = 0; v < n; ++v)
    if (in1[v] && in2[v]) fail(ErrorKind::EmptyTerminalSet, "terminal sets overlap");
  if (!g.connected()) fail(ErrorKind::DisconnectedGraph, "flow graph is disconnected");
  for (double c : cap)
    if (!(c >= 0)) fail(ErrorKind::MalformedInput, "capacities must be nonnegative");

  std::vector<std::vector<Incidence>> adj(n);
  for (VertexIndex v = 0; v < n; ++v)
    for (const auto& inc : g.incident(v))
      if (inc.other != v) adj[v].push_back(inc);
  if (opt.shuffle_seed) {
    std::mt19937_64 rng(*opt.shuffle_seed);
    for (auto& a : adj) std::shuffle(a.begin(), a.end(), rng);
  }

  std::vector<double> phi(g.num_edges(), 0.0);
  auto residual = [&](const Incidence& inc) { return cap[inc.edge] - inc.sign * phi[inc.edge]; };
  const double tol = opt.residual_tol;
  constexpr std::size_t none = static_cast<std::size_t>(-1);

  std::vector<std::size_t> parent_edge(n);
  std::vector<int> parent_sign(n);
  std::vector<VertexIndex> parent(n);
  std::vector<bool> seen(n);
  auto bfs = [&]() -> std::optional<VertexIndex> {
    std::fill(seen.begin(), seen.end(), false);
    std::queue<VertexIndex> q;
    for (VertexIndex v = 0; v < n; ++v)
      if (in1[v]) {
        seen[v] = true;
        parent_edge[v] = none;
        q.push(v);
      }
    while (!q.empty()) {
      VertexIndex v = q.front();
      q.pop();
      for (const auto& inc : adj[v]) {
        if (seen[inc.other] || residual(inc) <= tol) continue;
        seen[inc.other] = true;
        parent[inc.other] = v;
        parent_edge[inc.other] = inc.edge;
        parent_sign[inc.other] = inc.sign;
        if (in2[inc.other]) return inc.other;
        q.push(inc.other);
      }
    }
    return std::nullopt;
  };

  while (auto t = bfs()) {
    double delta = std::numeric_limits<double>::infinity();
    for (VertexIndex v = *t; parent_edge[v] != none; v = parent[v])
      delta = std::min(delta, cap[parent_edge[v]] - parent_sign[v] * phi[parent_edge[v]]);
    for (VertexIndex v = *t; parent_edge[v] != none; v = parent[v]) {
      phi[parent_edge[v]] += parent_sign[v] * delta;
    }
  }

  FlowResult r;
  r.source_side = seen;  // residual reachability after the last failed search
  std::vector<double> cut_terms;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (r.source_side[ed.tail] != r.source_side[ed.head]) {
      r.cut_edges.push_back(e);
      cut_terms.push_back(cap[e]);
      r.oriented_cut.push_back({e, r.source_side[ed.tail]});
    }
  }
  r.cut_capacity = exact_sum(cut_terms);
  std::vector<bool> is_cut(g.num_edges(), false);
  for (EdgeIndex e : r.cut_edges) is_cut[e] = true;
  r.sink_side.assign(n, false);
  {
    std::queue<VertexIndex> q;
    for (VertexIndex v = 0; v < n; ++v)
      if (in2[v]) {
        r.sink_side[v] = true;
        q.push(v);
      }
    while (!q.empty()) {
      VertexIndex v = q.front();
      q.pop();
      for (const auto& inc : adj[v])
        if (!is_cut[inc.edge] && !r.sink_side[inc.other]) {
          r.sink_side[inc.other] = true;
          q.push(inc.other);
        }
    }
  }
  std::vector<bool> mark_s(n, false), mark_t(n, false);
  for (Half h : r.oriented_cut) {
    VertexIndex a = g.tail(h), b = g.head(h);
    if (!mark_s[a]) r.cut_source_endpoints.push_back(a), mark_s[a] = true;
    if (!mark_t[b]) r.cut_sink_endpoints.push_back(b), mark_t[b] = true;
  }
  std::sort(r.cut_source_endpoints.begin(), r.cut_source_endpoints.end());
  std::sort(r.cut_sink_endpoints.begin(), r.cut_sink_endpoints.end());

  r.paths = decompose(g, OneForm(phi), V1, V2);
  r.flow = flow_form(r.paths, g.num_edges());
  r.value = r.paths.total();
  return r;
}

}  // namespace dipole
