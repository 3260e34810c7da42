#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flow.hpp"

namespace dipole {

struct ChargedGraph {
  Graph graph;
  std::vector<bool> boundary;
  OneForm alpha;
};

struct ReductionStats {
  std::size_t frozen_boundary_pairs = 0;  // R1
  std::size_t frozen_zero = 0;
  std::size_t boundary_splits = 0;        // R2
  std::size_t interior_splits = 0;        // R3
  std::size_t components = 0;
};

struct ReductionTrace {
  std::size_t original_edges = 0;
  std::vector<EdgeIndex> frozen;  // original edges that keep their value
  std::vector<std::vector<VertexIndex>> vertex_origin;
  std::vector<std::vector<EdgeIndex>> edge_origin;
  ReductionStats stats;
};

struct Reduction {
  std::vector<ChargedGraph> components;
  ReductionTrace trace;
};

struct RemovalOptions {
  std::optional<std::uint64_t> x0_seed;
  double tol = kTol;
  FlowOptions flow;
};

struct RemovalCertificate {
  double flux = 0;
  double tv = 0;
  double max_ratio = 0;
  std::optional<VertexIndex> x0;
  std::optional<EdgeIndex> witness;
  std::size_t depth = 0;
  std::size_t positive_charges = 0;
};

struct RemovalResult {
  OneForm gamma;
  RemovalCertificate cert;
};

inline std::vector<VertexIndex> interior_charges(const ChargedGraph& cg, int sign, const std::vector<double>& div) {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < cg.graph.num_vertices(); ++v)
    if (!cg.boundary[v] && std::lround(div[v]) * sign > 0) out.push_back(v);
  return out;
}

inline void check_integral_divergence(const ChargedGraph& cg, const std::vector<double>& div, double tol) {
  for (VertexIndex v = 0; v < cg.graph.num_vertices(); ++v)
    if (!cg.boundary[v] && !near_integer(div[v], tol))
      fail(ErrorKind::IntegralityViolation, "divergence " + std::to_string(div[v]) + " at interior vertex " +
                                                std::to_string(v) + " is not an integer");
}

inline double max_ratio(const OneForm& gamma, const OneForm& alpha, double tol = kTol) {
  double m = 0;
  for (EdgeIndex e = 0; e < alpha.size(); ++e) {
    if (std::abs(alpha[e]) > tol) m = std::max(m, std::abs(gamma[e]) / std::abs(alpha[e]));
    else if (std::abs(gamma[e]) > tol) return std::numeric_limits<double>::infinity();
  }
  return m;
}

// Boundary and interior vertex splitting. Frozen edges (boundary pairs, zero values, loops)
// keep their value; everything else is mapped into connected reduced pieces.
inline Reduction reduce(const ChargedGraph& cg, double tol = kTol) {
  const Graph& g = cg.graph;
  auto div = divergence(g, cg.alpha);
  check_integral_divergence(cg, div, tol);

  struct WEdge {
    std::size_t a, b;
    double val;
    EdgeIndex origin;
  };
  std::vector<WEdge> edges;
  std::vector<std::vector<std::size_t>> inc;
  std::vector<VertexIndex> origin;
  std::vector<bool> bnd;
  auto add_node = [&](VertexIndex o, bool b) {
    inc.emplace_back();
    origin.push_back(o);
    bnd.push_back(b);
    return inc.size() - 1;
  };
  auto add_wedge = [&](std::size_t a, std::size_t b, double val, EdgeIndex o) {
    edges.push_back({a, b, val, o});
    inc[a].push_back(edges.size() - 1);
    inc[b].push_back(edges.size() - 1);
  };

  Reduction red;
  auto& tr = red.trace;
  tr.original_edges = g.num_edges();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> node(g.num_vertices(), none), plus(g.num_vertices(), none), minus(g.num_vertices(), none);
  for (VertexIndex v = 0; v < g.num_vertices(); ++v)
    if (!cg.boundary[v]) node[v] = add_node(v, false);

  auto endpoint = [&](VertexIndex v, double outgoing) -> std::size_t {
    if (!cg.boundary[v]) return node[v];
    auto& slot = outgoing > 0 ? plus[v] : minus[v];
    if (slot == none) slot = add_node(v, true);
    return slot;
  };
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    double a = cg.alpha[e];
    if (ed.tail == ed.head) {
      tr.frozen.push_back(e);
    } else if (cg.boundary[ed.tail] && cg.boundary[ed.head]) {
      tr.frozen.push_back(e);
      ++tr.stats.frozen_boundary_pairs;
    } else if (a == 0) {
      tr.frozen.push_back(e);
      ++tr.stats.frozen_zero;
    } else {
      add_wedge(endpoint(ed.tail, a), endpoint(ed.head, -a), a, e);
    }
  }
  for (VertexIndex v = 0; v < g.num_vertices(); ++v)
    if (plus[v] != none && minus[v] != none) ++tr.stats.boundary_splits;

  auto seen_from = [&](std::size_t n, std::size_t ei) { return edges[ei].a == n ? edges[ei].val : -edges[ei].val; };
  auto set_from = [&](std::size_t n, std::size_t ei, double v) { edges[ei].val = edges[ei].a == n ? v : -v; };

  for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
    if (cg.boundary[v]) continue;
    long k = std::lround(div[v]);
    if (k == 0) continue;
    std::size_t n0 = node[v];
    double s = k > 0 ? 1.0 : -1.0;
    long kk = std::labs(k);
    bool coherent = true;
    for (std::size_t ei : inc[n0])
      if (s * seen_from(n0, ei) < 0) coherent = false;
    if (kk == 1 && coherent) continue;
    ++tr.stats.interior_splits;
    std::vector<std::size_t> local = inc[n0];
    std::vector<double> pos_terms, neg_terms;
    for (std::size_t ei : local) {
      double a = s * seen_from(n0, ei);
      (a >= 0 ? pos_terms : neg_terms).push_back(a);
    }
    double a_plus = exact_sum(pos_terms);
    double a_minus = -exact_sum(neg_terms);
    std::vector<std::size_t> copies;
    for (long j = 0; j < kk; ++j) copies.push_back(add_node(v, false));
    for (std::size_t ei : local) {
      double a = s * seen_from(n0, ei);
      if (a < 0) continue;
      set_from(n0, ei, s * a * (a_minus / a_plus));
      std::size_t other = edges[ei].a == n0 ? edges[ei].b : edges[ei].a;
      bool n0_is_tail = edges[ei].a == n0;
      EdgeIndex o = edges[ei].origin;
      for (std::size_t cj : copies) {
        double val = s * a / a_plus;
        if (n0_is_tail) add_wedge(cj, other, val, o);
        else add_wedge(other, cj, -val, o);
      }
    }
  }

  // R3 with no opposing edges scales the original edges to zero; drop them
  std::vector<WEdge> live;
  for (const auto& we : edges)
    if (we.val != 0) live.push_back(we);
  edges.swap(live);
  for (auto& l : inc) l.clear();
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    inc[edges[ei].a].push_back(ei);
    inc[edges[ei].b].push_back(ei);
  }

  // connected pieces
  std::size_t nn = inc.size();
  std::vector<std::size_t> comp(nn, none);
  std::size_t ncomp = 0;
  for (std::size_t s0 = 0; s0 < nn; ++s0) {
    if (comp[s0] != none || inc[s0].empty()) continue;
    std::vector<std::size_t> stack{s0};
    comp[s0] = ncomp;
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t ei : inc[x]) {
        std::size_t y = edges[ei].a == x ? edges[ei].b : edges[ei].a;
        if (comp[y] == none) comp[y] = ncomp, stack.push_back(y);
      }
    }
    ++ncomp;
  }
  std::vector<std::size_t> local_index(nn, none);
  red.components.resize(ncomp);
  tr.vertex_origin.resize(ncomp);
  tr.edge_origin.resize(ncomp);
  for (std::size_t x = 0; x < nn; ++x) {
    if (comp[x] == none) continue;
    auto& C = red.components[comp[x]];
    local_index[x] = C.graph.add_vertex();
    C.boundary.push_back(bnd[x]);
    tr.vertex_origin[comp[x]].push_back(origin[x]);
  }
  for (const auto& we : edges) {
    std::size_t k = comp[we.a];
    auto& C = red.components[k];
    C.graph.add_edge(local_index[we.a], local_index[we.b]);
    C.alpha.values.push_back(we.val);
    tr.edge_origin[k].push_back(we.origin);
  }
  tr.stats.components = ncomp;
  return red;
}

inline OneForm project(const ReductionTrace& tr, const std::vector<OneForm>& pieces, const OneForm& alpha) {
  std::vector<std::vector<double>> terms(tr.original_edges);
  for (EdgeIndex e : tr.frozen) terms[e].push_back(alpha[e]);
  for (std::size_t k = 0; k < pieces.size(); ++k)
    for (EdgeIndex e = 0; e < pieces[k].size(); ++e) terms[tr.edge_origin[k][e]].push_back(pieces[k][e]);
  OneForm out(tr.original_edges);
  for (EdgeIndex e = 0; e < tr.original_edges; ++e) out[e] = exact_sum(terms[e]);
  return out;
}

namespace detail {

inline Capacity abs_capacity(const OneForm& a) {
  Capacity c(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) c[e] = std::abs(a[e]);
  return c;
}

// Zero-flux removal on one reduced piece: max flow from V∂+ to V∂- under c = |α|.
inline OneForm zero_flux_piece(const ChargedGraph& cg, const RemovalOptions& opt) {
  std::vector<VertexIndex> vplus, vminus;
  std::vector<double> pos_terms;
  for (VertexIndex v = 0; v < cg.graph.num_vertices(); ++v) {
    if (!cg.boundary[v]) continue;
    double out = 0;
    for (const auto& inc : cg.graph.incident(v)) out += cg.alpha.at(inc);
    if (out > 0) {
      vplus.push_back(v);
      for (const auto& inc : cg.graph.incident(v)) pos_terms.push_back(cg.alpha.at(inc));
    } else {
      vminus.push_back(v);
    }
  }
  if (vplus.empty() || vminus.empty()) {
    // flux 0 forces a one-signed boundary to carry only rounding residue
    if (boundary_tv(cg.graph, cg.alpha, cg.boundary) > opt.tol)
      fail(ErrorKind::InternalError, "zero-flux piece with one-signed boundary");
    return OneForm(cg.graph.num_edges());
  }
  double xi0 = exact_sum(pos_terms);
  FlowResult r = max_flow_min_cut(cg.graph, abs_capacity(cg.alpha), vplus, vminus, opt.flow);
  if (std::abs(r.value - xi0) > opt.tol)
    fail(ErrorKind::InternalError, "max flow " + std::to_string(r.value) + " differs from boundary outflow " +
                                       std::to_string(xi0));
  return r.flow;
}

inline void snap_boundary(const ChargedGraph& cg, OneForm& gamma, double tol) {
  const Graph& g = cg.graph;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if (!cg.boundary[g.edge(e).tail] && !cg.boundary[g.edge(e).head]) continue;
    if (std::abs(gamma[e] - cg.alpha[e]) > tol)
      fail(ErrorKind::InternalError, "boundary edge " + std::to_string(e) + " changed by " +
                                         std::to_string(gamma[e] - cg.alpha[e]));
    gamma[e] = cg.alpha[e];
  }
}

inline void check_domination(const OneForm& gamma, const OneForm& alpha, double factor, double tol) {
  for (EdgeIndex e = 0; e < alpha.size(); ++e)
    if (std::abs(gamma[e]) > factor * std::abs(alpha[e]) + tol)
      fail(ErrorKind::InternalError, "edge " + std::to_string(e) + " violates |gamma| <= " +
                                         std::to_string(factor) + "|alpha|");
}

inline void check_interior_divergence(const ChargedGraph& cg, const OneForm& gamma, std::optional<VertexIndex> x0,
                                      double charge, double tol) {
  auto div = divergence(cg.graph, gamma);
  for (VertexIndex v = 0; v < cg.graph.num_vertices(); ++v) {
    if (cg.boundary[v]) continue;
    double want = (x0 && *x0 == v) ? charge : 0.0;
    if (std::abs(div[v] - want) > tol)
      fail(ErrorKind::InternalError, "divergence " + std::to_string(div[v]) + " at vertex " + std::to_string(v));
  }
}

inline ChargedGraph restrict_to(const ChargedGraph& cg, const std::vector<bool>& keep_vertex,
                                const std::vector<bool>& new_boundary, const std::vector<EdgeIndex>& keep_edges,
                                const OneForm& values, std::vector<VertexIndex>& vmap) {
  ChargedGraph sub;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  vmap.assign(cg.graph.num_vertices(), none);
  for (VertexIndex v = 0; v < cg.graph.num_vertices(); ++v)
    if (keep_vertex[v]) {
      vmap[v] = sub.graph.add_vertex();
      sub.boundary.push_back(new_boundary[v]);
    }
  for (EdgeIndex e : keep_edges) {
    sub.graph.add_edge(vmap[cg.graph.edge(e).tail], vmap[cg.graph.edge(e).head]);
    sub.alpha.values.push_back(values[e]);
  }
  return sub;
}

inline RemovalResult zero_flux_impl(const ChargedGraph& cg, const RemovalOptions& opt) {
  double fl = flux(cg.graph, cg.alpha, cg.boundary);
  double tv = boundary_tv(cg.graph, cg.alpha, cg.boundary);
  if (std::abs(fl) > opt.tol) fail(ErrorKind::HypothesisViolated, "flux " + std::to_string(fl) + " is not zero");
  if (tv > 1 + opt.tol)
    fail(ErrorKind::HypothesisViolated, "boundary total variation " + std::to_string(tv) + " exceeds 1");
  Reduction red = reduce(cg, opt.tol);
  std::vector<OneForm> pieces;
  for (const auto& piece : red.components) pieces.push_back(zero_flux_piece(piece, opt));
  RemovalResult res;
  res.gamma = project(red.trace, pieces, cg.alpha);
  snap_boundary(cg, res.gamma, opt.tol);
  check_domination(res.gamma, cg.alpha, 1.0, opt.tol);
  check_interior_divergence(cg, res.gamma, std::nullopt, 0.0, opt.tol);
  res.cert.flux = fl;
  res.cert.tv = tv;
  res.cert.max_ratio = max_ratio(res.gamma, cg.alpha, opt.tol);
  auto div = divergence(cg.graph, cg.alpha);
  res.cert.positive_charges = interior_charges(cg, 1, div).size();
  bool charged = res.cert.positive_charges > 0 || !interior_charges(cg, -1, div).empty();
  for (EdgeIndex e = 0; e < cg.alpha.size(); ++e)
    if (std::abs(res.gamma[e]) < std::abs(cg.alpha[e]) - opt.tol) {
      res.cert.witness = e;
      break;
    }
  if (tv < 1 - opt.tol && charged && !res.cert.witness)
    fail(ErrorKind::InternalError, "no strict-decrease edge although total variation is below 1");
  return res;
}

// Unit-flux removal on one reduced piece with flux -1; returns the form and the charged vertex.
inline OneForm unit_flux_piece(const ChargedGraph& piece, const RemovalOptions& opt, VertexIndex& x0,
                               std::size_t& depth, std::size_t& positive) {
  OneForm cur = piece.alpha;
  const Graph& g = piece.graph;
  std::vector<VertexIndex> bverts;
  for (VertexIndex v = 0; v < g.num_vertices(); ++v)
    if (piece.boundary[v]) bverts.push_back(v);
  std::mt19937_64 rng(opt.x0_seed.value_or(0));
  positive = interior_charges(piece, 1, divergence(g, cur)).size();
  for (;;) {
    auto vplus = interior_charges(piece, 1, divergence(g, cur));
    if (vplus.empty()) fail(ErrorKind::InternalError, "unit-flux piece without positive charge");
    if (vplus.size() == 1) {
      x0 = vplus.front();
      return cur;
    }
    x0 = vplus.front();
    if (opt.x0_seed) x0 = vplus[std::uniform_int_distribution<std::size_t>(0, vplus.size() - 1)(rng)];
    FlowResult r = max_flow_min_cut(g, abs_capacity(cur), {x0}, bverts, opt.flow);
    ++depth;
    if (r.value >= 1 - opt.tol) return r.flow;

    const auto& inside = r.source_side;
    std::vector<bool> keep(g.num_vertices(), false), newb(g.num_vertices(), false);
    for (VertexIndex v = 0; v < g.num_vertices(); ++v) keep[v] = inside[v];
    for (VertexIndex v : r.cut_sink_endpoints) keep[v] = newb[v] = true;
    std::vector<EdgeIndex> sub_edges;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e)
      if (inside[g.edge(e).tail] || inside[g.edge(e).head]) sub_edges.push_back(e);
    std::vector<VertexIndex> vmap;
    ChargedGraph sub = restrict_to(piece, keep, newb, sub_edges, cur, vmap);
    double sub_tv = boundary_tv(sub.graph, sub.alpha, sub.boundary);
    if (std::abs(sub_tv - r.value) > opt.tol)
      fail(ErrorKind::InternalError, "cut subgraph total variation differs from the flow value");
    RemovalResult z = zero_flux_impl(sub, opt);
    for (std::size_t i = 0; i < sub_edges.size(); ++i) cur[sub_edges[i]] = z.gamma[i];
  }
}

}  // namespace detail

inline RemovalResult remove_dipoles_zero_flux(const ChargedGraph& cg, const RemovalOptions& opt = {}) {
  return detail::zero_flux_impl(cg, opt);
}

inline RemovalResult remove_dipoles_unit_flux(const ChargedGraph& cg, const RemovalOptions& opt = {}) {
  double fl = flux(cg.graph, cg.alpha, cg.boundary);
  double tv = boundary_tv(cg.graph, cg.alpha, cg.boundary);
  if (std::abs(std::abs(fl) - 1) > opt.tol)
    fail(ErrorKind::HypothesisViolated, "flux " + std::to_string(fl) + " is not +1 or -1");
  if (std::abs(tv - 1) > opt.tol)
    fail(ErrorKind::HypothesisViolated, "boundary total variation " + std::to_string(tv) + " is not 1");
  double s = fl > 0 ? -1.0 : 1.0;  // normalize to flux -1
  ChargedGraph norm{cg.graph, cg.boundary, s > 0 ? cg.alpha : -cg.alpha};
  Reduction red = reduce(norm, opt.tol);
  std::vector<OneForm> pieces;
  RemovalResult res;
  std::optional<VertexIndex> x0;
  for (std::size_t k = 0; k < red.components.size(); ++k) {
    const auto& piece = red.components[k];
    double pf = flux(piece.graph, piece.alpha, piece.boundary);
    if (std::abs(pf + 1) <= opt.tol && !x0) {
      VertexIndex local = 0;
      pieces.push_back(detail::unit_flux_piece(piece, opt, local, res.cert.depth, res.cert.positive_charges));
      x0 = red.trace.vertex_origin[k][local];
    } else if (std::abs(pf) <= opt.tol) {
      pieces.push_back(detail::zero_flux_piece(piece, opt));
    } else {
      fail(ErrorKind::InternalError, "reduced piece with flux " + std::to_string(pf));
    }
  }
  if (!x0) fail(ErrorKind::InternalError, "no reduced piece carries the flux");
  OneForm g = project(red.trace, pieces, norm.alpha);
  res.gamma = s > 0 ? g : -g;
  detail::snap_boundary(cg, res.gamma, opt.tol);
  detail::check_domination(res.gamma, cg.alpha, 1.0, opt.tol);
  detail::check_interior_divergence(cg, res.gamma, x0, -std::round(fl), opt.tol);
  res.cert.flux = fl;
  res.cert.tv = tv;
  res.cert.x0 = x0;
  res.cert.max_ratio = max_ratio(res.gamma, cg.alpha, opt.tol);
  return res;
}

// Relaxed removal: unit flux with boundary total variation in (1, 2]; |γ| <= 3|α|.
inline RemovalResult remove_dipoles_relaxed(const ChargedGraph& cg, const RemovalOptions& opt = {}) {
  double fl = flux(cg.graph, cg.alpha, cg.boundary);
  double tv = boundary_tv(cg.graph, cg.alpha, cg.boundary);
  if (std::abs(std::abs(fl) - 1) > opt.tol)
    fail(ErrorKind::HypothesisViolated, "flux " + std::to_string(fl) + " is not +1 or -1");
  if (!(tv > 1 + opt.tol && tv <= 2 + opt.tol))
    fail(ErrorKind::HypothesisViolated, "boundary total variation " + std::to_string(tv) + " is outside (1, 2]");
  double s = fl > 0 ? 1.0 : -1.0;  // normalize to flux +1
  ChargedGraph norm{cg.graph, cg.boundary, s > 0 ? cg.alpha : -cg.alpha};
  Reduction red = reduce(norm, opt.tol);
  std::vector<OneForm> pieces;
  RemovalResult res;
  std::optional<VertexIndex> x0;
  for (std::size_t k = 0; k < red.components.size(); ++k) {
    const auto& piece = red.components[k];
    double pf = flux(piece.graph, piece.alpha, piece.boundary);
    double ptv = boundary_tv(piece.graph, piece.alpha, piece.boundary);
    if (std::abs(pf) <= opt.tol) {
      pieces.push_back(detail::zero_flux_piece(piece, opt));
      continue;
    }
    if (std::abs(pf - 1) > opt.tol || x0) fail(ErrorKind::InternalError, "reduced piece with flux " + std::to_string(pf));
    OneForm phi(piece.graph.num_edges());
    if (ptv > 1 + opt.tol) {
      std::vector<VertexIndex> vplus, vminus;
      for (VertexIndex v = 0; v < piece.graph.num_vertices(); ++v) {
        if (!piece.boundary[v]) continue;
        double out = 0;
        for (const auto& inc : piece.graph.incident(v)) out += piece.alpha.at(inc);
        (out > 0 ? vplus : vminus).push_back(v);
      }
      if (vminus.empty()) fail(ErrorKind::InternalError, "no inflow boundary in a piece with tv > 1");
      FlowResult r = max_flow_min_cut(piece.graph, detail::abs_capacity(piece.alpha), vplus, vminus, opt.flow);
      double xi_minus = (ptv - pf) / 2;
      if (std::abs(r.value - xi_minus) > opt.tol)
        fail(ErrorKind::InternalError, "max flow differs from the inflow boundary mass");
      phi = r.flow;
    }
    ChargedGraph rest{piece.graph, piece.boundary, piece.alpha - phi};
    RemovalResult inner = remove_dipoles_unit_flux(rest, opt);
    res.cert.depth = inner.cert.depth;
    res.cert.positive_charges = inner.cert.positive_charges;
    pieces.push_back(phi + inner.gamma);
    x0 = red.trace.vertex_origin[k][*inner.cert.x0];
  }
  if (!x0) fail(ErrorKind::InternalError, "no reduced piece carries the flux");
  OneForm g = project(red.trace, pieces, norm.alpha);
  res.gamma = s > 0 ? g : -g;
  detail::snap_boundary(cg, res.gamma, opt.tol);
  detail::check_domination(res.gamma, cg.alpha, 3.0, opt.tol);
  detail::check_interior_divergence(cg, res.gamma, x0, -std::round(fl), opt.tol);
  res.cert.flux = fl;
  res.cert.tv = tv;
  res.cert.x0 = x0;
  res.cert.max_ratio = max_ratio(res.gamma, cg.alpha, opt.tol);
  return res;
}

}  // namespace dipole
