#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dual.hpp"
#include "reconstruct.hpp"
#include "removal.hpp"

namespace dipole {

struct PipelineOptions {
  RemovalOptions removal;
  double tol = kTol;
};

struct PipelineReport {
  HypothesisReport hypotheses;
  std::string theorem;  // "zero-flux" or "unit-flux"
  double dual_flux = 0;
  double dual_tv = 0;
  RemovalCertificate certificate;
  std::optional<std::size_t> singular_face;
  long singular_charge = 0;
  double max_edge_ratio = 0;
  std::optional<EdgeIndex> strict_edge;  // primal edge where |π(dũ)| < |π(du)|
  FaceCharge curl_before;
  FaceCharge curl_after;
  OneForm alpha;      // π∘du
  OneForm corrected;  // pulled-back γ
  ReconstructInfo reconstruct;
};

struct PipelineResult {
  VertexFunction u;
  PipelineReport report;
};

inline PipelineResult run_pipeline(const PlanarComplex& c, const VertexFunction& u, const PipelineOptions& opt = {}) {
  if (u.size() != c.num_vertices()) fail(ErrorKind::MalformedInput, "vertex function size mismatch");
  if (!is_admissible(c)) fail(ErrorKind::NotAdmissible, "complex is not admissible");
  PipelineResult out;
  auto& rep = out.report;
  rep.hypotheses = check_hypotheses(u, c, opt.tol);
  const auto& h = rep.hypotheses;
  if (!h.h0_ok)
    fail(ErrorKind::HypothesisViolated,
         "h0: " + std::to_string(h.exception_count) + " boundary edges have pi(du) != du");
  if (!h.h1_ok && !h.h2_ok)
    fail(ErrorKind::HypothesisViolated, "h1/h2: boundary sum " + std::to_string(h.boundary_sum) +
                                            ", boundary total variation " + std::to_string(h.boundary_tv));
  const Graph& g = c.graph();
  rep.alpha = pi_form(differential(g, u));
  rep.curl_before = curl(rep.alpha, c);
  DualGraph d = dualize(c);
  ChargedGraph cg{d.graph, d.is_boundary, push_form(rep.alpha)};
  rep.dual_flux = flux(cg.graph, cg.alpha, cg.boundary);
  rep.dual_tv = boundary_tv(cg.graph, cg.alpha, cg.boundary);
  RemovalResult rr;
  if (h.h1_ok) {
    rep.theorem = "zero-flux";
    rr = remove_dipoles_zero_flux(cg, opt.removal);
  } else {
    rep.theorem = "unit-flux";
    rr = remove_dipoles_unit_flux(cg, opt.removal);
    if (!rr.cert.x0 || *rr.cert.x0 >= d.num_faces)
      fail(ErrorKind::InternalError, "singular dual vertex is not a face");
    rep.singular_face = *rr.cert.x0;
  }
  rep.certificate = rr.cert;
  rep.corrected = pull_form(rr.gamma);
  std::optional<EdgeIndex> e0;
  if (h.exceptional) e0 = h.exceptional->edge;
  out.u = reconstruct_with_singularity(c, u, rep.corrected, rep.singular_face, e0, opt.tol, &rep.reconstruct);
  rep.singular_charge = rep.reconstruct.charge;

  OneForm after = pi_form(differential(g, out.u));
  rep.curl_after = curl(after, c);
  for (std::size_t f = 0; f < rep.curl_after.size(); ++f) {
    double want = (rep.singular_face && *rep.singular_face == f) ? std::round(h.boundary_sum) : 0.0;
    if (std::abs(rep.curl_after[f] - want) > opt.tol)
      fail(ErrorKind::InternalError, "output curl " + std::to_string(rep.curl_after[f]) + " at face " +
                                         std::to_string(f));
  }
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    double a = std::abs(rep.alpha[e]), b = std::abs(after[e]);
    if (a > opt.tol) rep.max_edge_ratio = std::max(rep.max_edge_ratio, b / a);
    else if (b > opt.tol) fail(ErrorKind::InternalError, "output grew on an edge with pi(du) = 0");
    if (!rep.strict_edge && b < a - opt.tol) rep.strict_edge = e;
  }
  if (rep.max_edge_ratio > 1 + opt.tol)
    fail(ErrorKind::InternalError, "edgewise ratio " + std::to_string(rep.max_edge_ratio) + " exceeds 1");
  return out;
}

}  // namespace dipole
