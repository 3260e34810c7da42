#pragma once

#include <optional>
#include <vector>

#include "complex.hpp"

namespace dipole {

using FaceCharge = std::vector<double>;

inline FaceCharge curl(const OneForm& a, const PlanarComplex& c) {
  FaceCharge out(c.num_faces(), 0.0);
  std::vector<double> terms;
  for (std::size_t f = 0; f < c.num_faces(); ++f) {
    terms.clear();
    for (Half h : c.face(f)) terms.push_back(a.at(h));
    out[f] = exact_sum(terms);
  }
  return out;
}

inline double cycle_sum(const OneForm& a, const Cycle& cyc) {
  std::vector<double> terms;
  for (Half h : cyc) terms.push_back(a.at(h));
  return exact_sum(terms);
}

struct HypothesisReport {
  bool h0_ok = false;
  std::optional<Half> exceptional;  // e0, oriented as in E∂
  std::size_t exception_count = 0;
  double boundary_sum = 0;
  double boundary_tv = 0;
  bool h1_ok = false;
  bool h1_strict = false;
  bool h2_ok = false;
};

inline HypothesisReport check_hypotheses(const VertexFunction& u, const PlanarComplex& c, double tol = kTol) {
  HypothesisReport r;
  BoundaryComplex b = boundary_complex(c);
  OneForm du = differential(c.graph(), u);
  std::vector<double> sum_terms, tv_terms;
  for (Half h : b.edges) {
    double d = du.at(h);
    double p = project_pi(d);
    if (std::abs(p - d) > tol) {
      ++r.exception_count;
      if (!r.exceptional) r.exceptional = h;
    }
    sum_terms.push_back(p);
    tv_terms.push_back(std::abs(p));
  }
  r.h0_ok = r.exception_count <= 1;
  r.boundary_sum = exact_sum(sum_terms);
  r.boundary_tv = exact_sum(tv_terms);
  r.h1_ok = std::abs(r.boundary_sum) <= tol && r.boundary_tv <= 1 + tol;
  r.h1_strict = r.h1_ok && r.boundary_tv < 1 - tol;
  r.h2_ok = std::abs(std::abs(r.boundary_sum) - 1) <= tol && std::abs(r.boundary_tv - 1) <= tol;
  return r;
}

}  // namespace dipole
