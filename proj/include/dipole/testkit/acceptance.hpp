#pragma once

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "../lattice.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace dipole::testkit {

struct CriterionResult {
  int id;
  std::string name;
  bool passed = true;
  std::string detail;
  double seconds = 0;
};

namespace detail {

struct Check {
  CriterionResult& r;
  std::size_t failures = 0;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) r.detail = what;
    r.passed = false;
  }
};

template <class F>
CriterionResult run_criterion(int id, const std::string& name, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  Check c{r};
  try {
    body(c);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.failures > 1) r.detail += " (+" + std::to_string(c.failures - 1) + " more)";
  return r;
}

inline std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}


}  // namespace detail

inline CriterionResult criterion_projection(std::uint64_t seed) {
  return detail::run_criterion(1, "pi projection exactness", [&](detail::Check& c) {
    Rng rng(seed);
    for (int i = 0; i < 100000; ++i) {
      double scale = std::pow(10.0, uniform(rng, -3, 6));
      double y = uniform(rng, -scale, scale);
      double p = project_pi(y);
      double dist = std::min(y - std::floor(y), std::ceil(y) - y);
      c.expect(std::abs(p) == dist, "|pi(y)| != dist(y,Z) at y=" + detail::num(y));
      c.expect(std::floor(y - p) == y - p, "y - pi(y) not an integer at y=" + detail::num(y));
      c.expect(project_pi(-y) == -p, "pi is not odd at y=" + detail::num(y));
    }
    for (long k = 0; k <= 1000; ++k) {
      double t = k + 0.5;
      c.expect(project_pi(t) == 0.5 && project_pi(-t) == -0.5, "tie rule broken at " + detail::num(t));
    }
  });
}

inline CriterionResult criterion_duality(std::uint64_t seed) {
  return detail::run_criterion(2, "duality curl = div on the dual", [&](detail::Check& c) {
    Rng rng(seed);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      auto cx = random_admissible_complex(rng, 30);
      auto d = dualize(cx);
      OneForm a(cx.num_edges());
      for (auto& v : a.values) v = uniform(rng, -1, 1);
      auto cu = curl(a, cx);
      auto dv = divergence(d.graph, push_form(a));
      for (std::size_t f = 0; f < cx.num_faces(); ++f) worst = std::max(worst, std::abs(cu[f] - dv[f]));
      c.expect(pull_form(push_form(a)).values == a.values, "pull after push is not the identity");
    }
    c.expect(worst <= 1e-12, "max error " + detail::num(worst));
    if (c.r.passed) c.r.detail = "max |curl - div| = " + detail::num(worst);
  });
}

inline CriterionResult criterion_mfmc(std::uint64_t seed) {
  return detail::run_criterion(3, "max-flow min-cut strong duality", [&](detail::Check& c) {
    Rng rng(seed);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      auto fi = random_flow_instance(rng);
      if (!fi.graph.connected()) continue;
      auto r = max_flow_min_cut(fi.graph, fi.cap, fi.V1, fi.V2);
      double brute = brute_min_cut(fi.graph, fi.cap, fi.V1, fi.V2);
      worst = std::max(worst, std::abs(r.value - brute));
      c.expect(std::abs(r.value - brute) <= 1e-9, "engine " + detail::num(r.value) + " vs brute " + detail::num(brute));
      c.expect(std::abs(r.value - r.cut_capacity) <= 1e-12, "T(flow) != c(cut)");
      for (Half h : r.oriented_cut)
        c.expect(std::abs(r.flow.at(h) - fi.cap[h.edge]) <= 1e-12, "cut edge not saturated");
      auto dv = divergence(fi.graph, r.flow);
      std::vector<double> into;
      for (VertexIndex v : fi.V2) into.push_back(-dv[v]);
      c.expect(std::abs(exact_sum(into) - r.value) <= 1e-12, "sink inflow != flow value");
    }
    if (c.r.passed) c.r.detail = "max |engine - brute| = " + detail::num(worst);
  });
}

inline CriterionResult criterion_zero_flux(std::uint64_t seed) {
  return detail::run_criterion(4, "zero-flux removal contract", [&](detail::Check& c) {
    Rng rng(seed);
    std::size_t strict = 0;
    for (int i = 0; i < 500; ++i) {
      auto cg = zero_flux_instance(rng);
      auto r = remove_dipoles_zero_flux(cg);
      const Graph& g = cg.graph;
      auto dv = divergence(g, r.gamma);
      for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
        c.expect(std::abs(r.gamma[e]) <= std::abs(cg.alpha[e]) + 1e-9, "|gamma| > |alpha|");
        if (cg.boundary[g.edge(e).tail] || cg.boundary[g.edge(e).head])
          c.expect(r.gamma[e] == cg.alpha[e], "boundary edge changed");
      }
      for (VertexIndex v = 0; v < g.num_vertices(); ++v)
        if (!cg.boundary[v]) c.expect(std::abs(dv[v]) <= 1e-9, "interior divergence left");
      auto da = divergence(g, cg.alpha);
      bool charged = false;
      for (VertexIndex v = 0; v < g.num_vertices(); ++v)
        if (!cg.boundary[v] && std::lround(da[v]) != 0) charged = true;
      if (r.cert.tv < 1 - 1e-9 && charged) {
        ++strict;
        c.expect(r.cert.witness.has_value(), "no witness edge");
        if (r.cert.witness)
          c.expect(std::abs(r.gamma[*r.cert.witness]) < std::abs(cg.alpha[*r.cert.witness]) - 1e-9, "bad witness");
      }
    }
    if (c.r.passed) c.r.detail = "500 instances, " + std::to_string(strict) + " with a required witness";
  });
}

inline CriterionResult criterion_unit_flux(std::uint64_t seed) {
  return detail::run_criterion(5, "unit-flux removal contract", [&](detail::Check& c) {
    Rng rng(seed);
    std::size_t deepest = 0;
    for (int i = 0; i < 500; ++i) {
      auto cg = unit_flux_instance(rng);
      RemovalOptions opt;
      if (i % 2) opt.x0_seed = seed + i;
      auto r = remove_dipoles_unit_flux(cg, opt);
      const Graph& g = cg.graph;
      double fl = flux(g, cg.alpha, cg.boundary);
      auto dv = divergence(g, r.gamma);
      std::size_t charges = 0;
      for (VertexIndex v = 0; v < g.num_vertices(); ++v) {
        if (cg.boundary[v] || std::abs(dv[v]) <= 1e-9) continue;
        ++charges;
        c.expect(r.cert.x0 && *r.cert.x0 == v, "charge away from x0");
        c.expect(std::abs(dv[v] + std::round(fl)) <= 1e-9, "div(gamma)(x0) != -flux");
      }
      c.expect(charges == 1, "expected exactly one interior charge, found " + std::to_string(charges));
      for (EdgeIndex e = 0; e < g.num_edges(); ++e)
        c.expect(std::abs(r.gamma[e]) <= std::abs(cg.alpha[e]) + 1e-9, "|gamma| > |alpha|");
      c.expect(r.cert.depth <= r.cert.positive_charges, "recursion depth exceeds positive charge count");
      deepest = std::max(deepest, r.cert.depth);
    }
    if (c.r.passed) c.r.detail = "500 instances, max recursion depth " + std::to_string(deepest);
  });
}

inline CriterionResult criterion_sharpness() {
  return detail::run_criterion(6, "sharpness examples", [&](detail::Check& c) {
    for (double eps : {0.05, 0.1}) {
      for (int ex = 1; ex <= 3; ++ex) {
        auto cg = sharpness_example(ex, eps);
        double fl = flux(cg.graph, cg.alpha, cg.boundary);
        double tv = boundary_tv(cg.graph, cg.alpha, cg.boundary);
        double want_fl = ex == 1 ? 0 : (ex == 2 ? 1 : 2);
        double want_tv = ex == 1 ? 1 + 2 * eps : (ex == 2 ? 1 + 4 * eps : 2);
        std::string tag = "example " + std::to_string(ex) + " eps " + detail::num(eps);
        c.expect(std::abs(fl - want_fl) <= 1e-12 && std::abs(tv - want_tv) <= 1e-12,
                 tag + ": flux/tv " + detail::num(fl) + "/" + detail::num(tv));
        bool violated = false;
        try {
          if (ex == 1) remove_dipoles_zero_flux(cg);
          else remove_dipoles_unit_flux(cg);
        } catch (const Error& e) {
          violated = e.kind() == ErrorKind::HypothesisViolated;
        }
        c.expect(violated, tag + ": engine did not report HypothesisViolated");
        auto forced = forced_form(cg);
        c.expect(forced.status == Forced::Unique, tag + ": competitor not unique");
        if (forced.status == Forced::Unique)
          for (EdgeIndex e = 0; e < cg.alpha.size(); ++e)
            c.expect(std::abs(forced.solutions[0][e] - cg.alpha[e]) <= 1e-12, tag + ": forced form differs from alpha");
      }
    }
  });
}

inline CriterionResult criterion_relaxed() {
  return detail::run_criterion(7, "relaxed removal constant", [&](detail::Check& c) {
    std::ostringstream out;
    for (auto [eps, want] : {std::pair{0.25, 3.0}, std::pair{0.1, 1.5}}) {
      auto cg = sharpness_example(2, eps);
      auto r = remove_dipoles_relaxed(cg);
      c.expect(std::abs(r.cert.max_ratio - want) <= 1e-9,
               "eps " + detail::num(eps) + ": ratio " + detail::num(r.cert.max_ratio));
      out << "eps " << eps << " ratio " << r.cert.max_ratio << "; ";
    }
    if (c.r.passed) c.r.detail = out.str();
  });
}

inline CriterionResult criterion_round_trip(std::uint64_t seed) {
  return detail::run_criterion(8, "reconstruction round trip", [&](detail::Check& c) {
    Rng rng(seed);
    double worst = 0;
    std::size_t unit = 0;
    for (int i = 0; i < 100; ++i) {
      auto pi = random_pipeline_instance(rng);
      auto r = run_pipeline(pi.complex, pi.u);
      unit += pi.unit;
      OneForm after = pi_form(differential(pi.complex.graph(), r.u));
      for (EdgeIndex e = 0; e < after.size(); ++e) worst = std::max(worst, std::abs(after[e] - r.report.corrected[e]));
      BoundaryComplex b = boundary_complex(pi.complex);
      for (VertexIndex v : b.vertices) c.expect(r.u[v] == pi.u[v], "boundary value changed");
    }
    c.expect(worst <= 1e-12, "max |pi(du~) - corrected| = " + detail::num(worst));
    if (c.r.passed)
      c.r.detail = "100 runs (" + std::to_string(unit) + " unit flux), max error " + detail::num(worst);
  });
}

inline CriterionResult criterion_one_vortex(std::uint64_t seed) {
  return detail::run_criterion(9, "one vortex on the square", [&](detail::Check& c) {
    Rng rng(seed);
    std::ostringstream out;
    for (double eps : {0.25, 0.125, 0.0625}) {
      auto L = discretize(square_domain(1.0), eps);
      auto u = star_boundary([](double t) { return t; }, L);
      double s = boundary_variation(u, L.complex, star_cycle(L));
      c.expect(s == 1.0, "boundary sum " + detail::num(s) + " at eps " + detail::num(eps));
      BoundaryComplex b = boundary_complex(L.complex);
      for (VertexIndex v = 0; v < u.size(); ++v)
        if (!b.is_boundary[v]) u[v] = uniform(rng, 0, 1);
      u = relax(u, L, sd_profile(), 2);
      auto before = vorticity(u, L);
      auto r = run_pipeline(L.complex, u);
      auto vm = vorticity(r.u, L);
      c.expect(vm.total == 1 && vm.charges.size() == 1 && vm.charges[0].charge == 1,
               "output vorticity is not a single +1 at eps " + detail::num(eps));
      for (const auto& p : {sd_profile(), xy_profile()})
        c.expect(energy(r.u, L.complex, p) <= energy(u, L.complex, p) + 1e-9, p.name + " energy increased");
      out << "eps " << eps << ": " << before.charges.size() << " -> " << vm.charges.size() << " charges; ";
    }
    if (c.r.passed) c.r.detail = out.str();
  });
}

// 2x2 cells; boundary zero except 1/2 at the top middle vertex.
struct PlaquetteCase {
  LatticeDomain L;
  VertexIndex center, top;
};

inline PlaquetteCase plaquette_lattice() {
  PlaquetteCase f{lattice_from_cells({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 1.0), 0, 0};
  for (VertexIndex v = 0; v < f.L.nodes.size(); ++v) {
    if (f.L.nodes[v] == LatticeNode{1, 1}) f.center = v;
    if (f.L.nodes[v] == LatticeNode{1, 2}) f.top = v;
  }
  return f;
}

inline VertexFunction plaquette_state(const PlaquetteCase& f, double center) {
  VertexFunction u(f.L.nodes.size(), 0.0);
  u[f.top] = 0.5;
  u[f.center] = center;
  return u;
}

inline CriterionResult criterion_plaquette() {
  return detail::run_criterion(10, "dipole removal on the 2x2 lattice", [&](detail::Check& c) {
    auto f = plaquette_lattice();
    auto dipole = plaquette_state(f, -0.125);
    auto clean = plaquette_state(f, 0.125);
    auto h = check_hypotheses(dipole, f.L.complex);
    c.expect(h.h0_ok && h.h1_ok, "boundary class is not (H0)+(H1)");
    auto vd = vorticity(dipole, f.L);
    c.expect(vd.charges.size() == 2 && vd.total == 0, "seeded state is not a dipole");
    auto r = run_pipeline(f.L.complex, dipole);
    c.expect(vorticity(r.u, f.L).charges.empty(), "output still has charges");
    for (const auto& p : {sd_profile(), xy_profile()})
      c.expect(energy(r.u, f.L.complex, p) <= energy(dipole, f.L.complex, p) + 1e-9, p.name + " energy increased");
    // both states are minima for SD and share the same energy
    auto sd = sd_profile();
    auto rd = relax(dipole, f.L, sd, 5), rc = relax(clean, f.L, sd, 5);
    c.expect(std::abs(energy(rd, f.L.complex, sd) - energy(dipole, f.L.complex, sd)) <= 1e-9, "dipole state is not SD-minimal");
    c.expect(std::abs(energy(rc, f.L.complex, sd) - energy(clean, f.L.complex, sd)) <= 1e-9, "clean state is not SD-minimal");
    c.expect(std::abs(energy(dipole, f.L.complex, sd) - energy(clean, f.L.complex, sd)) <= 1e-9, "minima energies differ");
    if (c.r.passed)
      c.r.detail = "SD energy " + detail::num(energy(dipole, f.L.complex, sd)) + " for both minima; output center " +
                   detail::num(r.u[f.center]);
  });
}

inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 20240501) {
  return {criterion_projection(seed),   criterion_duality(seed + 1),   criterion_mfmc(seed + 2),
          criterion_zero_flux(seed + 3), criterion_unit_flux(seed + 4), criterion_sharpness(),
          criterion_relaxed(),          criterion_round_trip(seed + 5), criterion_one_vortex(seed + 6),
          criterion_plaquette()};
}

}  // namespace dipole::testkit
