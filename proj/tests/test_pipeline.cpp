#include <gtest/gtest.h>

#include <dipole/testkit/generators.hpp>

#include "fixtures.hpp"

using namespace dipole;
using namespace fixtures;

namespace {

std::vector<EnergyProfile> random_profiles(testkit::Rng& rng, int n) {
  std::vector<EnergyProfile> out{sd_profile(), xy_profile()};
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<double, double>> s{{0, 0}};
    double f = 0;
    for (int i = 1; i <= 8; ++i) {
      f += testkit::uniform(rng, 0, 1);
      s.push_back({0.5 * i / 8, f});
    }
    out.push_back(piecewise_profile("random" + std::to_string(k), s));
  }
  return out;
}

void fill_interior(testkit::Rng& rng, const PlanarComplex& c, VertexFunction& u) {
  BoundaryComplex b = boundary_complex(c);
  for (VertexIndex v = 0; v < u.size(); ++v)
    if (!b.is_boundary[v]) u[v] = testkit::uniform(rng, 0, 1);
}

}  // namespace

TEST(Pipeline, StarDatumGivesOneVortex) {
  testkit::Rng rng(71);
  auto L = discretize(square_domain(1.0), 0.125);
  auto u = star_boundary([](double t) { return t; }, L);
  fill_interior(rng, L.complex, u);
  u = relax(u, L, sd_profile(), 3);
  auto r = run_pipeline(L.complex, u);
  EXPECT_EQ(r.report.theorem, "unit-flux");
  auto m = vorticity(r.u, L);
  ASSERT_EQ(m.charges.size(), 1u);
  EXPECT_EQ(m.total, 1);
  ASSERT_TRUE(r.report.singular_face.has_value());
  EXPECT_EQ(r.report.curl_after[*r.report.singular_face], 1.0);
  EXPECT_LE(r.report.max_edge_ratio, 1 + 1e-12);
}

TEST(Pipeline, SeededDipoleIsRemovedWithStrictDecrease) {
  auto L = discretize(square_domain(1.0), 0.25);
  auto u = lift_boundary(
      BoundaryField{"wave", [](const Point& p) { return 0.05 * std::sin(4 * turn_angle(p)); }}, L);
  // a +/- pair in the interior: two small windings of opposite sign
  std::map<LatticeNode, VertexIndex> at;
  for (VertexIndex v = 0; v < L.nodes.size(); ++v) at[L.nodes[v]] = v;
  BoundaryComplex b = boundary_complex(L.complex);
  for (VertexIndex v = 0; v < u.size(); ++v)
    if (!b.is_boundary[v]) u[v] = 0;
  u[at[{-2, 0}]] = 0.0, u[at[{-1, 0}]] = 0.3, u[at[{-1, 1}]] = 0.6, u[at[{-2, 1}]] = 0.9;
  u[at[{1, 0}]] = 0.0, u[at[{2, 0}]] = -0.3, u[at[{2, 1}]] = -0.6, u[at[{1, 1}]] = -0.9;
  auto before = vorticity(u, L);
  ASSERT_GE(before.charges.size(), 2u);
  ASSERT_EQ(before.total, 0);
  auto h = check_hypotheses(u, L.complex);
  ASSERT_TRUE(h.h1_strict);
  auto r = run_pipeline(L.complex, u);
  EXPECT_EQ(r.report.theorem, "zero-flux");
  EXPECT_TRUE(vorticity(r.u, L).charges.empty());
  ASSERT_TRUE(r.report.strict_edge.has_value());
  for (const auto& p : {sd_profile(), xy_profile()})
    EXPECT_LT(energy(r.u, L.complex, p), energy(u, L.complex, p));
}

TEST(Pipeline, ConstantInputIsFixed) {
  auto c = grid(3);
  VertexFunction u(c.num_vertices(), 0.25);
  auto r = run_pipeline(c, u);
  EXPECT_EQ(r.u, u);
  EXPECT_FALSE(r.report.strict_edge.has_value());
}

TEST(Pipeline, HypothesisFailuresAreNamed) {
  auto c = unit_square();
  VertexFunction two(4, 0.0);
  two[c.require_index(2)] = 0.7;
  two[c.require_index(3)] = 0.7;
  try {
    run_pipeline(c, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
    EXPECT_NE(e.detail().find("h0"), std::string::npos);
  }
  // boundary sum 0 but total variation 1.2
  VertexFunction big(4, 0.0);
  big[c.require_index(2)] = 0.3;
  big[c.require_index(4)] = 0.3;
  try {
    run_pipeline(c, big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
    EXPECT_NE(e.detail().find("h1/h2"), std::string::npos);
  }
  EXPECT_KIND(run_pipeline(square_with_pendant(), VertexFunction(5, 0.0)), ErrorKind::NotAdmissible);
  EXPECT_KIND(run_pipeline(c, VertexFunction(3, 0.0)), ErrorKind::MalformedInput);
}

TEST(Pipeline, EnergyMonotoneForEveryProfile) {
  testkit::Rng rng(72);
  auto profiles = random_profiles(rng, 20);
  for (int it = 0; it < 60; ++it) {
    auto pi = testkit::random_pipeline_instance(rng);
    auto r = run_pipeline(pi.complex, pi.u);
    auto before = pi_form(differential(pi.complex.graph(), pi.u));
    auto after = pi_form(differential(pi.complex.graph(), r.u));
    for (EdgeIndex e = 0; e < before.size(); ++e) EXPECT_LE(std::abs(after[e]), std::abs(before[e]) + 1e-12);
    for (const auto& p : profiles) EXPECT_LE(energy(r.u, pi.complex, p), energy(pi.u, pi.complex, p) + 1e-12) << p.name;
    // promised measure
    auto cu = curl(after, pi.complex);
    for (std::size_t f = 0; f < cu.size(); ++f) {
      double want = (r.report.singular_face && *r.report.singular_face == f) ? std::round(r.report.hypotheses.boundary_sum) : 0;
      EXPECT_NEAR(cu[f], want, 1e-9);
    }
  }
}

TEST(Pipeline, IdempotentOnItsOutput) {
  testkit::Rng rng(73);
  for (int it = 0; it < 40; ++it) {
    auto pi = testkit::random_pipeline_instance(rng);
    auto once = run_pipeline(pi.complex, pi.u);
    auto twice = run_pipeline(pi.complex, once.u);
    auto c1 = curl(pi_form(differential(pi.complex.graph(), once.u)), pi.complex);
    auto c2 = curl(pi_form(differential(pi.complex.graph(), twice.u)), pi.complex);
    for (std::size_t f = 0; f < c1.size(); ++f) EXPECT_NEAR(c1[f], c2[f], 1e-9);
    for (const auto& p : {sd_profile(), xy_profile()})
      EXPECT_LE(energy(twice.u, pi.complex, p), energy(once.u, pi.complex, p) + 1e-12);
  }
}
