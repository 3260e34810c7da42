#include <gtest/gtest.h>

#include <dipole/testkit/generators.hpp>
#include <dipole/testkit/oracles.hpp>

#include "fixtures.hpp"

using namespace dipole;
using namespace fixtures;

namespace {

// u on the unit square in counterclockwise vertex order starting at (0,0)
VertexFunction square_values(const PlanarComplex& c, std::array<double, 4> v) {
  VertexFunction u(4);
  for (VertexId id = 1; id <= 4; ++id) u[c.require_index(id)] = v[id - 1];
  return u;
}

}  // namespace

TEST(Differential, Basics) {
  Graph g(2);
  g.add_edge(0, 1);
  auto du = differential(g, {0, 0.25});
  EXPECT_EQ(du.at(Half{0, true}), 0.25);
  EXPECT_EQ(du.at(Half{0, false}), -0.25);
  auto c = grid(2);
  auto z = differential(c.graph(), VertexFunction(c.num_vertices(), 3.5));
  for (double v : z.values) EXPECT_EQ(v, 0.0);
}

TEST(Curl, CanonicalVortex) {
  auto c = unit_square();
  auto u = square_values(c, {0, 0.25, 0.5, 0.75});
  auto cu = curl(pi_form(differential(c.graph(), u)), c);
  ASSERT_EQ(cu.size(), 1u);
  EXPECT_EQ(cu[0], 1.0);
  EXPECT_EQ(curl(differential(c.graph(), u), c)[0], 0.0);
}

TEST(Curl, EdgeInsideFaceCancels) {
  // the pendant of a square is not inside a bounded face; build one that is
  auto c = build_complex({{1, 0, 0}, {2, 4, 0}, {3, 4, 4}, {4, 0, 4}, {5, 2, 2}}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 5}});
  ASSERT_EQ(c.num_faces(), 1u);
  OneForm a(c.num_edges());
  a[*c.find_edge(c.require_index(1), c.require_index(5))] = 0.37;
  EXPECT_EQ(curl(a, c)[0], 0.0);
  EXPECT_EQ(c.face(0).size(), 6u);
}

TEST(Curl, DifferentialIsCurlFree) {
  testkit::Rng rng(3);
  for (int it = 0; it < 1000; ++it) {
    auto c = testkit::random_admissible_complex(rng, 12);
    VertexFunction u(c.num_vertices());
    for (auto& x : u) x = testkit::uniform(rng, -3, 3);
    for (double v : curl(differential(c.graph(), u), c)) EXPECT_NEAR(v, 0.0, 1e-12);
  }
}

TEST(Curl, ProjectedDifferentialIsIntegral) {
  testkit::Rng rng(4);
  for (int it = 0; it < 300; ++it) {
    auto c = testkit::random_admissible_complex(rng);
    VertexFunction u(c.num_vertices());
    for (auto& x : u) x = testkit::uniform(rng, -3, 3);
    for (double v : curl(pi_form(differential(c.graph(), u)), c)) EXPECT_TRUE(near_integer(v, 1e-12)) << v;
  }
  auto g = grid(5);
  for (int it = 0; it < 300; ++it) {
    VertexFunction u(g.num_vertices());
    for (auto& x : u) x = testkit::uniform(rng, 0, 1);
    for (double v : curl(pi_form(differential(g.graph(), u)), g)) {
      EXPECT_TRUE(near_integer(v, 1e-12)) << v;
      EXPECT_LE(std::abs(v), 1.0 + 1e-12);
    }
  }
}

TEST(Divergence, ChainExample) {
  auto cg = chain({0.6, -0.4}, {true, false, true});
  auto d = divergence(cg.graph, cg.alpha);
  EXPECT_DOUBLE_EQ(d[1], -1.0);
  for (double v : divergence(cg.graph, OneForm(2))) EXPECT_EQ(v, 0.0);
}

TEST(Divergence, PathFlowIsConserved) {
  auto cg = chain({0.3, 0.3, 0.3, 0.3}, {true, false, false, false, true});
  auto d = divergence(cg.graph, cg.alpha);
  EXPECT_EQ(d[1], 0.0);
  EXPECT_EQ(d[2], 0.0);
  EXPECT_EQ(d[3], 0.0);
  EXPECT_EQ(d[0], 0.3);
  EXPECT_EQ(d[4], -0.3);
}

TEST(Flux, SharpnessExamples) {
  for (double eps : {0.1, 0.05}) {
    auto e1 = testkit::sharpness_example(1, eps);
    EXPECT_NEAR(flux(e1.graph, e1.alpha, e1.boundary), 0, 1e-15);
    EXPECT_NEAR(boundary_tv(e1.graph, e1.alpha, e1.boundary), 1 + 2 * eps, 1e-15);
    auto e2 = testkit::sharpness_example(2, eps);
    EXPECT_NEAR(flux(e2.graph, e2.alpha, e2.boundary), 1, 1e-15);
    EXPECT_NEAR(boundary_tv(e2.graph, e2.alpha, e2.boundary), 1 + 4 * eps, 1e-15);
  }
  auto e3 = testkit::sharpness_example(3, 0.1);
  EXPECT_NEAR(flux(e3.graph, e3.alpha, e3.boundary), 2, 1e-15);
  EXPECT_NEAR(boundary_tv(e3.graph, e3.alpha, e3.boundary), 2, 1e-15);
}

TEST(Flux, DivergenceTheorem) {
  testkit::Rng rng(5);
  for (int it = 0; it < 500; ++it) {
    std::size_t n = 2 + testkit::pick(rng, 10);
    Graph g(n);
    for (std::size_t i = 0, m = testkit::pick(rng, 25); i < m; ++i) g.add_edge(testkit::pick(rng, n), testkit::pick(rng, n));
    OneForm a(g.num_edges());
    for (auto& v : a.values) v = testkit::uniform(rng, -1, 1);
    std::vector<bool> bnd(n);
    for (std::size_t v = 0; v < n; ++v) bnd[v] = testkit::uniform(rng, 0, 1) < 0.4;
    auto d = divergence(g, a);
    std::vector<double> inner;
    for (std::size_t v = 0; v < n; ++v)
      if (!bnd[v]) inner.push_back(d[v]);
    EXPECT_NEAR(exact_sum(inner), -flux(g, a, bnd), 1e-12);
  }
}

TEST(Hypotheses, ConstantDatum) {
  auto c = grid(3);
  auto h = check_hypotheses(VertexFunction(c.num_vertices(), 0.2), c);
  EXPECT_TRUE(h.h0_ok);
  EXPECT_FALSE(h.exceptional.has_value());
  EXPECT_TRUE(h.h1_ok);
  EXPECT_TRUE(h.h1_strict);
  EXPECT_FALSE(h.h2_ok);
  EXPECT_EQ(h.boundary_tv, 0.0);
}

TEST(Hypotheses, WindingDatumHasOneException) {
  auto c = unit_square();
  auto h = check_hypotheses(square_values(c, {0, 0.25, 0.5, 0.75}), c);
  EXPECT_TRUE(h.h0_ok);
  ASSERT_TRUE(h.exceptional.has_value());
  EXPECT_EQ(c.id(c.graph().tail(*h.exceptional)), 4);
  EXPECT_EQ(c.id(c.graph().head(*h.exceptional)), 1);
  EXPECT_EQ(h.boundary_sum, 1.0);
  EXPECT_EQ(h.boundary_tv, 1.0);
  EXPECT_TRUE(h.h2_ok);
  EXPECT_FALSE(h.h1_ok);
}

TEST(Hypotheses, TwoExceptionsFailH0) {
  auto c = unit_square();
  auto h = check_hypotheses(square_values(c, {0, 0.7, 0, 0.7}), c);
  EXPECT_FALSE(h.h0_ok);
  EXPECT_EQ(h.exception_count, 4u);
  auto h2 = check_hypotheses(square_values(c, {0, 0.7, 0.7, 0}), c);
  EXPECT_FALSE(h2.h0_ok);
  EXPECT_EQ(h2.exception_count, 2u);
}
