#include <gtest/gtest.h>

#include <dipole/testkit/generators.hpp>
#include <dipole/testkit/oracles.hpp>

#include "fixtures.hpp"

using namespace dipole;
using namespace fixtures;

namespace {

bool touches_boundary(const ChargedGraph& cg, EdgeIndex e) {
  return cg.boundary[cg.graph.edge(e).tail] || cg.boundary[cg.graph.edge(e).head];
}

void expect_contract(const ChargedGraph& cg, const RemovalResult& r, double factor, std::optional<VertexIndex> x0) {
  auto div = divergence(cg.graph, r.gamma);
  double fl = flux(cg.graph, cg.alpha, cg.boundary);
  for (EdgeIndex e = 0; e < cg.alpha.size(); ++e) {
    EXPECT_LE(std::abs(r.gamma[e]), factor * std::abs(cg.alpha[e]) + 1e-9) << "edge " << e;
    if (touches_boundary(cg, e)) {
      EXPECT_EQ(r.gamma[e], cg.alpha[e]) << "edge " << e;
    }
  }
  for (VertexIndex v = 0; v < cg.graph.num_vertices(); ++v) {
    if (cg.boundary[v]) continue;
    double want = (x0 && *x0 == v) ? -fl : 0.0;
    EXPECT_NEAR(div[v], want, 1e-9) << "vertex " << v;
  }
}

}  // namespace

TEST(Reduce, AlreadyReducedIsIdentity) {
  auto cg = chain({0.6, -0.4}, {true, false, true});
  auto red = reduce(cg);
  ASSERT_EQ(red.components.size(), 1u);
  EXPECT_EQ(red.trace.stats.boundary_splits, 0u);
  EXPECT_EQ(red.trace.stats.interior_splits, 0u);
  EXPECT_EQ(red.components[0].alpha.values, cg.alpha.values);
  EXPECT_EQ(project(red.trace, {red.components[0].alpha}, cg.alpha).values, cg.alpha.values);
}

TEST(Reduce, MixedBoundaryVertexIsSplit) {
  // cycle s -> A -> B -> s through a single boundary vertex
  ChargedGraph cg{Graph(3), {true, false, false}, OneForm(std::vector<double>{0.3, 0.3, 0.3})};
  cg.graph.add_edge(0, 1);
  cg.graph.add_edge(1, 2);
  cg.graph.add_edge(2, 0);
  auto red = reduce(cg);
  EXPECT_EQ(red.trace.stats.boundary_splits, 1u);
  ASSERT_EQ(red.components.size(), 1u);
  const auto& p = red.components[0];
  EXPECT_EQ(p.graph.num_vertices(), 4u);
  std::size_t nb = 0;
  for (VertexIndex v = 0; v < p.graph.num_vertices(); ++v) {
    if (!p.boundary[v]) continue;
    ++nb;
    ASSERT_EQ(p.graph.incident(v).size(), 1u);  // sign-pure copies
  }
  EXPECT_EQ(nb, 2u);
  EXPECT_NEAR(flux(p.graph, p.alpha, p.boundary), flux(cg.graph, cg.alpha, cg.boundary), 1e-15);
  EXPECT_NEAR(boundary_tv(p.graph, p.alpha, p.boundary), 0.6, 1e-15);
}

TEST(Reduce, InteriorChargeTwoSplitsIntoThreeCopies) {
  // v interior with outgoing 1.5, 1.0 and -0.5: div 2, a+ = 2.5, a- = 0.5
  ChargedGraph cg{Graph(4), {false, true, true, true}, OneForm(std::vector<double>{1.5, 1.0, -0.5})};
  cg.graph.add_edge(0, 1);
  cg.graph.add_edge(0, 2);
  cg.graph.add_edge(0, 3);
  auto red = reduce(cg);
  EXPECT_EQ(red.trace.stats.interior_splits, 1u);
  ASSERT_EQ(red.components.size(), 1u);
  const auto& p = red.components[0];
  const auto& vo = red.trace.vertex_origin[0];
  auto div = divergence(p.graph, p.alpha);
  std::vector<double> copy_div;
  for (VertexIndex v = 0; v < p.graph.num_vertices(); ++v)
    if (vo[v] == 0) copy_div.push_back(div[v]);
  std::sort(copy_div.begin(), copy_div.end());
  ASSERT_EQ(copy_div.size(), 3u);
  EXPECT_NEAR(copy_div[0], 0, 1e-15);
  EXPECT_NEAR(copy_div[1], 1, 1e-15);
  EXPECT_NEAR(copy_div[2], 1, 1e-15);
  // copy 0 keeps -0.5 and 0.5/2.5 of each positive value; the others take value/2.5
  std::multiset<long> scaled;
  for (EdgeIndex e = 0; e < p.graph.num_edges(); ++e) {
    VertexIndex t = p.graph.edge(e).tail;
    double out = vo[t] == 0 ? p.alpha[e] : -p.alpha[e];
    scaled.insert(std::lround(out * 1000));
  }
  EXPECT_EQ(scaled, (std::multiset<long>{-500, 200, 300, 400, 400, 600, 600}));
  auto back = project(red.trace, {p.alpha}, cg.alpha);
  for (EdgeIndex e = 0; e < 3; ++e) EXPECT_NEAR(back[e], cg.alpha[e], 1e-15);
}

TEST(Reduce, PostconditionsOnRandomInstances) {
  testkit::Rng rng(41);
  for (int it = 0; it < 300; ++it) {
    auto cg = it % 2 ? testkit::zero_flux_instance(rng) : testkit::unit_flux_instance(rng);
    auto red = reduce(cg);
    std::vector<OneForm> lifted;
    int unit_pieces = 0;
    for (const auto& p : red.components) {
      lifted.push_back(p.alpha);
      EXPECT_TRUE(p.graph.connected());
      auto div = divergence(p.graph, p.alpha);
      for (const auto& e : p.graph.edges()) EXPECT_FALSE(p.boundary[e.tail] && p.boundary[e.head]);
      for (VertexIndex v = 0; v < p.graph.num_vertices(); ++v) {
        int pos = 0, neg = 0;
        for (const auto& inc : p.graph.incident(v)) (p.alpha.at(inc) > 0 ? pos : neg)++;
        if (p.boundary[v]) {
          EXPECT_TRUE(pos == 0 || neg == 0);
        } else {
          long k = std::lround(div[v]);
          EXPECT_NEAR(div[v], k, 1e-9);
          EXPECT_LE(std::labs(k), 1);
          if (k > 0) {
            EXPECT_EQ(neg, 0);
          }
          if (k < 0) {
            EXPECT_EQ(pos, 0);
          }
        }
      }
      double pf = flux(p.graph, p.alpha, p.boundary);
      if (std::abs(pf) > 1e-9) {
        EXPECT_NEAR(std::abs(pf), 1, 1e-9);
        ++unit_pieces;
      }
    }
    EXPECT_LE(unit_pieces, 1);
    auto back = project(red.trace, lifted, cg.alpha);
    for (EdgeIndex e = 0; e < cg.alpha.size(); ++e) EXPECT_NEAR(back[e], cg.alpha[e], 1e-14);
  }
}

TEST(Reduce, RejectsNonIntegralDivergence) {
  auto cg = chain({0.6, -0.3}, {true, false, true});
  EXPECT_KIND(reduce(cg), ErrorKind::IntegralityViolation);
}

TEST(ZeroFlux, ChainDipole) {
  auto cg = chain({0.2, -0.8, 0.2}, {true, false, false, true});
  auto r = remove_dipoles_zero_flux(cg);
  for (EdgeIndex e = 0; e < 3; ++e) EXPECT_NEAR(r.gamma[e], 0.2, 1e-15);
  ASSERT_TRUE(r.cert.witness.has_value());
  EXPECT_EQ(*r.cert.witness, 1u);
  EXPECT_NEAR(r.cert.tv, 0.4, 1e-15);
  expect_contract(cg, r, 1, std::nullopt);
}

TEST(ZeroFlux, ChargeFreeInputSatisfiesContract) {
  auto cg = chain({0.2, 0.2, 0.2}, {true, false, false, true});
  auto r = remove_dipoles_zero_flux(cg);
  expect_contract(cg, r, 1, std::nullopt);
}

TEST(ZeroFlux, SharpnessExampleIsRejected) {
  for (double eps : {0.05, 0.1})
    EXPECT_KIND(remove_dipoles_zero_flux(testkit::sharpness_example(1, eps)), ErrorKind::HypothesisViolated);
  EXPECT_KIND(remove_dipoles_zero_flux(chain({0.6, -0.4}, {true, false, true})), ErrorKind::HypothesisViolated);
}

TEST(ZeroFlux, RandomInstances) {
  testkit::Rng rng(42);
  int witnessed = 0;
  for (int it = 0; it < 500; ++it) {
    auto cg = testkit::zero_flux_instance(rng);
    auto r = remove_dipoles_zero_flux(cg);
    expect_contract(cg, r, 1, std::nullopt);
    auto div = divergence(cg.graph, cg.alpha);
    bool charged = !interior_charges(cg, 1, div).empty() || !interior_charges(cg, -1, div).empty();
    if (r.cert.tv < 1 - 1e-9 && charged) {
      ASSERT_TRUE(r.cert.witness.has_value());
      EXPECT_LT(std::abs(r.gamma[*r.cert.witness]), std::abs(cg.alpha[*r.cert.witness]) - 1e-9);
      ++witnessed;
    }
  }
  EXPECT_GT(witnessed, 100);
}

TEST(UnitFlux, ChainBaseCase) {
  auto cg = chain({0.6, -0.4}, {true, false, true});
  auto r = remove_dipoles_unit_flux(cg);
  EXPECT_EQ(r.gamma.values, cg.alpha.values);
  ASSERT_TRUE(r.cert.x0.has_value());
  EXPECT_EQ(*r.cert.x0, 1u);
  EXPECT_EQ(r.cert.depth, 0u);
  auto neg = remove_dipoles_unit_flux(ChargedGraph{cg.graph, cg.boundary, -cg.alpha});
  EXPECT_EQ(neg.gamma.values, (-cg.alpha).values);
}

TEST(UnitFlux, SharpnessExamplesAreRejected) {
  for (double eps : {0.05, 0.1}) {
    EXPECT_KIND(remove_dipoles_unit_flux(testkit::sharpness_example(2, eps)), ErrorKind::HypothesisViolated);
    EXPECT_KIND(remove_dipoles_unit_flux(testkit::sharpness_example(3, eps)), ErrorKind::HypothesisViolated);
  }
}

TEST(UnitFlux, RandomInstances) {
  testkit::Rng rng(43);
  std::size_t deepest = 0;
  for (int it = 0; it < 500; ++it) {
    auto cg = testkit::unit_flux_instance(rng);
    auto r = remove_dipoles_unit_flux(cg);
    ASSERT_TRUE(r.cert.x0.has_value());
    expect_contract(cg, r, 1, r.cert.x0);
    EXPECT_LE(r.cert.depth, r.cert.positive_charges);
    deepest = std::max(deepest, r.cert.depth);
  }
  EXPECT_GE(deepest, 1u);
}

TEST(UnitFlux, SeededChargeChoiceStillSatisfiesContract) {
  testkit::Rng rng(44);
  for (int it = 0; it < 200; ++it) {
    auto cg = testkit::unit_flux_instance(rng);
    RemovalOptions opt;
    opt.x0_seed = 1000 + it;
    auto r = remove_dipoles_unit_flux(cg, opt);
    expect_contract(cg, r, 1, r.cert.x0);
  }
}

TEST(Relaxed, RemarkConstants) {
  for (auto [eps, want] : {std::pair{0.25, 3.0}, std::pair{0.1, 1.5}}) {
    auto cg = testkit::sharpness_example(2, eps);
    auto r = remove_dipoles_relaxed(cg);
    EXPECT_NEAR(r.cert.max_ratio, want, 1e-9);
    expect_contract(cg, r, 3, r.cert.x0);
    // one of the two branch edges A_i - B carries the whole unit
    double big = std::max(std::abs(r.gamma[2]), std::abs(r.gamma[3]));
    EXPECT_NEAR(big, want * (0.5 - eps), 1e-9);
  }
}

TEST(Relaxed, RejectsUnitTotalVariation) {
  EXPECT_KIND(remove_dipoles_relaxed(chain({0.6, -0.4}, {true, false, true})), ErrorKind::HypothesisViolated);
}

TEST(Oracle, ForcedFormOnSharpnessExamples) {
  for (int ex = 1; ex <= 3; ++ex) {
    auto cg = testkit::sharpness_example(ex, 0.1);
    auto f = testkit::forced_form(cg);
    ASSERT_EQ(f.status, testkit::Forced::Unique) << "example " << ex;
    for (EdgeIndex e = 0; e < cg.alpha.size(); ++e) EXPECT_NEAR(f.solutions[0][e], cg.alpha[e], 1e-12);
  }
}

TEST(Oracle, ForcedFormIndeterminateAndInfeasible) {
  // with K = 3 the example-2 tree admits more than one competitor
  auto cg = testkit::sharpness_example(2, 0.25);
  EXPECT_EQ(testkit::forced_form(cg, 3.0).status, testkit::Forced::Indeterminate);
  // an interior vertex that cannot reach integral divergence
  auto bad = chain({0.6, -0.3}, {true, false, true});
  EXPECT_EQ(testkit::forced_form(bad).status, testkit::Forced::Infeasible);
}
