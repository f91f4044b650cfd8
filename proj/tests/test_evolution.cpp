#include "tvcn/evolution.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "tvcn/analysis.hpp"
#include "tvcn/io.hpp"
#include "test_util.hpp"

using namespace tvcn;

namespace {

EvolutionParams make_params(double beta, double gamma, std::size_t steps,
                            std::uint64_t seed) {
  EvolutionParams p;
  p.beta = beta;
  p.gamma = gamma;
  p.steps = steps;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(LinkBudget, SplitsMatchHandEvaluation) {
  const auto b = link_budget(make_params(0.25, 0.7, 1, 1));
  EXPECT_DOUBLE_EQ(b.add, 1.25);
  EXPECT_DOUBLE_EQ(b.rewire, 2.625);
  EXPECT_DOUBLE_EQ(b.del, 1.125);
}

TEST(LinkBudget, PureGrowthBoundary) {
  const auto b = link_budget(make_params(1.0, 0.7, 1, 1));
  EXPECT_DOUBLE_EQ(b.add, 5.0);
  EXPECT_DOUBLE_EQ(b.rewire, 0.0);
  EXPECT_DOUBLE_EQ(b.del, 0.0);
}

TEST(LinkBudget, FullRewireZeroesDeletion) {
  const auto b = link_budget(make_params(0.5, 1.0, 1, 1));
  EXPECT_DOUBLE_EQ(b.add, 2.5);
  EXPECT_DOUBLE_EQ(b.rewire, 2.5);
  EXPECT_DOUBLE_EQ(b.del, 0.0);
}

TEST(LinkBudget, CategoriesAlwaysSumToX) {
  for (double beta : {0.1, 0.25, 0.5, 0.75, 0.99, 1.0})
    for (double gamma : {0.5, 0.6, 0.75, 0.9, 1.0}) {
      const auto b = link_budget(make_params(beta, gamma, 1, 1));
      EXPECT_NEAR(b.add + b.rewire + b.del, 5.0, 1e-12);
    }
}

TEST(CorrelationDelta, MatchesClosedForm) {
  EXPECT_DOUBLE_EQ(correlation_delta(0.5), 1.0);
  EXPECT_DOUBLE_EQ(correlation_delta(0.25), 3.0);
  EXPECT_DOUBLE_EQ(correlation_delta(1.0), 0.0);
  EXPECT_THROW(correlation_delta(0.0), std::invalid_argument);
  EXPECT_THROW(correlation_delta(-0.2), std::invalid_argument);
}

TEST(PreferentialTarget, UniformWhenAllInDegreesZero) {
  DirectedGraph g(4);
  Rng rng(3);
  std::vector<std::size_t> hits(4, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++hits[preferential_target(g, rng)];
  for (std::size_t h : hits)
    EXPECT_NEAR(static_cast<double>(h) / draws, 0.25, 0.02);
}

TEST(PreferentialTarget, WeightsFollowInDegreePlusOne) {
  // Nodes 0 and 1 with in-degrees 9 and 4; helper nodes excluded from the
  // draw. Eligible weights are {10, 5}.
  DirectedGraph g(2);
  std::vector<NodeId> helpers;
  for (int i = 0; i < 9; ++i) {
    const NodeId h = g.add_node();
    helpers.push_back(h);
    g.add_edge(h, 0);
  }
  for (int i = 0; i < 4; ++i) {
    const NodeId h = g.add_node();
    helpers.push_back(h);
    g.add_edge(h, 1);
  }
  Rng rng(5);
  std::size_t first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (preferential_target(g, rng, helpers) == 0) ++first;
  EXPECT_NEAR(static_cast<double>(first) / draws, 10.0 / 15.0, 0.02);
}

TEST(PreferentialTarget, ExclusionLeavesSingleCandidate) {
  DirectedGraph g(5);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  Rng rng(9);
  const std::vector<NodeId> exclude{0, 1, 2, 4};
  for (int i = 0; i < 50; ++i)
    EXPECT_EQ(preferential_target(g, rng, exclude), 3u);
}

TEST(PreferentialTarget, ThrowsWhenNothingEligible) {
  DirectedGraph g(2);
  Rng rng(1);
  const std::vector<NodeId> exclude{0, 1};
  EXPECT_THROW(preferential_target(g, rng, exclude), std::runtime_error);
}

TEST(AntiPreferentialVictim, SingleNeighborAlwaysChosen) {
  DirectedGraph g(3);
  g.add_edge(0, 1);
  Rng rng(2);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(anti_preferential_victim(g, 0, rng), 1u);
}

TEST(AntiPreferentialVictim, LowDegreeNeighborPreferred) {
  // Source 0 points to nodes 1 and 2 with total degrees 1 and 99 in a graph
  // whose degree sum is 200: normalized pick probability for the low-degree
  // neighbor is 0.995 / (0.995 + 0.505).
  DirectedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  for (int i = 0; i < 98; ++i) {
    const NodeId h = g.add_node();
    g.add_edge(h, 2);
  }
  ASSERT_EQ(2 * g.edge_count(), 200u);
  ASSERT_EQ(g.degree(1), 1u);
  ASSERT_EQ(g.degree(2), 99u);

  Rng rng(13);
  std::size_t low = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    if (anti_preferential_victim(g, 0, rng) == 1) ++low;
  EXPECT_NEAR(static_cast<double>(low) / draws, 0.995 / 1.5, 0.01);
}

TEST(AntiPreferentialVictim, EqualDegreesGiveUniformChoice) {
  DirectedGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  Rng rng(17);
  std::vector<std::size_t> hits(4, 0);
  const int draws = 90000;
  for (int i = 0; i < draws; ++i) ++hits[anti_preferential_victim(g, 0, rng)];
  for (NodeId v = 1; v < 4; ++v)
    EXPECT_NEAR(static_cast<double>(hits[v]) / draws, 1.0 / 3.0, 0.02);
}

TEST(AntiPreferentialVictim, NoOutLinksIsAnError) {
  DirectedGraph g(2);
  g.add_edge(0, 1);
  Rng rng(1);
  EXPECT_THROW(anti_preferential_victim(g, 1, rng), std::runtime_error);
}

TEST(EvolveStep, PureGrowthAddsExactlyFiveLinks) {
  const auto params = make_params(1.0, 0.7, 1, 1);
  DirectedGraph g = complete_digraph(params.n0);
  Rng rng(params.seed);
  for (int t = 1; t <= 50; ++t) {
    const std::size_t nodes_before = g.node_count();
    const std::size_t edges_before = g.edge_count();
    const auto report = evolve_step(g, params, rng, t);
    EXPECT_EQ(g.node_count(), nodes_before + 1);
    EXPECT_EQ(report.added_links, 5u);
    EXPECT_EQ(report.rewired_links, 0u);
    EXPECT_EQ(report.deleted_links, 0u);
    EXPECT_EQ(g.edge_count(), edges_before + 5);
  }
}

TEST(Evolve, NodeCountIsSeedPlusSteps) {
  const auto params = make_params(0.5, 0.6, 200, 21);
  EXPECT_EQ(evolve(params).node_count(), params.n0 + 200);
}

TEST(Evolve, ZeroStepsLeavesSeedUntouched) {
  auto params = make_params(0.5, 0.6, 0, 21);
  EXPECT_TRUE(evolve(params) == complete_digraph(params.n0));
}

TEST(Evolve, StepAccountingIsConsistent) {
  const auto params = make_params(0.25, 0.7, 400, 5);
  DirectedGraph g = complete_digraph(params.n0);
  Rng rng(params.seed);
  for (std::size_t t = 1; t <= params.steps; ++t) {
    const std::size_t before = g.edge_count();
    const auto r = evolve_step(g, params, rng, t);
    // Adds grow the count, deletions shrink it, rewires leave it alone.
    EXPECT_EQ(g.edge_count(), before + r.added_links - r.deleted_links);
  }
}

TEST(Evolve, MeanEdgeCountTracksBudgetBookkeeping) {
  // E[edges(T)] = seed + T * X * (beta - (1-gamma)(1-beta)); per-step
  // variance comes only from the two Bernoulli roundings (<= 0.5 total),
  // so 3 standard errors over 50 runs is a tight band.
  const double beta = 0.5, gamma = 0.6;
  const std::size_t steps = 500, runs = 50;
  const double expected = 20.0 + steps * 5.0 * (beta - (1 - gamma) * (1 - beta));
  const double step_var = 0.25 + 0.0;  // frac(2.5)=0.5 -> 0.25; frac(1.0)=0
  const double sigma = std::sqrt(step_var * steps / runs);

  double total = 0.0;
  for (std::size_t r = 0; r < runs; ++r)
    total += static_cast<double>(
        evolve(make_params(beta, gamma, steps, 1000 + r)).edge_count());
  EXPECT_NEAR(total / runs, expected, 3.0 * sigma);
}

TEST(Evolve, RealizedCountsMatchBudgetWithinThreeStandardErrors) {
  const auto params = make_params(0.25, 0.7, 2000, 77);
  const auto budget = link_budget(params);
  const auto run = evolve_run(params, 0, true);
  double adds = 0, rewires = 0, dels = 0;
  for (const auto& r : run.reports) {
    adds += static_cast<double>(r.added_links);
    rewires += static_cast<double>(r.rewired_links);
    dels += static_cast<double>(r.deleted_links);
  }
  const double n = static_cast<double>(params.steps);
  auto stderr_of = [&](double b) {
    const double frac = b - std::floor(b);
    return std::sqrt(frac * (1 - frac) / n);
  };
  EXPECT_NEAR(adds / n, budget.add, 3 * stderr_of(budget.add) + 1e-9);
  EXPECT_NEAR(rewires / n, budget.rewire, 3 * stderr_of(budget.rewire) + 1e-9);
  EXPECT_NEAR(dels / n, budget.del, 3 * stderr_of(budget.del) + 1e-9);
}

TEST(Evolve, FixedSeedReproducesByteIdenticalSerialization) {
  const auto params = make_params(0.5, 0.6, 100, 42);
  const auto a = graph_to_json(evolve(params), params).dump();
  const auto b = graph_to_json(evolve(params), params).dump();
  EXPECT_EQ(a, b);

  auto other = params;
  other.seed = 43;
  EXPECT_NE(a, graph_to_json(evolve(other), other).dump());
}

TEST(Evolve, SnapshotScheduleFreezesIntermediateStates) {
  const auto params = make_params(0.5, 0.6, 100, 9);
  const auto run = evolve_run(params, 25);
  ASSERT_EQ(run.snapshots.size(), 4u);
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const auto& snap = run.snapshots[i];
    EXPECT_EQ(snap.timestamp(), 25 * (i + 1));
    EXPECT_EQ(snap.graph().node_count(), params.n0 + snap.timestamp());
  }
  EXPECT_TRUE(run.snapshots.back().graph() == run.graph);
}

TEST(Evolve, PureGrowthNeverRemovesSeededEdges) {
  const auto params = make_params(1.0, 0.9, 300, 3);
  const auto run = evolve_run(params, 0, true);
  for (const auto& r : run.reports) {
    EXPECT_EQ(r.rewired_links, 0u);
    EXPECT_EQ(r.deleted_links, 0u);
  }
  EXPECT_EQ(run.graph.edge_count(), 20u + 5u * 300u);
}

TEST(Evolve, LongRunGrowsHeavyInDegreeTail) {
  // Growth-dominated parameters concentrate in-links on early nodes; the
  // tail spans orders of magnitude and stays fittable.
  const auto params = make_params(0.9, 0.9, 10000, 1);
  const DirectedGraph g = evolve(params);
  const auto hist = degree_distribution(g, DegreeMode::In);
  EXPECT_GE(hist.counts.rbegin()->first, 100u);  // hub in-degree
  const auto fit = fit_power_law(hist, 5);
  EXPECT_GT(fit.alpha, 1.5);
  EXPECT_LT(fit.alpha, 3.5);
  EXPECT_GT(fit.sample_size, 500u);
}

TEST(Params, ValidationRejectsOutOfRangeValues) {
  EXPECT_THROW(make_params(0.0, 0.6, 1, 1).validate(), std::invalid_argument);
  EXPECT_THROW(make_params(1.1, 0.6, 1, 1).validate(), std::invalid_argument);
  EXPECT_THROW(make_params(0.5, 0.4, 1, 1).validate(), std::invalid_argument);
  EXPECT_THROW(make_params(0.5, 1.1, 1, 1).validate(), std::invalid_argument);
  EvolutionParams p;
  p.x = 9;  // x > n0
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(make_params(1.0, 0.5, 1, 1).validate());
}
