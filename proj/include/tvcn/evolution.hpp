#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tvcn/graph.hpp"
#include "tvcn/random.hpp"

namespace tvcn {

// Growth/alteration knobs for one run. `beta` splits the per-step link
// number `x` between expansion and alteration; `gamma` splits alteration
// between rewiring and removal. The boundaries beta = 1 (pure growth) and
// gamma = 0.5 (equal rewire/removal split) are accepted.
struct EvolutionParams {
  std::size_t n0 = 5;
  std::size_t x = 5;
  double beta = 0.5;
  double gamma = 0.6;
  std::size_t steps = 500;
  std::uint64_t seed = 1;

  void validate() const {
    if (n0 < 1) throw std::invalid_argument("params: n0 must be >= 1");
    if (x < 1 || x > n0)
      throw std::invalid_argument("params: x must satisfy 1 <= x <= n0");
    if (!(beta > 0.0 && beta <= 1.0))
      throw std::invalid_argument("params: beta must be in (0, 1]");
    if (!(gamma >= 0.5 && gamma <= 1.0))
      throw std::invalid_argument("params: gamma must be in [0.5, 1]");
  }
};

// Expected per-step link counts for the three categories. They always sum
// to x.
struct LinkBudget {
  double add;
  double rewire;
  double del;
};

inline LinkBudget link_budget(const EvolutionParams& p) {
  p.validate();
  const double x = static_cast<double>(p.x);
  return {p.beta * x, p.gamma * (1.0 - p.beta) * x,
          (1.0 - p.gamma) * (1.0 - p.beta) * x};
}

// Ratio of altered (rewired + removed) to newly added links per step.
inline double correlation_delta(double beta) {
  if (beta <= 0.0)
    throw std::invalid_argument("correlation_delta: beta must be positive");
  return (1.0 - beta) / beta;
}

namespace detail {

// Cumulative walk over (in_degree + 1) weights; r must be in [0, total).
inline NodeId in_degree_walk(const DirectedGraph& g, double r) {
  const std::size_t n = g.node_count();
  double acc = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    acc += static_cast<double>(g.in_degree(v)) + 1.0;
    if (r < acc) return v;
  }
  return static_cast<NodeId>(n - 1);
}

}  // namespace detail

// Samples a node with probability proportional to in_degree + 1 among the
// nodes not listed in `exclude`. The +1 keeps fresh zero-in-degree nodes
// reachable as targets. Throws when no node is eligible.
inline NodeId preferential_target(const DirectedGraph& g, Rng& rng,
                                  std::span<const NodeId> exclude = {}) {
  const std::size_t n = g.node_count();
  if (n == 0)
    throw std::invalid_argument("preferential_target: empty graph");
  auto excluded = [&](NodeId v) {
    return std::find(exclude.begin(), exclude.end(), v) != exclude.end();
  };
  // Fast path: draw over everything and reject excluded hits. Falls back
  // to an exact walk over the eligible set when rejection keeps missing.
  const double total = static_cast<double>(g.edge_count() + n);
  for (int attempt = 0; attempt < 64; ++attempt) {
    NodeId pick = detail::in_degree_walk(g, uniform01(rng) * total);
    if (!excluded(pick)) return pick;
  }
  double eligible_total = 0.0;
  for (NodeId v = 0; v < n; ++v)
    if (!excluded(v)) eligible_total += static_cast<double>(g.in_degree(v)) + 1.0;
  if (eligible_total <= 0.0)
    throw std::runtime_error("preferential_target: no eligible node");
  double r = uniform01(rng) * eligible_total;
  double acc = 0.0;
  NodeId last = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (excluded(v)) continue;
    last = v;  // fp-rounding fallback
    acc += static_cast<double>(g.in_degree(v)) + 1.0;
    if (r < acc) return v;
  }
  return last;
}

// Picks an out-neighbor of `source` with probability proportional to
// 1 - k_v / sum_j k_j over total degrees: low-degree endpoints are the
// preferred removal victims.
inline NodeId anti_preferential_victim(const DirectedGraph& g, NodeId source,
                                       Rng& rng) {
  const auto& nbrs = g.out_neighbors(source);
  if (nbrs.empty())
    throw std::runtime_error("anti_preferential_victim: no removable link");
  const double degree_sum = 2.0 * static_cast<double>(g.edge_count());
  double total = 0.0;
  for (NodeId v : nbrs)
    total += 1.0 - static_cast<double>(g.degree(v)) / degree_sum;
  double r = uniform01(rng) * total;
  double acc = 0.0;
  for (NodeId v : nbrs) {
    acc += 1.0 - static_cast<double>(g.degree(v)) / degree_sum;
    if (r < acc) return v;
  }
  return nbrs.back();
}

struct StepReport {
  std::size_t step = 0;
  std::size_t added_links = 0;
  std::size_t rewired_links = 0;
  std::size_t deleted_links = 0;
  std::size_t skipped_actions = 0;
  std::size_t edge_count = 0;
};

namespace detail {

// floor + Bernoulli on the fractional part, so E[count] equals the budget.
inline std::size_t stochastic_round(double budget, Rng& rng) {
  double ip = 0.0;
  const double frac = std::modf(budget, &ip);
  auto n = static_cast<std::size_t>(ip);
  if (frac > 0.0 && bernoulli(rng, frac)) ++n;
  return n;
}

// Node allowed to rewire: sampled by in-degree endorsement among nodes
// that still own an out-link.
inline std::optional<NodeId> rewire_source(const DirectedGraph& g, Rng& rng) {
  const std::size_t n = g.node_count();
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v)
    if (g.out_degree(v) > 0) total += static_cast<double>(g.in_degree(v)) + 1.0;
  if (total <= 0.0) return std::nullopt;
  double r = uniform01(rng) * total;
  double acc = 0.0;
  std::optional<NodeId> last;
  for (NodeId v = 0; v < n; ++v) {
    if (g.out_degree(v) == 0) continue;
    last = v;
    acc += static_cast<double>(g.in_degree(v)) + 1.0;
    if (r < acc) return v;
  }
  return last;
}

}  // namespace detail

// One evolution step: add a node, grow realized budget counts of new
// out-links, rewire infrequently used links of endorsed nodes, and remove
// infrequently used links of random nodes. Actions that cannot find an
// eligible node or link are skipped and counted.
inline StepReport evolve_step(DirectedGraph& g, const EvolutionParams& p,
                              Rng& rng, std::size_t step_index = 0) {
  if (g.node_count() == 0)
    throw std::invalid_argument("evolve_step: empty graph");
  const LinkBudget budget = link_budget(p);
  const std::size_t n_add = detail::stochastic_round(budget.add, rng);
  const std::size_t n_rewire = detail::stochastic_round(budget.rewire, rng);
  const std::size_t n_delete = detail::stochastic_round(budget.del, rng);

  StepReport report;
  report.step = step_index;

  const NodeId fresh = g.add_node();
  std::vector<NodeId> taken{fresh};
  for (std::size_t i = 0; i < n_add; ++i) {
    if (taken.size() >= g.node_count()) {
      ++report.skipped_actions;
      continue;
    }
    const NodeId target = preferential_target(g, rng, taken);
    g.add_edge(fresh, target);
    taken.push_back(target);
    ++report.added_links;
  }

  std::vector<NodeId> banned;
  for (std::size_t i = 0; i < n_rewire; ++i) {
    const auto source = detail::rewire_source(g, rng);
    if (!source) {
      ++report.skipped_actions;
      continue;
    }
    const NodeId victim = anti_preferential_victim(g, *source, rng);
    banned = g.out_neighbors(*source);
    banned.push_back(*source);
    if (banned.size() >= g.node_count()) {
      ++report.skipped_actions;
      continue;
    }
    const NodeId target = preferential_target(g, rng, banned);
    g.rewire_edge(*source, victim, target);
    ++report.rewired_links;
  }

  std::vector<NodeId> candidates;
  for (std::size_t i = 0; i < n_delete; ++i) {
    candidates.clear();
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (g.out_degree(v) > 0) candidates.push_back(v);
    if (candidates.empty()) {
      ++report.skipped_actions;
      continue;
    }
    const NodeId source = candidates[uniform_index(rng, candidates.size())];
    g.remove_edge(source, anti_preferential_victim(g, source, rng));
    ++report.deleted_links;
  }

  report.edge_count = g.edge_count();
  return report;
}

struct EvolveRun {
  DirectedGraph graph;
  std::vector<StepReport> reports;      // filled when requested
  std::vector<GraphSnapshot> snapshots; // filled when an interval is set
};

// Runs `steps` evolution steps from a complete seed digraph on n0 nodes.
// A fixed seed reproduces the exact same graph.
inline EvolveRun evolve_run(const EvolutionParams& p,
                            std::size_t snapshot_interval = 0,
                            bool collect_reports = false) {
  p.validate();
  EvolveRun run;
  run.graph = complete_digraph(p.n0);
  Rng rng(p.seed);
  for (std::size_t t = 1; t <= p.steps; ++t) {
    const StepReport report = evolve_step(run.graph, p, rng, t);
    if (collect_reports) run.reports.push_back(report);
    if (snapshot_interval > 0 && t % snapshot_interval == 0)
      run.snapshots.emplace_back(t, run.graph);
  }
  return run;
}

inline DirectedGraph evolve(const EvolutionParams& p) {
  return evolve_run(p).graph;
}

}  // namespace tvcn
