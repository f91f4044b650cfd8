// Test-only helpers: independent oracles and graph generators. Everything
// here deliberately avoids the library's own traversal code so that oracle
// checks stay meaningful.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "tvcn/graph.hpp"
#include "tvcn/random.hpp"

namespace testutil {

// Directed G(n, p) with a fixed seed.
inline tvcn::DirectedGraph random_digraph(std::size_t n, double p,
                                          std::uint64_t seed) {
  tvcn::DirectedGraph g(n);
  tvcn::Rng rng(seed);
  for (tvcn::NodeId u = 0; u < n; ++u)
    for (tvcn::NodeId v = 0; v < n; ++v)
      if (u != v && tvcn::uniform01(rng) < p) g.add_edge(u, v);
  return g;
}

// Symmetric neighbor sets built directly from the edge list.
inline std::vector<std::set<tvcn::NodeId>> symmetric_neighbors(
    const tvcn::DirectedGraph& g) {
  std::vector<std::set<tvcn::NodeId>> nbrs(g.node_count());
  for (const auto& [u, v] : g.edges()) {
    nbrs[u].insert(v);
    nbrs[v].insert(u);
  }
  return nbrs;
}

inline std::vector<int> bfs_distances(
    const std::vector<std::set<tvcn::NodeId>>& nbrs, tvcn::NodeId start) {
  std::vector<int> dist(nbrs.size(), -1);
  std::vector<tvcn::NodeId> queue{start};
  dist[start] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const tvcn::NodeId v = queue[head];
    for (tvcn::NodeId w : nbrs[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

// Every geodesic between s and t, found by forward DFS constrained to
// strictly distance-increasing moves.
inline void enumerate_geodesics_rec(
    const std::vector<std::set<tvcn::NodeId>>& nbrs,
    const std::vector<int>& dist, tvcn::NodeId t,
    std::vector<tvcn::NodeId>& path,
    std::vector<std::vector<tvcn::NodeId>>& out) {
  const tvcn::NodeId v = path.back();
  if (v == t) {
    out.push_back(path);
    return;
  }
  for (tvcn::NodeId w : nbrs[v]) {
    if (dist[w] == dist[v] + 1 && dist[t] >= dist[w]) {
      path.push_back(w);
      enumerate_geodesics_rec(nbrs, dist, t, path, out);
      path.pop_back();
    }
  }
}

inline std::vector<std::vector<tvcn::NodeId>> enumerate_geodesics(
    const tvcn::DirectedGraph& g, tvcn::NodeId s, tvcn::NodeId t) {
  const auto nbrs = symmetric_neighbors(g);
  const auto dist = bfs_distances(nbrs, s);
  std::vector<std::vector<tvcn::NodeId>> out;
  if (dist[t] < 0) return out;
  std::vector<tvcn::NodeId> path{s};
  enumerate_geodesics_rec(nbrs, dist, t, path, out);
  return out;
}

// Betweenness by explicit enumeration of every geodesic of every ordered
// pair; normalized the same way as the production code.
inline std::vector<double> brute_force_betweenness(
    const tvcn::DirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> score(n, 0.0);
  if (n < 3) return score;
  for (tvcn::NodeId s = 0; s < n; ++s) {
    for (tvcn::NodeId t = 0; t < n; ++t) {
      if (s == t) continue;
      const auto paths = enumerate_geodesics(g, s, t);
      if (paths.empty()) continue;
      std::vector<std::size_t> through(n, 0);
      for (const auto& path : paths)
        for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
      for (tvcn::NodeId v = 0; v < n; ++v)
        if (through[v] > 0)
          score[v] += static_cast<double>(through[v]) /
                      static_cast<double>(paths.size());
    }
  }
  const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (double& x : score) x /= norm;
  return score;
}

// Integer power-law sampler: continuous Pareto tail with exponent `alpha`
// above k_min, rounded to the nearest integer. Matches the half-integer
// shift model used by the fitter.
inline std::size_t sample_power_law(tvcn::Rng& rng, double alpha,
                                    double k_min) {
  const double u = tvcn::uniform01(rng);
  const double x = (k_min - 0.5) * std::pow(1.0 - u, -1.0 / (alpha - 1.0));
  return static_cast<std::size_t>(std::llround(x));
}

}  // namespace testutil
