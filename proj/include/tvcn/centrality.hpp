#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tvcn/graph.hpp"

namespace tvcn {

// Reciprocals of eigenvector scores are clamped at this floor so nodes
// outside the scored component keep a finite (huge) reputation.
inline constexpr double kEigenvectorFloor = 1e-12;

// Shortest-path betweenness over the undirected view, accumulated per
// source (Brandes), covering all ordered source-target pairs. Scores are
// normalized by (N-1)(N-2).
inline std::vector<double> betweenness_all(const DirectedGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("betweenness_all: empty graph");
  std::vector<double> score(n, 0.0);
  if (n < 3) return score;

  const auto adj = undirected_adjacency(g);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::int32_t> dist(n);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> order;
  order.reserve(n);

  for (NodeId s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeId v = order[head];
      for (NodeId w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }

    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : preds[w])
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) score[w] += delta[w];
    }
  }

  const double norm =
      static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (double& x : score) x /= norm;
  return score;
}

struct EigenvectorResult {
  std::vector<double> values;  // max-normalized; zero off the component
  double kappa = 0.0;          // largest eigenvalue, Rayleigh quotient
  std::size_t iterations = 0;
};

// Power iteration for the principal eigenvector of the symmetric 0/1
// adjacency, restricted to the largest connected component. Iteration runs
// on A + I, which has the same eigenvectors but cannot cycle on bipartite
// components; kappa is reported for A itself.
inline EigenvectorResult eigenvector_all(const DirectedGraph& g,
                                         double tol = 1e-10,
                                         std::size_t max_iter = 100000) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("eigenvector_all: empty graph");
  const auto adj = undirected_adjacency(g);
  const auto component = largest_component(adj);

  EigenvectorResult result;
  result.values.assign(n, 0.0);
  if (component.size() == 1) {
    result.values[component.front()] = 1.0;
    result.kappa = 0.0;
    return result;
  }

  std::vector<double> x(n, 0.0), next(n, 0.0);
  for (NodeId v : component) x[v] = 1.0;

  bool converged = false;
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double peak = 0.0;
    for (NodeId v : component) {
      double sum = x[v];
      for (NodeId w : adj[v]) sum += x[w];
      next[v] = sum;
      if (sum > peak) peak = sum;
    }
    double diff = 0.0;
    for (NodeId v : component) {
      next[v] /= peak;
      diff = std::max(diff, std::abs(next[v] - x[v]));
      x[v] = next[v];
    }
    if (diff < tol) {
      converged = true;
      ++iter;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("eigenvector_all: power iteration did not converge");

  double num = 0.0, den = 0.0;
  for (NodeId v : component) {
    double av = 0.0;
    for (NodeId w : adj[v]) av += x[w];
    num += x[v] * av;
    den += x[v] * x[v];
  }
  result.values = std::move(x);
  result.kappa = num / den;
  result.iterations = iter;
  return result;
}

struct CentralityScores {
  std::vector<double> betweenness;  // normalized g(v)
  std::vector<double> eigenvector;  // max-normalized x_v
  std::vector<double> reputation;   // 1 / x_v (floored)
  double kappa = 0.0;

  std::size_t size() const { return betweenness.size(); }
};

inline CentralityScores compute_centralities(const DirectedGraph& g,
                                             double tol = 1e-10,
                                             std::size_t max_iter = 100000) {
  CentralityScores scores;
  scores.betweenness = betweenness_all(g);
  auto eigen = eigenvector_all(g, tol, max_iter);
  scores.kappa = eigen.kappa;
  scores.eigenvector = std::move(eigen.values);
  scores.reputation.resize(scores.eigenvector.size());
  for (std::size_t v = 0; v < scores.eigenvector.size(); ++v)
    scores.reputation[v] =
        1.0 / std::max(scores.eigenvector[v], kEigenvectorFloor);
  return scores;
}

// The three additive path figures: total betweenness, total reputation,
// and the combined betweenness-times-eigenvector score that route
// selection minimizes.
struct PathScore {
  double theta_g = 0.0;
  double theta_r = 0.0;
  double theta_gr = 0.0;
};

inline PathScore path_scores(std::span<const NodeId> path,
                             const CentralityScores& scores) {
  PathScore ps;
  for (NodeId v : path) {
    if (v >= scores.size())
      throw std::out_of_range("path_scores: unscored node in path");
    ps.theta_g += scores.betweenness[v];
    ps.theta_r += scores.reputation[v];
    ps.theta_gr += scores.betweenness[v] * scores.eigenvector[v];
  }
  return ps;
}

}  // namespace tvcn
