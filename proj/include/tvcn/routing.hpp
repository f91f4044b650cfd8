#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tvcn/centrality.hpp"
#include "tvcn/graph.hpp"
#include "tvcn/random.hpp"

namespace tvcn {

struct NoRouteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UserPair {
  std::size_t user_id = 0;
  NodeId source = 0;
  NodeId dest = 0;
};

struct RoutePath {
  std::vector<NodeId> nodes;
  PathScore score;

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }

  std::vector<std::pair<NodeId, NodeId>> links() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      out.emplace_back(nodes[i], nodes[i + 1]);
    return out;
  }
};

// All geodesics between source and dest on an undirected adjacency,
// enumerated through the BFS predecessor DAG. Path count is known from the
// BFS shortest-path counts before enumeration starts, so the cap is
// enforced without materializing an explosion.
inline std::vector<std::vector<NodeId>> all_shortest_paths(
    const std::vector<std::vector<NodeId>>& adj, NodeId source, NodeId dest,
    std::size_t max_paths = 10000) {
  const std::size_t n = adj.size();
  if (source >= n || dest >= n)
    throw std::out_of_range("all_shortest_paths: unknown node id");
  if (source == dest)
    throw std::invalid_argument("all_shortest_paths: source equals dest");

  std::vector<std::int32_t> dist(n, -1);
  std::vector<double> sigma(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> queue;
  queue.reserve(n);

  dist[source] = 0;
  sigma[source] = 1.0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    if (dist[v] >= dist[dest] && dist[dest] >= 0) break;
    for (NodeId w : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
      if (dist[w] == dist[v] + 1) {
        sigma[w] += sigma[v];
        preds[w].push_back(v);
      }
    }
  }
  if (dist[dest] < 0)
    throw NoRouteError("no route between " + std::to_string(source) + " and " +
                       std::to_string(dest));
  if (sigma[dest] > static_cast<double>(max_paths))
    throw std::runtime_error("all_shortest_paths: geodesic count exceeds cap");

  for (auto& p : preds) std::sort(p.begin(), p.end());

  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> stack{dest};
  // Iterative DFS over predecessor choices, rebuilding source->dest order
  // on emission.
  struct Frame {
    NodeId node;
    std::size_t next_pred;
  };
  std::vector<Frame> frames{{dest, 0}};
  while (!frames.empty()) {
    Frame& top = frames.back();
    if (top.node == source) {
      std::vector<NodeId> path(stack.rbegin(), stack.rend());
      paths.push_back(std::move(path));
      frames.pop_back();
      stack.pop_back();
      continue;
    }
    if (top.next_pred < preds[top.node].size()) {
      const NodeId p = preds[top.node][top.next_pred++];
      frames.push_back({p, 0});
      stack.push_back(p);
    } else {
      frames.pop_back();
      stack.pop_back();
    }
  }
  return paths;
}

inline std::vector<std::vector<NodeId>> all_shortest_paths(
    const DirectedGraph& g, NodeId source, NodeId dest,
    std::size_t max_paths = 10000) {
  return all_shortest_paths(undirected_adjacency(g), source, dest, max_paths);
}

struct ExtremalPaths {
  RoutePath min_path;
  RoutePath max_path;
};

// Argmin and argmax of a score key over candidate paths. Exact score ties
// go to the lexicographically smaller node sequence on both sides.
template <typename KeyFn>
inline ExtremalPaths select_extremal_paths_by(
    const std::vector<std::vector<NodeId>>& paths,
    const CentralityScores& scores, KeyFn key) {
  if (paths.empty())
    throw std::invalid_argument("select_extremal_paths: no candidate paths");
  ExtremalPaths result;
  double best_min = 0.0, best_max = 0.0;
  bool first = true;
  for (const auto& nodes : paths) {
    const PathScore score = path_scores(nodes, scores);
    const double k = key(score);
    auto lex_smaller = [&](const std::vector<NodeId>& other) {
      return std::lexicographical_compare(nodes.begin(), nodes.end(),
                                          other.begin(), other.end());
    };
    if (first || k < best_min ||
        (k == best_min && lex_smaller(result.min_path.nodes))) {
      best_min = k;
      result.min_path = {nodes, score};
    }
    if (first || k > best_max ||
        (k == best_max && lex_smaller(result.max_path.nodes))) {
      best_max = k;
      result.max_path = {nodes, score};
    }
    first = false;
  }
  return result;
}

inline ExtremalPaths select_extremal_paths(
    const std::vector<std::vector<NodeId>>& paths,
    const CentralityScores& scores) {
  return select_extremal_paths_by(paths, scores,
                                  [](const PathScore& s) { return s.theta_gr; });
}

// Degree-driven link capacity b * (k_m * k_n)^exponent over total degrees.
struct CapacityModel {
  double coefficient = 1.0;  // b
  double exponent = 1.0;

  void validate() const {
    if (coefficient <= 0.0)
      throw std::invalid_argument("capacity: coefficient must be positive");
  }
};

// A dead endpoint yields capacity 0, which callers treat as a flagged
// unusable link; live edges always have positive endpoint degrees.
inline double link_capacity(const DirectedGraph& g, NodeId m, NodeId n,
                            const CapacityModel& model = {}) {
  model.validate();
  const auto km = static_cast<double>(g.degree(m));
  const auto kn = static_cast<double>(g.degree(n));
  if (km == 0.0 || kn == 0.0) return 0.0;
  return model.coefficient * std::pow(km * kn, model.exponent);
}

// Per-node starting rates C_j / w_j, where w_j counts how many selected
// paths traverse node j and C_j is its in-degree.
inline std::map<NodeId, double> node_initial_rates(
    const std::vector<std::vector<NodeId>>& selected_paths,
    const DirectedGraph& g) {
  std::map<NodeId, std::size_t> occurrences;
  for (const auto& path : selected_paths)
    for (NodeId v : path) ++occurrences[v];
  std::map<NodeId, double> rates;
  for (const auto& [v, w] : occurrences)
    rates[v] = static_cast<double>(g.in_degree(v)) / static_cast<double>(w);
  return rates;
}

// Per-user starting rate: the bottleneck node rate along the user's
// selected path. A zero-capacity node on the path pins the rate at 0.
inline std::vector<double> initial_rates(
    const std::vector<std::vector<NodeId>>& selected_paths,
    const DirectedGraph& g) {
  const auto node_rates = node_initial_rates(selected_paths, g);
  std::vector<double> out;
  out.reserve(selected_paths.size());
  for (const auto& path : selected_paths) {
    double rate = std::numeric_limits<double>::infinity();
    for (NodeId v : path) rate = std::min(rate, node_rates.at(v));
    out.push_back(path.empty() ? 0.0 : rate);
  }
  return out;
}

// K distinct uniformly drawn source-destination pairs from the largest
// connected component. User ids are 1-based.
inline std::vector<UserPair> random_user_pairs(const DirectedGraph& g,
                                               std::size_t count, Rng& rng) {
  const auto component = largest_component(undirected_adjacency(g));
  if (component.size() < 2)
    throw std::runtime_error("random_user_pairs: component too small");
  const std::size_t max_pairs = component.size() * (component.size() - 1);
  if (count > max_pairs)
    throw std::invalid_argument("random_user_pairs: more pairs than available");

  std::vector<UserPair> users;
  std::set<std::pair<NodeId, NodeId>> seen;
  while (users.size() < count) {
    const NodeId s = component[uniform_index(rng, component.size())];
    const NodeId d = component[uniform_index(rng, component.size())];
    if (s == d || !seen.emplace(s, d).second) continue;
    users.push_back({users.size() + 1, s, d});
  }
  return users;
}

}  // namespace tvcn
