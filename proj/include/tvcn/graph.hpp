#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tvcn {

using NodeId = std::uint32_t;

// Directed simple graph: no self-loops, no parallel edges. Node ids are
// dense creation indices and are never reused. Adjacency lists keep
// insertion order so seeded runs iterate identically across reruns.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::size_t n) {
    while (node_count() < n) add_node();
  }

  NodeId add_node() {
    out_adj_.emplace_back();
    in_adj_.emplace_back();
    return static_cast<NodeId>(out_adj_.size() - 1);
  }

  std::size_t node_count() const { return out_adj_.size(); }
  std::size_t edge_count() const { return edge_index_.size(); }

  bool has_node(NodeId v) const { return v < out_adj_.size(); }

  bool has_edge(NodeId u, NodeId v) const {
    require_node(u);
    require_node(v);
    return edge_index_.count(key(u, v)) > 0;
  }

  // Inserts (u,v). Returns false without change when the edge already exists.
  bool add_edge(NodeId u, NodeId v) {
    require_node(u);
    require_node(v);
    if (u == v) throw std::invalid_argument("add_edge: self-loop rejected");
    auto [it, inserted] = edge_index_.try_emplace(key(u, v), edge_log_.size());
    if (!inserted) return false;
    edge_log_.emplace_back(u, v);
    out_adj_[u].push_back(v);
    in_adj_[v].push_back(u);
    return true;
  }

  // Erases (u,v). Returns false when the edge is absent.
  bool remove_edge(NodeId u, NodeId v) {
    require_node(u);
    require_node(v);
    auto it = edge_index_.find(key(u, v));
    if (it == edge_index_.end()) return false;
    edge_index_.erase(it);
    erase_value(out_adj_[u], v);
    erase_value(in_adj_[v], u);
    return true;
  }

  // Atomic remove+add: (u,v_old) becomes (u,v_new). Returns false when
  // (u,v_old) is absent; throws when the new target is invalid. The graph
  // is untouched on any failure.
  bool rewire_edge(NodeId u, NodeId v_old, NodeId v_new) {
    require_node(u);
    require_node(v_old);
    require_node(v_new);
    if (v_new == u) throw std::invalid_argument("rewire_edge: self-loop target");
    if (edge_index_.count(key(u, v_new)) > 0)
      throw std::invalid_argument("rewire_edge: target edge already present");
    if (edge_index_.count(key(u, v_old)) == 0) return false;
    remove_edge(u, v_old);
    add_edge(u, v_new);
    return true;
  }

  std::size_t out_degree(NodeId v) const {
    require_node(v);
    return out_adj_[v].size();
  }
  std::size_t in_degree(NodeId v) const {
    require_node(v);
    return in_adj_[v].size();
  }
  std::size_t degree(NodeId v) const { return in_degree(v) + out_degree(v); }

  const std::vector<NodeId>& out_neighbors(NodeId v) const {
    require_node(v);
    return out_adj_[v];
  }
  const std::vector<NodeId>& in_neighbors(NodeId v) const {
    require_node(v);
    return in_adj_[v];
  }

  // Live edges in creation order. A rewired edge counts as re-created and
  // moves to the end of the order.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> live;
    live.reserve(edge_index_.size());
    for (std::size_t pos = 0; pos < edge_log_.size(); ++pos) {
      const auto& [u, v] = edge_log_[pos];
      auto it = edge_index_.find(key(u, v));
      if (it != edge_index_.end() && it->second == pos) live.emplace_back(u, v);
    }
    return live;
  }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.out_adj_ == b.out_adj_ && a.in_adj_ == b.in_adj_ &&
           a.edges() == b.edges();
  }

 private:
  static std::uint64_t key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  void require_node(NodeId v) const {
    if (!has_node(v)) throw std::out_of_range("unknown node id");
  }

  static void erase_value(std::vector<NodeId>& vec, NodeId value) {
    vec.erase(std::find(vec.begin(), vec.end(), value));
  }

  std::vector<std::vector<NodeId>> out_adj_;
  std::vector<std::vector<NodeId>> in_adj_;
  std::vector<std::pair<NodeId, NodeId>> edge_log_;  // append-only
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;  // live -> log pos
};

// Frozen copy of a graph taken at a step index. Only const access is
// exposed, so snapshots are safe to share between readers.
class GraphSnapshot {
 public:
  GraphSnapshot(std::size_t timestamp, DirectedGraph graph)
      : timestamp_(timestamp), graph_(std::move(graph)) {}

  std::size_t timestamp() const { return timestamp_; }
  const DirectedGraph& graph() const { return graph_; }

 private:
  std::size_t timestamp_;
  DirectedGraph graph_;
};

inline GraphSnapshot snapshot(const DirectedGraph& g, std::size_t timestamp) {
  return GraphSnapshot(timestamp, g);
}

// Every ordered pair connected. Used as the evolution seed so preferential
// weights start nonzero.
inline DirectedGraph complete_digraph(std::size_t n) {
  DirectedGraph g(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) g.add_edge(u, v);
  return g;
}

// Symmetric 0/1 view over the directed edges: v and w are neighbors when
// either direction exists. Lists are sorted and deduplicated.
inline std::vector<std::vector<NodeId>> undirected_adjacency(
    const DirectedGraph& g) {
  std::vector<std::vector<NodeId>> adj(g.node_count());
  for (const auto& [u, v] : g.edges()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

// Sorted node list of the largest connected component of an undirected
// adjacency (ties go to the component with the smallest root id).
inline std::vector<NodeId> largest_component(
    const std::vector<std::vector<NodeId>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::int32_t> label(n, -1);
  std::int32_t best_label = -1;
  std::size_t best_size = 0;
  std::vector<NodeId> frontier;
  std::int32_t next_label = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (label[root] >= 0) continue;
    frontier.assign(1, root);
    label[root] = next_label;
    std::size_t size = 0;
    while (!frontier.empty()) {
      NodeId v = frontier.back();
      frontier.pop_back();
      ++size;
      for (NodeId w : adj[v]) {
        if (label[w] < 0) {
          label[w] = next_label;
          frontier.push_back(w);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = next_label;
    }
    ++next_label;
  }
  std::vector<NodeId> nodes;
  nodes.reserve(best_size);
  for (NodeId v = 0; v < n; ++v)
    if (label[v] == best_label) nodes.push_back(v);
  return nodes;
}

}  // namespace tvcn
