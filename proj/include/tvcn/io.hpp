#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tvcn/evolution.hpp"
#include "tvcn/graph.hpp"
#include "tvcn/routing.hpp"

namespace tvcn {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Graph file schema: {"n0": .., "steps": .., "params": {..}, "edges": [[u,v]..]}
// with edges listed in creation order, so loading rebuilds the exact
// adjacency structure.
inline nlohmann::json graph_to_json(const DirectedGraph& g,
                                    const EvolutionParams& params) {
  nlohmann::json j;
  j["n0"] = params.n0;
  j["steps"] = params.steps;
  j["params"] = {{"n0", params.n0},     {"x", params.x},
                 {"beta", params.beta}, {"gamma", params.gamma},
                 {"steps", params.steps}, {"seed", params.seed}};
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  return j;
}

struct GraphFile {
  DirectedGraph graph;
  EvolutionParams params;
};

inline GraphFile graph_from_json(const nlohmann::json& j) {
  GraphFile file;
  const auto& p = j.at("params");
  file.params.n0 = p.at("n0").get<std::size_t>();
  file.params.x = p.at("x").get<std::size_t>();
  file.params.beta = p.at("beta").get<double>();
  file.params.gamma = p.at("gamma").get<double>();
  file.params.steps = p.at("steps").get<std::size_t>();
  file.params.seed = p.at("seed").get<std::uint64_t>();
  const auto n0 = j.at("n0").get<std::size_t>();
  const auto steps = j.at("steps").get<std::size_t>();
  file.graph = DirectedGraph(n0 + steps);
  for (const auto& e : j.at("edges"))
    file.graph.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
  return file;
}

inline void save_graph(const std::filesystem::path& path,
                       const DirectedGraph& g, const EvolutionParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << graph_to_json(g, params).dump(2) << '\n';
}

inline GraphFile load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  in >> j;
  return graph_from_json(j);
}

// Minimal CSV emission: one fixed header, rows of preformatted cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            std::initializer_list<std::string_view> header)
      : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    bool first = true;
    for (auto col : header) {
      if (!first) out_ << ',';
      out_ << col;
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    bool first = true;
    for (const auto& cell : cells) {
      if (!first) out_ << ',';
      out_ << cell;
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

// Reads user pairs from CSV lines "user_id,source,dest". A non-numeric
// first line is treated as a header and skipped.
inline std::vector<UserPair> load_user_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<UserPair> users;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.find_first_not_of("0123456789,.- \r") != std::string::npos) {
      first = false;
      continue;
    }
    first = false;
    std::istringstream row(line);
    std::string cell;
    UserPair user;
    if (!std::getline(row, cell, ',')) continue;
    user.user_id = std::stoull(cell);
    if (!std::getline(row, cell, ',')) continue;
    user.source = static_cast<NodeId>(std::stoul(cell));
    if (!std::getline(row, cell, ','))
      throw std::runtime_error("user pair line missing destination: " + line);
    user.dest = static_cast<NodeId>(std::stoul(cell));
    users.push_back(user);
  }
  return users;
}

inline void save_user_pairs(const std::filesystem::path& path,
                            const std::vector<UserPair>& users) {
  CsvWriter csv(path, {"user_id", "source", "dest"});
  for (const auto& u : users)
    csv.row({std::to_string(u.user_id), std::to_string(u.source),
             std::to_string(u.dest)});
}

}  // namespace tvcn
