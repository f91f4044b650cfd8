#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tvcn/analysis.hpp"
#include "tvcn/centrality.hpp"
#include "tvcn/evolution.hpp"
#include "tvcn/graph.hpp"
#include "tvcn/io.hpp"
#include "tvcn/rate_control.hpp"
#include "tvcn/routing.hpp"

namespace tvcn {

// Sub-stream tags hung off the configured seed, so user sampling, gain
// assignment and per-cell evolutions draw from decoupled generators.
inline constexpr std::uint64_t kUserStreamTag = 1;
inline constexpr std::uint64_t kGainStreamTag = 2;
inline constexpr std::uint64_t kCellStreamTag = 100;

// Either an explicit pair list or a "random K" directive.
struct UserSpec {
  std::size_t random_count = 0;
  std::vector<UserPair> pairs;

  bool is_random() const { return pairs.empty(); }
};

struct ScenarioConfig {
  EvolutionParams evolution;
  RateParams rate;
  CapacityModel capacity;
  UserSpec users{20, {}};
  std::size_t snapshot_interval = 500;  // evolution steps per rate epoch
  std::size_t epochs = 5;
  std::vector<std::size_t> sizes{500, 2000};  // 10^4 works, just slower
  std::vector<std::pair<double, double>> cells{
      {0.5, 0.5}, {0.6, 0.5}, {0.25, 0.7}, {0.9, 0.9}};
  std::size_t fit_k_min = 5;
  std::string out_dir;  // empty: compute only, write nothing

  void validate() const {
    evolution.validate();
    rate.validate();
    capacity.validate();
    if (snapshot_interval < 1)
      throw std::invalid_argument("config: snapshot_interval must be >= 1");
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  }
};

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  if (j.contains("evolution")) {
    const auto& e = j.at("evolution");
    cfg.evolution.n0 = e.value("n0", cfg.evolution.n0);
    cfg.evolution.x = e.value("x", cfg.evolution.x);
    cfg.evolution.beta = e.value("beta", cfg.evolution.beta);
    cfg.evolution.gamma = e.value("gamma", cfg.evolution.gamma);
    cfg.evolution.steps = e.value("steps", cfg.evolution.steps);
    cfg.evolution.seed = e.value("seed", cfg.evolution.seed);
  }
  if (j.contains("rate")) {
    const auto& r = j.at("rate");
    cfg.rate.pay_a = r.value("pay_a", cfg.rate.pay_a);
    cfg.rate.pay_b = r.value("pay_b", cfg.rate.pay_b);
    cfg.rate.omega = r.value("omega", cfg.rate.omega);
    cfg.rate.dt = r.value("dt", cfg.rate.dt);
    cfg.rate.t_max = r.value("t_max", cfg.rate.t_max);
    cfg.rate.tol = r.value("tol", cfg.rate.tol);
    cfg.rate.trace_interval = r.value("trace_interval", cfg.rate.trace_interval);
  }
  if (j.contains("capacity")) {
    const auto& c = j.at("capacity");
    cfg.capacity.coefficient = c.value("b", cfg.capacity.coefficient);
    cfg.capacity.exponent = c.value("exponent", cfg.capacity.exponent);
  }
  if (j.contains("users")) {
    const auto& u = j.at("users");
    if (u.contains("random")) {
      cfg.users.random_count = u.at("random").get<std::size_t>();
      cfg.users.pairs.clear();
    } else if (u.contains("pairs")) {
      cfg.users.pairs.clear();
      for (const auto& p : u.at("pairs"))
        cfg.users.pairs.push_back({p.at(0).get<std::size_t>(),
                                   p.at(1).get<NodeId>(),
                                   p.at(2).get<NodeId>()});
      cfg.users.random_count = 0;
    } else if (u.contains("csv")) {
      cfg.users.pairs = load_user_pairs(u.at("csv").get<std::string>());
      cfg.users.random_count = 0;
    }
  }
  cfg.snapshot_interval = j.value("snapshot_interval", cfg.snapshot_interval);
  cfg.epochs = j.value("epochs", cfg.epochs);
  if (j.contains("sizes"))
    cfg.sizes = j.at("sizes").get<std::vector<std::size_t>>();
  if (j.contains("cells")) {
    cfg.cells.clear();
    for (const auto& c : j.at("cells"))
      cfg.cells.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  }
  cfg.fit_k_min = j.value("fit_kmin", cfg.fit_k_min);
  cfg.out_dir = j.value("out", cfg.out_dir);
  return cfg;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

inline std::vector<UserPair> resolve_users(const UserSpec& spec,
                                           const DirectedGraph& g, Rng& rng) {
  if (!spec.is_random()) {
    for (const auto& u : spec.pairs) {
      if (!g.has_node(u.source) || !g.has_node(u.dest))
        throw std::out_of_range("user pair references unknown node");
      if (u.source == u.dest)
        throw std::invalid_argument("user pair with equal endpoints");
    }
    return spec.pairs;
  }
  return random_user_pairs(g, spec.random_count, rng);
}

namespace detail {

// Builds sessions for the given per-user paths, derives starting rates and
// payments, integrates, and returns the converged rates. Zero-pay users
// (capacity-starved paths) ride along and finish at exactly zero.
inline std::vector<double> converge_rates(
    const DirectedGraph& g, const std::vector<UserPair>& users,
    const std::vector<std::vector<NodeId>>& paths,
    const std::vector<double>& gains, const CapacityModel& capacity,
    const RateParams& rate) {
  const auto x0 = initial_rates(paths, g);
  std::vector<UserSession> sessions(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    sessions[i].user_id = users[i].user_id;
    sessions[i].route = paths[i];
    sessions[i].rate = x0[i];
    sessions[i].pay = willingness_to_pay(x0[i], rate.pay_a, rate.pay_b);
    sessions[i].gain = gains[i];
  }
  auto incidence = build_incidence(g, std::move(sessions), capacity);
  return integrate(incidence, rate).x_star;
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path path(dir);
  std::filesystem::create_directories(path);
  return path;
}

}  // namespace detail

struct DegreeExperimentRow {
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t x = 0;
  std::size_t size = 0;
  double c = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha_theory = 0.0;
  double alpha_sim = 0.0;
  double gap = 0.0;
};

// Evolves one graph per (beta, gamma) cell and target size, writes the
// in-degree distribution of each, and tabulates fitted vs predicted tail
// exponents.
inline std::vector<DegreeExperimentRow> run_degree_experiment(
    const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<DegreeExperimentRow> rows;
  const bool write = !cfg.out_dir.empty();
  std::filesystem::path dir;
  if (write) dir = detail::prepare_out_dir(cfg.out_dir);

  std::uint64_t run_index = 0;
  for (const auto& [beta, gamma] : cfg.cells) {
    for (std::size_t n : cfg.sizes) {
      EvolutionParams params = cfg.evolution;
      params.beta = beta;
      params.gamma = gamma;
      if (n <= params.n0)
        throw std::invalid_argument("degree experiment: size below seed");
      params.steps = n - params.n0;
      params.seed = mix_seed(cfg.evolution.seed, kCellStreamTag + run_index);
      ++run_index;

      const DirectedGraph g = evolve(params);
      const auto hist = degree_distribution(g, DegreeMode::In);
      const auto theory = theoretical_exponents(params);

      DegreeExperimentRow row;
      row.beta = beta;
      row.gamma = gamma;
      row.x = params.x;
      row.size = n;
      row.c = theory.c;
      row.theta1 = theory.theta1;
      row.theta2 = theory.theta2;
      row.alpha_theory = theory.alpha;
      // A cell whose histogram is too degenerate to fit still gets its
      // row; the fitted column goes NaN instead of aborting the sweep.
      try {
        row.alpha_sim = fit_power_law(hist, cfg.fit_k_min).alpha;
        row.gap = std::abs(row.alpha_sim - theory.alpha);
      } catch (const std::invalid_argument&) {
        row.alpha_sim = std::numeric_limits<double>::quiet_NaN();
        row.gap = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(row);

      if (write) {
        const std::string name = "degree_b" + format_double(beta) + "_g" +
                                 format_double(gamma) + "_N" +
                                 std::to_string(n) + ".csv";
        CsvWriter csv(dir / name, {"k", "count", "pdf", "ccdf"});
        double tail = 1.0;
        const double total = static_cast<double>(hist.total);
        for (const auto& [k, count] : hist.counts) {
          const double pdf = static_cast<double>(count) / total;
          csv.row({std::to_string(k), std::to_string(count),
                   format_double(pdf), format_double(tail)});
          tail -= pdf;
        }
      }
    }
  }

  if (write) {
    CsvWriter csv(dir / "sim_theory.csv",
                  {"beta", "gamma", "x", "c", "theta1", "theta2",
                   "alpha_theory", "alpha_sim", "gap"});
    for (const auto& r : rows)
      csv.row({format_double(r.beta), format_double(r.gamma),
               std::to_string(r.x), format_double(r.c), format_double(r.theta1),
               format_double(r.theta2), format_double(r.alpha_theory),
               format_double(r.alpha_sim), format_double(r.gap)});
  }
  return rows;
}

struct TraceRow {
  std::size_t epoch = 0;
  std::size_t user_id = 0;
  double x_star = 0.0;
  bool routed = true;
};

// Builds the initial network with `evolution.steps` steps and draws the
// user set from it, then grows the network in snapshot_interval-step
// epochs; after each epoch the centralities, routes and capacities are
// recomputed from scratch and the fixed user set re-converges from fresh
// starting rates.
inline std::vector<TraceRow> run_rate_trace_experiment(
    const ScenarioConfig& cfg) {
  cfg.validate();
  DirectedGraph g = complete_digraph(cfg.evolution.n0);
  Rng evolve_rng(cfg.evolution.seed);
  for (std::size_t s = 1; s <= cfg.evolution.steps; ++s)
    evolve_step(g, cfg.evolution, evolve_rng, s);

  Rng user_rng(mix_seed(cfg.evolution.seed, kUserStreamTag));
  const std::vector<UserPair> users = resolve_users(cfg.users, g, user_rng);
  Rng gain_rng(mix_seed(cfg.evolution.seed, kGainStreamTag));
  std::vector<double> gains(users.size());
  for (auto& gain : gains) gain = uniform_real(gain_rng, 1.0, 10.0);

  std::vector<TraceRow> rows;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t s = 1; s <= cfg.snapshot_interval; ++s)
      evolve_step(g, cfg.evolution, evolve_rng,
                  cfg.evolution.steps + (epoch - 1) * cfg.snapshot_interval + s);

    const auto scores = compute_centralities(g);
    const auto adj = undirected_adjacency(g);

    std::vector<UserPair> routed;
    std::vector<std::vector<NodeId>> paths;
    std::vector<double> routed_gains;
    std::vector<std::optional<double>> per_user(users.size());
    std::vector<std::size_t> routed_index;
    for (std::size_t i = 0; i < users.size(); ++i) {
      try {
        const auto candidates = all_shortest_paths(adj, users[i].source,
                                                   users[i].dest);
        paths.push_back(select_extremal_paths(candidates, scores).min_path.nodes);
        routed.push_back(users[i]);
        routed_gains.push_back(gains[i]);
        routed_index.push_back(i);
      } catch (const NoRouteError&) {
        per_user[i] = std::nullopt;
      }
    }
    if (!routed.empty()) {
      const auto x_star = detail::converge_rates(g, routed, paths, routed_gains,
                                                 cfg.capacity, cfg.rate);
      for (std::size_t k = 0; k < routed.size(); ++k)
        per_user[routed_index[k]] = x_star[k];
    }
    for (std::size_t i = 0; i < users.size(); ++i)
      rows.push_back({epoch, users[i].user_id, per_user[i].value_or(0.0),
                      per_user[i].has_value()});
  }

  if (!cfg.out_dir.empty()) {
    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    save_user_pairs(dir / "trace_users.csv", users);
    CsvWriter csv(dir / "rate_trace.csv",
                  {"epoch", "user_id", "x_star", "status"});
    for (const auto& r : rows)
      csv.row({std::to_string(r.epoch), std::to_string(r.user_id),
               format_double(r.x_star), r.routed ? "ok" : "no_route"});
  }
  return rows;
}

enum class PathSelector { ThetaGr, ThetaG, ThetaR };

inline double selector_key(PathSelector sel, const PathScore& s) {
  switch (sel) {
    case PathSelector::ThetaGr: return s.theta_gr;
    case PathSelector::ThetaG: return s.theta_g;
    default: return s.theta_r;
  }
}

struct ExtremalRow {
  std::size_t user_id = 0;
  NodeId source = 0;
  NodeId dest = 0;
  std::size_t path_length = 0;
  double theta_min = 0.0;
  double x_star_min = 0.0;
  double theta_max = 0.0;
  double x_star_max = 0.0;
};

struct ExtremalReport {
  std::vector<ExtremalRow> by_theta_gr;
  std::vector<ExtremalRow> by_theta_g;
  std::vector<ExtremalRow> by_theta_r;
};

// For every user, picks the score-minimizing and score-maximizing geodesic
// under each path score, then converges rates twice per score: once with
// every user on their minimal path, once with every user on their maximal
// path.
inline ExtremalReport run_extremal_comparison(const ScenarioConfig& cfg) {
  cfg.validate();
  const DirectedGraph g = evolve(cfg.evolution);
  const auto scores = compute_centralities(g);
  const auto adj = undirected_adjacency(g);

  Rng user_rng(mix_seed(cfg.evolution.seed, kUserStreamTag));
  const auto users = resolve_users(cfg.users, g, user_rng);
  Rng gain_rng(mix_seed(cfg.evolution.seed, kGainStreamTag));
  std::vector<double> gains(users.size());
  for (auto& gain : gains) gain = uniform_real(gain_rng, 1.0, 10.0);

  std::vector<UserPair> routable;
  std::vector<double> routable_gains;
  std::vector<std::vector<std::vector<NodeId>>> geodesics;
  for (std::size_t i = 0; i < users.size(); ++i) {
    try {
      geodesics.push_back(all_shortest_paths(adj, users[i].source,
                                             users[i].dest));
      routable.push_back(users[i]);
      routable_gains.push_back(gains[i]);
    } catch (const NoRouteError&) {
      // unroutable pairs are dropped from the report
    }
  }

  ExtremalReport report;
  for (PathSelector sel : {PathSelector::ThetaGr, PathSelector::ThetaG,
                           PathSelector::ThetaR}) {
    std::vector<std::vector<NodeId>> min_paths, max_paths;
    std::vector<ExtremalRow> rows(routable.size());
    for (std::size_t i = 0; i < routable.size(); ++i) {
      const auto extremes = select_extremal_paths_by(
          geodesics[i], scores,
          [sel](const PathScore& s) { return selector_key(sel, s); });
      min_paths.push_back(extremes.min_path.nodes);
      max_paths.push_back(extremes.max_path.nodes);
      rows[i].user_id = routable[i].user_id;
      rows[i].source = routable[i].source;
      rows[i].dest = routable[i].dest;
      rows[i].path_length = extremes.min_path.length();
      rows[i].theta_min = selector_key(sel, extremes.min_path.score);
      rows[i].theta_max = selector_key(sel, extremes.max_path.score);
    }
    const auto x_min = detail::converge_rates(g, routable, min_paths,
                                              routable_gains, cfg.capacity,
                                              cfg.rate);
    const auto x_max = detail::converge_rates(g, routable, max_paths,
                                              routable_gains, cfg.capacity,
                                              cfg.rate);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].x_star_min = x_min[i];
      rows[i].x_star_max = x_max[i];
    }
    if (sel == PathSelector::ThetaGr)
      report.by_theta_gr = std::move(rows);
    else if (sel == PathSelector::ThetaG)
      report.by_theta_g = std::move(rows);
    else
      report.by_theta_r = std::move(rows);
  }

  if (!cfg.out_dir.empty()) {
    const auto dir = detail::prepare_out_dir(cfg.out_dir);
    save_user_pairs(dir / "extremal_users.csv", users);
    const auto dump = [&](const std::vector<ExtremalRow>& rows,
                          const std::string& file, const std::string& theta) {
      CsvWriter csv(dir / file,
                    {"user", "source", "dest", "path_length",
                     theta + "_min", "x_star_min", theta + "_max",
                     "x_star_max"});
      for (const auto& r : rows)
        csv.row({std::to_string(r.user_id), std::to_string(r.source),
                 std::to_string(r.dest), std::to_string(r.path_length),
                 format_double(r.theta_min), format_double(r.x_star_min),
                 format_double(r.theta_max), format_double(r.x_star_max)});
    };
    dump(report.by_theta_gr, "extremal_theta_gr.csv", "theta_gr");
    dump(report.by_theta_g, "extremal_theta_g.csv", "theta_g");
    dump(report.by_theta_r, "extremal_theta_r.csv", "theta_r");
  }
  return report;
}

}  // namespace tvcn
