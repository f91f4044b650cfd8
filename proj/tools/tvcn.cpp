// Command-line front end: evolve networks, analyze degree tails, select
// routes, converge user rates, and run the canned experiment scenarios.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tvcn/analysis.hpp"
#include "tvcn/centrality.hpp"
#include "tvcn/evolution.hpp"
#include "tvcn/experiments.hpp"
#include "tvcn/graph.hpp"
#include "tvcn/io.hpp"
#include "tvcn/rate_control.hpp"
#include "tvcn/routing.hpp"

namespace {

using namespace tvcn;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> beta, gamma, omega, dt;
  std::optional<std::size_t> n0, x, steps;
  std::string users_directive;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "RNG seed override");
  cmd->add_option("--beta", opts.beta, "fraction of newly added links");
  cmd->add_option("--gamma", opts.gamma, "rewired fraction of altered links");
  cmd->add_option("--x", opts.x, "links handled per step");
  cmd->add_option("--n0", opts.n0, "seed network size");
  cmd->add_option("--steps", opts.steps, "evolution steps");
  cmd->add_option("--users", opts.users_directive,
                  "user pairs: CSV path or \"random:K\"");
  cmd->add_option("--omega", opts.omega, "link price exponent");
  cmd->add_option("--dt", opts.dt, "Euler step size");
}

ScenarioConfig make_config(const CommonOpts& opts) {
  ScenarioConfig cfg;
  if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
  if (opts.seed) cfg.evolution.seed = *opts.seed;
  if (opts.beta) cfg.evolution.beta = *opts.beta;
  if (opts.gamma) cfg.evolution.gamma = *opts.gamma;
  if (opts.x) cfg.evolution.x = *opts.x;
  if (opts.n0) cfg.evolution.n0 = *opts.n0;
  if (opts.steps) cfg.evolution.steps = *opts.steps;
  if (opts.omega) cfg.rate.omega = *opts.omega;
  if (opts.dt) cfg.rate.dt = *opts.dt;
  if (!opts.users_directive.empty()) {
    const auto& d = opts.users_directive;
    const auto sep = d.find_first_of(": ");
    if (d.rfind("random", 0) == 0 && sep != std::string::npos) {
      cfg.users.random_count = std::stoull(d.substr(sep + 1));
      cfg.users.pairs.clear();
    } else {
      cfg.users.pairs = load_user_pairs(d);
      cfg.users.random_count = 0;
    }
  }
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  return cfg;
}

std::filesystem::path out_path(const ScenarioConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir.empty() ? "out" : cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_evolve(const CommonOpts& opts) {
  const ScenarioConfig cfg = make_config(opts);
  const auto dir = out_path(cfg);
  const EvolveRun run = evolve_run(cfg.evolution, 0, true);
  save_graph(dir / "graph.json", run.graph, cfg.evolution);
  CsvWriter csv(dir / "steps.csv",
                {"step", "n_add", "n_rewire", "n_delete", "edge_count"});
  for (const auto& r : run.reports)
    csv.row({std::to_string(r.step), std::to_string(r.added_links),
             std::to_string(r.rewired_links), std::to_string(r.deleted_links),
             std::to_string(r.edge_count)});
  std::cout << "evolved " << run.graph.node_count() << " nodes, "
            << run.graph.edge_count() << " edges -> " << (dir / "graph.json")
            << "\n";
  return 0;
}

int cmd_analyze(const std::string& graph_path, const CommonOpts& opts,
                std::size_t k_min, const std::string& mode_name) {
  const ScenarioConfig cfg = make_config(opts);
  const auto dir = out_path(cfg);
  const GraphFile file = load_graph(graph_path);

  const DegreeMode mode = mode_name == "out"     ? DegreeMode::Out
                          : mode_name == "total" ? DegreeMode::Total
                                                 : DegreeMode::In;
  const auto hist = degree_distribution(file.graph, mode);
  {
    CsvWriter csv(dir / "degree_distribution.csv", {"k", "count", "pdf", "ccdf"});
    double tail = 1.0;
    for (const auto& [k, count] : hist.counts) {
      const double pdf = static_cast<double>(count) /
                         static_cast<double>(hist.total);
      csv.row({std::to_string(k), std::to_string(count), format_double(pdf),
               format_double(tail)});
      tail -= pdf;
    }
  }

  const auto theory = theoretical_exponents(file.params);
  const auto report = compare_sim_theory(file.params, file.graph, k_min);
  CsvWriter csv(dir / "sim_theory.csv",
                {"beta", "gamma", "x", "c", "theta1", "theta2", "alpha_theory",
                 "alpha_sim", "gap"});
  csv.row({format_double(file.params.beta), format_double(file.params.gamma),
           std::to_string(file.params.x), format_double(theory.c),
           format_double(theory.theta1), format_double(theory.theta2),
           format_double(report.alpha_theory), format_double(report.alpha_sim),
           format_double(report.abs_gap)});
  std::cout << "alpha_sim=" << format_double(report.alpha_sim)
            << " alpha_theory=" << format_double(report.alpha_theory)
            << " gap=" << format_double(report.abs_gap) << "\n";
  return 0;
}

std::vector<UserPair> users_for(const ScenarioConfig& cfg,
                                const DirectedGraph& g) {
  Rng rng(mix_seed(cfg.evolution.seed, kUserStreamTag));
  return resolve_users(cfg.users, g, rng);
}

int cmd_route(const std::string& graph_path, const CommonOpts& opts) {
  const ScenarioConfig cfg = make_config(opts);
  const auto dir = out_path(cfg);
  const GraphFile file = load_graph(graph_path);
  const auto scores = compute_centralities(file.graph);
  const auto adj = undirected_adjacency(file.graph);
  const auto users = users_for(cfg, file.graph);

  {
    CsvWriter csv(dir / "centrality.csv", {"node", "g", "x", "reputation"});
    for (std::size_t v = 0; v < scores.size(); ++v)
      csv.row({std::to_string(v), format_double(scores.betweenness[v]),
               format_double(scores.eigenvector[v]),
               format_double(scores.reputation[v])});
  }

  CsvWriter csv(dir / "routes.csv",
                {"user", "source", "dest", "path_length", "num_geodesics",
                 "theta_gr_min", "theta_gr_max", "min_path", "max_path"});
  auto join = [](const std::vector<NodeId>& nodes) {
    std::string s;
    for (NodeId v : nodes) {
      if (!s.empty()) s += '-';
      s += std::to_string(v);
    }
    return s;
  };
  for (const auto& user : users) {
    try {
      const auto paths = all_shortest_paths(adj, user.source, user.dest);
      const auto extremes = select_extremal_paths(paths, scores);
      csv.row({std::to_string(user.user_id), std::to_string(user.source),
               std::to_string(user.dest),
               std::to_string(extremes.min_path.length()),
               std::to_string(paths.size()),
               format_double(extremes.min_path.score.theta_gr),
               format_double(extremes.max_path.score.theta_gr),
               join(extremes.min_path.nodes), join(extremes.max_path.nodes)});
    } catch (const NoRouteError&) {
      csv.row({std::to_string(user.user_id), std::to_string(user.source),
               std::to_string(user.dest), "0", "0", "", "", "", ""});
      std::cerr << "user " << user.user_id << ": no route\n";
    }
  }
  std::cout << "routes for " << users.size() << " users -> "
            << (dir / "routes.csv") << "\n";
  return 0;
}

int cmd_rates(const std::string& graph_path, const CommonOpts& opts,
              std::size_t trace_interval) {
  ScenarioConfig cfg = make_config(opts);
  cfg.rate.trace_interval = trace_interval;
  const auto dir = out_path(cfg);
  const GraphFile file = load_graph(graph_path);
  const auto scores = compute_centralities(file.graph);
  const auto adj = undirected_adjacency(file.graph);
  const auto users = users_for(cfg, file.graph);

  std::vector<UserPair> routed;
  std::vector<std::vector<NodeId>> paths;
  for (const auto& user : users) {
    try {
      const auto candidates = all_shortest_paths(adj, user.source, user.dest);
      paths.push_back(select_extremal_paths(candidates, scores).min_path.nodes);
      routed.push_back(user);
    } catch (const NoRouteError&) {
      std::cerr << "user " << user.user_id << ": no route, skipped\n";
    }
  }

  const auto x0 = initial_rates(paths, file.graph);
  std::vector<UserSession> sessions(routed.size());
  Rng gain_rng(mix_seed(cfg.evolution.seed, kGainStreamTag));
  for (std::size_t i = 0; i < routed.size(); ++i) {
    sessions[i].user_id = routed[i].user_id;
    sessions[i].route = paths[i];
    sessions[i].rate = x0[i];
    sessions[i].pay = willingness_to_pay(x0[i], cfg.rate.pay_a, cfg.rate.pay_b);
    if (sessions[i].pay == 0.0)
      std::cerr << "user " << routed[i].user_id
                << ": zero willingness to pay, rate will stay 0\n";
  }
  assign_gains(sessions, gain_rng);
  auto incidence = build_incidence(file.graph, std::move(sessions),
                                   cfg.capacity);
  const auto result = integrate(incidence, cfg.rate);

  CsvWriter summary(dir / "rates_summary.csv",
                    {"user_id", "x_star", "residual", "converged"});
  for (std::size_t i = 0; i < incidence.users.size(); ++i)
    summary.row({std::to_string(incidence.users[i].user_id),
                 format_double(result.x_star[i]),
                 format_double(result.residuals[i]),
                 result.converged ? "1" : "0"});

  if (cfg.rate.trace_interval > 0) {
    CsvWriter traj(dir / "rates_trajectory.csv",
                   {"t", "user_id", "x_r", "psi_r"});
    for (const auto& user : incidence.users)
      for (const auto& [t, x, psi] : user.trajectory)
        traj.row({format_double(t), std::to_string(user.user_id),
                  format_double(x), format_double(psi)});
  }
  std::size_t zeros = 0;
  const double objective = network_objective(incidence.users, &zeros);
  std::cout << "converged=" << (result.converged ? "yes" : "no")
            << " max_residual=" << format_double(result.max_residual)
            << " objective=" << format_double(objective)
            << " zero_rate_users=" << zeros << "\n";
  return 0;
}

int cmd_experiment(const std::string& kind, const CommonOpts& opts) {
  const ScenarioConfig cfg = make_config(opts);
  if (kind == "degree") {
    const auto rows = run_degree_experiment(cfg);
    for (const auto& r : rows)
      std::cout << "beta=" << format_double(r.beta)
                << " gamma=" << format_double(r.gamma) << " N=" << r.size
                << " alpha_sim=" << format_double(r.alpha_sim)
                << " alpha_theory=" << format_double(r.alpha_theory)
                << " gap=" << format_double(r.gap) << "\n";
  } else if (kind == "trace") {
    const auto rows = run_rate_trace_experiment(cfg);
    std::cout << rows.size() << " trace rows -> " << cfg.out_dir << "\n";
  } else if (kind == "extremal") {
    const auto report = run_extremal_comparison(cfg);
    std::size_t wins = 0;
    for (const auto& r : report.by_theta_gr)
      if (r.x_star_min >= r.x_star_max) ++wins;
    std::cout << report.by_theta_gr.size() << " users, min-path rate >= "
              << "max-path rate for " << wins << " -> " << cfg.out_dir << "\n";
  } else {
    std::cerr << "unknown experiment kind: " << kind << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-varying network simulator and rate-control toolkit"};
  app.require_subcommand(1);

  CommonOpts evolve_opts;
  auto* evolve_cmd = app.add_subcommand("evolve", "grow a network");
  add_common(evolve_cmd, evolve_opts);

  CommonOpts analyze_opts;
  std::string analyze_graph;
  std::size_t analyze_kmin = 5;
  std::string analyze_mode = "in";
  auto* analyze_cmd =
      app.add_subcommand("analyze", "degree distribution and tail exponents");
  analyze_cmd->add_option("--graph", analyze_graph, "graph JSON file")
      ->required();
  analyze_cmd->add_option("--kmin", analyze_kmin, "fit threshold degree");
  analyze_cmd->add_option("--mode", analyze_mode, "in|out|total");
  add_common(analyze_cmd, analyze_opts);

  CommonOpts route_opts;
  std::string route_graph;
  auto* route_cmd =
      app.add_subcommand("route", "centralities and extremal geodesics");
  route_cmd->add_option("--graph", route_graph, "graph JSON file")->required();
  add_common(route_cmd, route_opts);

  CommonOpts rates_opts;
  std::string rates_graph;
  std::size_t rates_trace = 0;
  auto* rates_cmd =
      app.add_subcommand("rates", "converge user rates on selected routes");
  rates_cmd->add_option("--graph", rates_graph, "graph JSON file")->required();
  rates_cmd->add_option("--trace-interval", rates_trace,
                        "steps between trajectory samples (0 = off)");
  add_common(rates_cmd, rates_opts);

  CommonOpts exp_opts;
  std::string exp_kind;
  auto* exp_cmd = app.add_subcommand("experiment", "canned scenario runner");
  exp_cmd->add_option("kind", exp_kind, "degree|trace|extremal")->required();
  add_common(exp_cmd, exp_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve_cmd->parsed()) return cmd_evolve(evolve_opts);
    if (analyze_cmd->parsed())
      return cmd_analyze(analyze_graph, analyze_opts, analyze_kmin,
                         analyze_mode);
    if (route_cmd->parsed()) return cmd_route(route_graph, route_opts);
    if (rates_cmd->parsed())
      return cmd_rates(rates_graph, rates_opts, rates_trace);
    if (exp_cmd->parsed()) return cmd_experiment(exp_kind, exp_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
