#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvcn/graph.hpp"
#include "tvcn/random.hpp"
#include "tvcn/routing.hpp"

namespace tvcn {

struct RateParams {
  double pay_a = 5.0;   // willingness saturation level, a > 0
  double pay_b = 0.5;   // willingness knee, 0 < b < 1
  double omega = 2.0;   // price exponent
  double dt = 0.01;
  double t_max = 1000.0;
  double tol = 1e-6;
  std::size_t trace_interval = 0;  // Euler steps between samples; 0 = off
  double divergence_limit = 1e6;

  void validate() const {
    if (pay_a <= 0.0) throw std::invalid_argument("rate: pay_a must be positive");
    if (!(pay_b > 0.0 && pay_b < 1.0))
      throw std::invalid_argument("rate: pay_b must be in (0, 1)");
    if (omega <= 0.0) throw std::invalid_argument("rate: omega must be positive");
    if (dt <= 0.0) throw std::invalid_argument("rate: dt must be positive");
    if (t_max <= 0.0) throw std::invalid_argument("rate: t_max must be positive");
    if (tol <= 0.0) throw std::invalid_argument("rate: tol must be positive");
  }
};

struct UserSession {
  std::size_t user_id = 0;
  std::vector<NodeId> route;  // node sequence, length >= 2
  double pay = 0.0;           // fixed for the run
  double gain = 1.0;
  double rate = 0.0;          // initial rate in, converged rate out
  // Sampled (t, rate, route price) triples when tracing is enabled.
  std::vector<std::array<double, 3>> trajectory;
};

// One-shot payment commitment derived from the starting rate; saturates at
// `a` for large rates and vanishes with the rate.
inline double willingness_to_pay(double initial_rate, double a, double b) {
  if (initial_rate < 0.0)
    throw std::invalid_argument("willingness_to_pay: negative rate");
  if (a <= 0.0 || !(b > 0.0 && b < 1.0))
    throw std::invalid_argument("willingness_to_pay: bad coefficients");
  return initial_rate * a / (initial_rate + b);
}

// Congestion feedback of one link: (flow / capacity)^omega.
inline double link_price(double flow, double capacity, double omega) {
  if (capacity <= 0.0)
    throw std::invalid_argument("link_price: capacity must be positive");
  if (flow < 0.0) throw std::invalid_argument("link_price: negative flow");
  return std::pow(flow / capacity, omega);
}

inline void assign_gains(std::span<UserSession> users, Rng& rng) {
  for (auto& user : users) user.gain = uniform_real(rng, 1.0, 10.0);
}

// Shared-link bookkeeping for a set of routed sessions. Links are keyed by
// their unordered endpoints: flows aggregate regardless of the traversal
// direction.
struct RouteIncidence {
  std::vector<UserSession> users;
  std::vector<std::pair<NodeId, NodeId>> links;      // sorted unique, a < b
  std::vector<double> capacities;                    // per link
  std::vector<std::vector<std::size_t>> link_users;  // per link: user indices
  std::vector<std::vector<std::size_t>> user_links;  // per user: link indices
};

inline RouteIncidence build_incidence(const DirectedGraph& g,
                                      std::vector<UserSession> users,
                                      const CapacityModel& capacity = {}) {
  capacity.validate();
  RouteIncidence inc;
  std::map<std::pair<NodeId, NodeId>, std::size_t> index;
  inc.user_links.resize(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto& route = users[u].route;
    if (route.size() < 2)
      throw std::invalid_argument("build_incidence: route must span a link");
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
      const NodeId a = route[i], b = route[i + 1];
      if (!g.has_edge(a, b) && !g.has_edge(b, a))
        throw std::invalid_argument("build_incidence: route uses missing link");
      const auto k = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({k.first, k.second},
                                              inc.links.size());
      if (inserted) {
        inc.links.emplace_back(k.first, k.second);
        inc.capacities.push_back(link_capacity(g, k.first, k.second, capacity));
        inc.link_users.emplace_back();
      }
      inc.link_users[it->second].push_back(u);
      inc.user_links[u].push_back(it->second);
    }
  }
  inc.users = std::move(users);
  return inc;
}

inline double route_price(const RouteIncidence& inc, std::size_t user,
                          std::span<const double> link_prices) {
  if (inc.user_links.at(user).empty())
    throw std::invalid_argument("route_price: empty route");
  double total = 0.0;
  for (std::size_t link : inc.user_links[user]) total += link_prices[link];
  return total;
}

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationResult {
  std::vector<double> x_star;     // converged per-user rates
  std::vector<double> residuals;  // |pay - rate * route price| per user
  double max_residual = 0.0;
  bool converged = false;
  double t_end = 0.0;
  std::size_t steps = 0;
  std::size_t clamp_events = 0;  // negative-rate clamps (should stay 0)
};

// Explicit Euler on dx/dt = gain * (pay - x * route_price), link prices
// recomputed from aggregate flows every step. Stops when the largest rate
// change per unit time drops below tol or t_max is reached. Users whose
// capacity-starved paths left them with zero pay simply decay to zero.
inline IntegrationResult integrate(RouteIncidence& inc,
                                   const RateParams& params) {
  params.validate();
  const std::size_t n_users = inc.users.size();
  const std::size_t n_links = inc.links.size();
  for (double c : inc.capacities)
    if (c <= 0.0)
      throw std::invalid_argument("integrate: zero-capacity link in use");

  std::vector<double> prices(n_links, 0.0);
  std::vector<double> user_price(n_users, 0.0);

  auto reprice = [&] {
    for (std::size_t e = 0; e < n_links; ++e) {
      double flow = 0.0;
      for (std::size_t u : inc.link_users[e]) flow += inc.users[u].rate;
      prices[e] = link_price(flow, inc.capacities[e], params.omega);
    }
    for (std::size_t u = 0; u < n_users; ++u)
      user_price[u] = route_price(inc, u, prices);
  };

  auto record = [&](double t) {
    for (std::size_t u = 0; u < n_users; ++u)
      inc.users[u].trajectory.push_back({t, inc.users[u].rate, user_price[u]});
  };

  IntegrationResult result;
  const auto max_steps =
      static_cast<std::size_t>(std::ceil(params.t_max / params.dt));

  reprice();
  if (params.trace_interval > 0) record(0.0);

  std::size_t step = 0;
  for (step = 1; step <= max_steps; ++step) {
    double max_change = 0.0;
    for (std::size_t u = 0; u < n_users; ++u) {
      auto& user = inc.users[u];
      const double dx = user.gain * (user.pay - user.rate * user_price[u]);
      double next = user.rate + dx * params.dt;
      if (next < 0.0) {
        next = 0.0;
        ++result.clamp_events;
      }
      max_change = std::max(max_change, std::abs(next - user.rate));
      user.rate = next;
      if (next > params.divergence_limit)
        throw DivergenceError("integrate: user " +
                              std::to_string(user.user_id) +
                              " diverged at t=" +
                              std::to_string(step * params.dt));
    }
    reprice();
    if (params.trace_interval > 0 && step % params.trace_interval == 0)
      record(step * params.dt);
    if (max_change / params.dt < params.tol) {
      result.converged = true;
      break;
    }
  }

  result.steps = std::min(step, max_steps);
  result.t_end = result.steps * params.dt;
  result.x_star.resize(n_users);
  result.residuals.resize(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    result.x_star[u] = inc.users[u].rate;
    result.residuals[u] =
        std::abs(inc.users[u].pay - inc.users[u].rate * user_price[u]);
    result.max_residual = std::max(result.max_residual, result.residuals[u]);
  }
  return result;
}

// Aggregate payment-weighted log utility at the current rates. Zero-rate
// users are skipped; the optional counter reports how many were.
inline double network_objective(std::span<const UserSession> users,
                                std::size_t* skipped = nullptr) {
  double total = 0.0;
  std::size_t zeros = 0;
  for (const auto& user : users) {
    if (user.rate > 0.0)
      total += user.pay * std::log(user.rate);
    else
      ++zeros;
  }
  if (skipped != nullptr) *skipped = zeros;
  return total;
}

}  // namespace tvcn
