#pragma once

#include <cmath>
#include <map>
#include <stdexcept>

#include "tvcn/evolution.hpp"
#include "tvcn/graph.hpp"

namespace tvcn {

enum class DegreeMode { In, Out, Total };

struct DegreeHistogram {
  std::map<std::size_t, std::size_t> counts;  // degree -> node count
  std::size_t total = 0;                      // number of nodes
};

inline DegreeHistogram degree_distribution(const DirectedGraph& g,
                                           DegreeMode mode) {
  if (g.node_count() == 0)
    throw std::invalid_argument("degree_distribution: empty graph");
  DegreeHistogram hist;
  hist.total = g.node_count();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::size_t k = mode == DegreeMode::In    ? g.in_degree(v)
                          : mode == DegreeMode::Out ? g.out_degree(v)
                                                    : g.degree(v);
    ++hist.counts[k];
  }
  return hist;
}

// Mean-field tail predictions for a parameter choice. `alpha` is stored
// with the positive sign convention used when quoting tail exponents.
struct TheoryExponents {
  double c = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha = 0.0;
  double positivity = 0.0;  // x + theta2/theta1, must stay positive
  bool theta1_in_range = false;  // 0.5 < theta1 < 1, i.e. alpha in (2, 3)
  bool positivity_ok = false;
};

inline TheoryExponents theoretical_exponents(const EvolutionParams& p) {
  const double c = p.beta + (1.0 - p.beta) * (2.0 * p.gamma - 1.0);
  if (c <= 0.0)
    throw std::domain_error(
        "theoretical_exponents: degenerate parameters, c <= 0");
  TheoryExponents t;
  t.c = c;
  t.theta1 = (p.beta + p.gamma * (1.0 - p.beta)) / (2.0 * c);
  t.theta2 = -(1.0 - p.beta) * (1.0 - p.gamma) * static_cast<double>(p.x);
  t.alpha = 1.0 + 1.0 / t.theta1;
  t.positivity = static_cast<double>(p.x) + t.theta2 / t.theta1;
  t.theta1_in_range = t.theta1 > 0.5 && t.theta1 < 1.0;
  t.positivity_ok = t.positivity > 0.0;
  return t;
}

struct PowerLawFit {
  double alpha = 0.0;
  double std_error = 0.0;
  std::size_t sample_size = 0;  // nodes with degree >= k_min
  std::size_t k_min = 0;
};

// Continuous maximum-likelihood tail estimate over degrees >= k_min, with
// the half-integer shift customary for integer-valued samples.
inline PowerLawFit fit_power_law(const DegreeHistogram& hist,
                                 std::size_t k_min = 5) {
  if (k_min < 1)
    throw std::invalid_argument("fit_power_law: k_min must be >= 1");
  const double shift = static_cast<double>(k_min) - 0.5;
  std::size_t distinct = 0;
  std::size_t n = 0;
  double log_sum = 0.0;
  for (const auto& [k, count] : hist.counts) {
    if (k < k_min) continue;
    ++distinct;
    n += count;
    log_sum +=
        static_cast<double>(count) * std::log(static_cast<double>(k) / shift);
  }
  if (distinct < 5)
    throw std::invalid_argument(
        "fit_power_law: need at least 5 distinct degrees >= k_min");
  PowerLawFit fit;
  fit.alpha = 1.0 + static_cast<double>(n) / log_sum;
  fit.std_error = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(n));
  fit.sample_size = n;
  fit.k_min = k_min;
  return fit;
}

struct SimTheoryReport {
  double alpha_sim = 0.0;
  double alpha_theory = 0.0;
  double abs_gap = 0.0;
};

// Pairs the fitted in-degree exponent of an evolved graph with the
// mean-field prediction for the parameters that produced it.
inline SimTheoryReport compare_sim_theory(const EvolutionParams& p,
                                          const DirectedGraph& g,
                                          std::size_t k_min = 5) {
  const double sim =
      fit_power_law(degree_distribution(g, DegreeMode::In), k_min).alpha;
  const double theory = theoretical_exponents(p).alpha;
  return {sim, theory, std::abs(sim - theory)};
}

}  // namespace tvcn
