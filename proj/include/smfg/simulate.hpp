#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smfg/equilibrium.hpp"
#include "smfg/grid.hpp"

namespace smfg {

struct SimulationConfig {
  int n_paths = 10000;
  std::uint64_t seed = 42;
  double q0_mean = 0.0;
  double q0_std = 0.5;
  std::optional<double> sigma;
  std::vector<double> checkpoints;
  int n_bins = 40;
};

struct PopulationSnapshot {
  double time = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> bin_edges;  // n_bins + 1
  std::vector<long> counts;
};

// Trader inventories are affine in Q0: Q_t = slope_t Q0 + offset_t.
struct PopulationResult {
  std::vector<double> q0;
  Curve slope;
  Curve offset;
  std::vector<PopulationSnapshot> snapshots;

  double inventory(std::size_t path, const TimeGrid& g, double t) const;
};

PopulationResult simulate_population(const Equilibrium& eq, const SimulationConfig& cfg);

BrokerPath simulate_broker_path(const Equilibrium& eq);

// Euler scheme for dS = (b nubar_t + mu) dt + sigma dW with the true drift.
// Throws MissingSigma without sigma.
Curve simulate_price(const Equilibrium& eq, std::optional<double> sigma, double S0, std::uint64_t seed);

}  // namespace smfg
