#pragma once

#include <cstdint>
#include <optional>

#include "smfg/broker.hpp"
#include "smfg/model.hpp"
#include "smfg/operators.hpp"
#include "smfg/riccati.hpp"
#include "smfg/trader.hpp"

namespace smfg {

struct SolveOptions {
  // Drop every Neumann correction (b -> 0 limit).
  bool zeroth_order = false;
  APrimeOptions a_prime;
};

// Full Stackelberg solve: trader coefficients, broker coefficients, A and t_c.
struct Equilibrium {
  ModelParams params;
  TimeGrid grid;
  double b_used = 0.0;
  BaseKernels trader_kernels;
  TraderCoefficients trader;
  RiccatiSolution broker_ric;
  BrokerCoefficients broker;
  RevelationPolicy policy;

  MuPath mu_path(std::optional<double> reveal_time) const;
  MuPath mu_path() const { return mu_path(policy.t_c); }
};

// Throws BAboveBound when b is not below the admissibility bound (full-b mode).
Equilibrium solve_equilibrium(const ModelParams& p, const TimeGrid& g, const SolveOptions& opt = {});

// Broker payoff for a fixed realized mu under the step policy revealing at
// reveal_time; the running payoff is integrated on the grid.
double broker_payoff_given_mu(const Equilibrium& eq, std::optional<double> reveal_time, double mu);

// Two-point law mean +- sd with equal weights, matching the first two moments.
struct TwoPointMu {
  double mean = 0.0;
  double second_moment = 0.0;
};

McEstimate broker_payoff_monte_carlo(const Equilibrium& eq, std::optional<double> reveal_time,
                                     const TwoPointMu& law, int n_samples, std::uint64_t seed);

}  // namespace smfg
