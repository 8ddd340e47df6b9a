#pragma once

#include <cstdint>
#include <optional>

#include "smfg/grid.hpp"
#include "smfg/model.hpp"
#include "smfg/riccati.hpp"
#include "smfg/trader.hpp"

namespace smfg {

// Broker side integrals use the fourth-order Gregory rule: the terms of
// A' cancel over several orders of magnitude and the trapezoid is too coarse.

struct BrokerBetas {
  Curve abarB;
  Kernel cbarB;
  Curve dbarB;
};

struct BrokerCoefficients {
  BrokerBetas betas;
  Curve ahatB, bhatB, dhatB;
  Kernel chatB;
};

BrokerBetas compute_broker_beta_coefficients(const ModelParams& p, const TraderCoefficients& tr,
                                             const RiccatiSolution& broker_ric, double b);

BrokerCoefficients compute_broker_control_coefficients(const ModelParams& p, BrokerBetas betas,
                                                       const TraderCoefficients& tr,
                                                       const RiccatiSolution& broker_ric);

struct APrimeOptions {
  // Test hook: flip the sign of one of the seven term groups (0..6).
  int negate_group = -1;
};

Curve compute_A_prime(const ModelParams& p, const TraderCoefficients& tr, const BrokerBetas& bb,
                      const TimeGrid& g, const APrimeOptions& opt = {});

// A_t = -int_t^T A'_s ds, so A_T = 0.
Curve compute_A(const Curve& a_prime, const TimeGrid& g);

struct RevelationPolicy {
  std::optional<double> t_c;  // empty: never reveal
  double a_min = 0.0;         // refined minimum of A
  Curve A;
  Curve a_prime;
};

RevelationPolicy critical_time(const Curve& A, const Curve& a_prime, const TimeGrid& g);

// A at t by local quadratic interpolation (consistent with the refined t_c).
double A_at(const Curve& A, const TimeGrid& g, double t);

struct BrokerPath {
  PiecewisePath control;
  Curve inventory;
  PiecewisePath beta;  // beta^B path
};

BrokerPath evaluate_broker_control(const BrokerCoefficients& bc, const MuPath& mu, const ModelParams& p,
                                   const PiecewisePath& nubar, const TimeGrid& g);

// -E[mu]^2 A_0 - Var(mu) A_t for the step second moment revealing at t.
double broker_objective_reduced(std::optional<double> reveal_time, const Curve& A, const TimeGrid& g,
                                double mu_mean, double mu_second_moment);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

}  // namespace smfg
