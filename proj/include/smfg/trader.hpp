#pragma once

#include <optional>
#include <vector>

#include "smfg/grid.hpp"
#include "smfg/model.hpp"
#include "smfg/operators.hpp"

namespace smfg {

struct BetaCoefficients {
  Curve y;              // (I - bL)^{-1} z
  SeriesResult series;  // sum_k b^k Lhat^k [C, D]
  std::vector<double> neumann_norms;
  Curve beta1;
  Kernel beta2;  // two-time: beta2(u, s), u <= s
  Curve beta3;
};

struct TraderCoefficients {
  Curve abar, bbar, dbar;
  Kernel cbar;
  Curve z;
  BetaCoefficients beta;
};

BetaCoefficients compute_beta_coefficients(const BaseKernels& K, double b);
TraderCoefficients compute_trader_coefficients(const BaseKernels& K, BetaCoefficients beta);

// Drift estimate of the traders: E[mu] up to t_c, the realized mu after.
struct MuPath {
  std::optional<double> t_c;  // empty: never revealed
  double mean = 0.0;
  double realized = 0.0;

  bool revealed(double t) const { return t_c && t > *t_c; }
  double at(double t) const { return revealed(t) ? realized : mean; }
};

// m_t = int_0^t K_{s,t} mu_s ds + Dc_t mu_t, with the mu integral split at t_c.
PiecewisePath mu_terms(const Kernel& K, const Curve& Dc, const MuPath& mu, const TimeGrid& g);

// int_{x0}^{x1} K(s, t_node) ds with linear interpolation on partial cells.
double column_integral(const Kernel& K, const TimeGrid& g, int t_node, double x0, double x1);

struct TraderPath {
  PiecewisePath control;
  Curve inventory;
};

TraderPath evaluate_trader_control(const TraderCoefficients& c, double Q0, double q0_mean, const MuPath& mu,
                                   const TimeGrid& g);

struct ConditionalMoments {
  PiecewisePath nubar;
  PiecewisePath mbar;
};

ConditionalMoments conditional_moments(const TraderCoefficients& c, const MuPath& mu, double q0_mean,
                                       double q0_second_moment, const TimeGrid& g);

// Nodal evaluation of int_0^t E_{s,t} mu_s ds + F_t mu_t by the trapezoid on
// the given node values of mu. This is the discrete operator the fixed point
// identities are stated for.
Curve apply_Ltilde(const KernelPair& pair, const Curve& mu_nodes, double h);

}  // namespace smfg
