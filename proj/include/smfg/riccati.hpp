#pragma once

#include "smfg/grid.hpp"
#include "smfg/model.hpp"

namespace smfg {

struct RiccatiSolution {
  TimeGrid grid;
  double a = 0.0;    // aversion entering the kernel exponent
  double eta = 0.0;  // cost entering the kernel exponent
  Curve gamma;
  Curve kappa;       // (gamma - 2a) / (2 eta)
  Curve expo;        // cumulative trapezoid of kappa from 0
  Kernel kernel;     // Gamma_{s,t} = exp(expo_t - expo_s)
};

// Backward RK4 for dgamma/dt = c0 + c1*gamma - c2*gamma^2, gamma_T = 0,
// followed by the kernel build for the (a, eta) pair.
RiccatiSolution solve_riccati(double c0, double c1, double c2, double a, double eta, const TimeGrid& g);

RiccatiSolution solve_gamma(double a, double eta, double phi, const TimeGrid& g);
RiccatiSolution solve_gamma_broker(double aB, double etaB, double phiB, const TimeGrid& g);
// a replaced by a_N = a - b/(2N). Throws NTooSmall when N <= b/a.
RiccatiSolution solve_gamma_N(const ModelParams& p, int N, const TimeGrid& g);

double shifted_aversion(const ModelParams& p, int N);

}  // namespace smfg
