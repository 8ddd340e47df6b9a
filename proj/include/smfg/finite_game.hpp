#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smfg/model.hpp"
#include "smfg/operators.hpp"
#include "smfg/trader.hpp"

namespace smfg {

struct FiniteCoefficients {
  int N = 0;
  double aN = 0.0;
  double b_eff = 0.0;  // b (N-1)/N, the prefactor of L_N
  BaseKernels kernels;  // built on Gamma^N
  TraderCoefficients coeffs;  // (A^N, B^N = z^N, C^N, D^N)
};

// Throws NTooSmall when N <= b/a, or N < 2 with b > 0.
FiniteCoefficients compute_finite_coefficients(const ModelParams& p, int N, const TimeGrid& g, double b);

// Controls of the N traders; throws LengthMismatch unless inventories has N entries.
std::vector<Curve> evaluate_nash_controls(const FiniteCoefficients& fc, std::span<const double> inventories,
                                          double q0_mean, const MuPath& mu, const TimeGrid& g);

struct ConvergenceRecord {
  int N = 0;
  int repeat = 0;
  double e1 = 0.0;
  double e2 = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;
  std::vector<int> Ns;
  std::vector<double> mean_e1, mean_e2;
  double slope_e1 = 0.0;
  double slope_e2 = 0.0;
};

// e1 = sup_t |avg nu - nubar|^2, e2 = sup_t |avg nu^2 - Mbar| against the
// mean field moments; Q0 ~ Gaussian(q0_mean, q0 std).
ConvergenceReport convergence_study(const ModelParams& p, const TimeGrid& g, double b, const MuPath& mu,
                                    const std::vector<int>& Ns, int n_repeats, std::uint64_t seed);

// Least squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace smfg
