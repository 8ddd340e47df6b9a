#pragma once

#include <vector>

#include "smfg/grid.hpp"
#include "smfg/riccati.hpp"

namespace smfg {

// The three-index kernel A_{r,s,t} = k_t Gamma_{s,t} Gamma_{r,s} is kept in
// separated form through k and the Gamma table of the Riccati solution.
struct BaseKernels {
  RiccatiSolution ric;
  Curve k;     // (gamma_t - 2a) / (4 eta^2)
  Curve tail;  // int_t^T Gamma_{s,t} ds
  Kernel C;    // C_{s,t} = k_t Gamma_{s,t} tail_s, s <= t
  Curve D;     // tail_t / (2 eta)
  Curve z;     // (gamma_t - 2a)/(2 eta) Gamma_{0,t}

  const TimeGrid& grid() const { return ric.grid; }
  double eta() const { return ric.eta; }
  double B(int s, int t) const { return ric.kernel(s, t) / (2.0 * ric.eta); }
};

BaseKernels build_base_kernels(RiccatiSolution ric);

struct KernelPair {
  Kernel E;  // two-time kernel, s <= t
  Curve F;
};

// P_u = sum over r in [u, n] of trapezoid weight * Gamma_{r,u} f_r, for u >= from.
// Entries below `from` are zero.
Curve tail_sum(const Kernel& gamma, const double* f, int from, double h);
// H_t = sum over s in [from, t] of trapezoid weight * Gamma_{s,t} f_s, for t >= from.
Curve head_sum(const Kernel& gamma, const double* f, int from, double h);

// G_{s,r} = int_s^r E_{u,r} du + F_r for s <= r.
Kernel first_index_tails(const KernelPair& pair, double h);

Curve apply_L(const Curve& xi, const BaseKernels& K);
KernelPair apply_Lhat(const KernelPair& pair, const BaseKernels& K);

struct NeumannResult {
  Curve y;
  std::vector<double> term_norms;
};

// (I - bL)^{-1} x by the Neumann series.
NeumannResult neumann_resolve(const Curve& x, double b, const BaseKernels& K);

struct SeriesResult {
  KernelPair sum;
  std::vector<double> term_norms;
};

// sum_k b^k Lhat^k [seed].
SeriesResult lhat_series(const KernelPair& seed, double b, const BaseKernels& K);

KernelPair base_pair(const BaseKernels& K);

// Sup-norm operator norm estimates: the grid operators applied with |k| to
// constant one inputs. Upper bounds for the induced infinity norms.
double L_norm_estimate(const BaseKernels& K);
double Lhat_norm_estimate(const BaseKernels& K);

}  // namespace smfg
