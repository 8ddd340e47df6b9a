#pragma once

namespace smfg {

struct ModelParams {
  double a = 0.01;       // trader terminal aversion
  double eta = 0.01;     // trader transaction cost
  double phi = 0.01;     // trader running penalty
  double b = 0.0;        // permanent impact
  double aB = 0.01;
  double etaB = 0.005;
  double phiB = 0.02;
  double T = 2.0;
  double Q0B = 0.0;      // broker initial inventory
  double mu_mean = 0.0;
  double mu_second_moment = 25.0;
  double mu_realized = 5.0;
  double q0_mean = 0.0;
  double q0_second_moment = 0.25;

  double mu_variance() const { return mu_second_moment - mu_mean * mu_mean; }
  double q0_variance() const { return q0_second_moment - q0_mean * q0_mean; }
};

// Numerical example parameters: phi = a^2/eta and phiB = aB^2/etaB, so both
// Riccati solutions vanish. Q0 has std 0.5, E[mu] = 0, realized mu = 5.
ModelParams table1_params();

// Returns params unchanged or throws NonPositiveParameter / MomentInconsistency.
const ModelParams& validate(const ModelParams& p);

// Largest b for which the Neumann series are guaranteed to converge.
double b_admissibility_bound(const ModelParams& p);

// Closed-form upper bounds on the operator norms of L and L-hat.
double L_norm_bound(const ModelParams& p);
double Lhat_norm_bound(const ModelParams& p);

}  // namespace smfg
