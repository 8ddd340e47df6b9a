#include "smfg/equilibrium.hpp"

#include <fmt/core.h>

#include <cmath>
#include <random>
#include <string>

#include "smfg/errors.hpp"

namespace smfg {

MuPath Equilibrium::mu_path(std::optional<double> reveal_time) const {
  return MuPath{reveal_time, params.mu_mean, params.mu_realized};
}

Equilibrium solve_equilibrium(const ModelParams& p, const TimeGrid& grid, const SolveOptions& opt) {
  validate(p);
  Equilibrium eq;
  eq.params = p;
  eq.grid = TimeGrid(grid.n, p.T);
  const TimeGrid& g = eq.grid;
  if (!opt.zeroth_order && p.b > 0.0) {
    const double bound = b_admissibility_bound(p);
    if (p.b >= bound)
      throw Error(ErrorCode::BAboveBound,
                  fmt::format("b={:.6g} is not below the admissibility bound {:.6g}", p.b, bound));
  }
  eq.b_used = opt.zeroth_order ? 0.0 : p.b;

  eq.trader_kernels = build_base_kernels(solve_gamma(p.a, p.eta, p.phi, g));
  eq.trader = compute_trader_coefficients(eq.trader_kernels, compute_beta_coefficients(eq.trader_kernels, eq.b_used));
  eq.broker_ric = solve_gamma_broker(p.aB, p.etaB, p.phiB, g);
  eq.broker = compute_broker_control_coefficients(
      p, compute_broker_beta_coefficients(p, eq.trader, eq.broker_ric, eq.b_used), eq.trader, eq.broker_ric);
  const Curve ap = compute_A_prime(p, eq.trader, eq.broker.betas, g, opt.a_prime);
  eq.policy = critical_time(compute_A(ap, g), ap, g);
  return eq;
}

double broker_payoff_given_mu(const Equilibrium& eq, std::optional<double> reveal_time, double mu) {
  const ModelParams& p = eq.params;
  const TimeGrid& g = eq.grid;
  const MuPath path{reveal_time, p.mu_mean, mu};
  const ConditionalMoments cm = conditional_moments(eq.trader, path, p.q0_mean, p.q0_second_moment, g);
  const BrokerPath bp = evaluate_broker_control(eq.broker, path, p, cm.nubar, g);
  const PiecewisePath Q = continuous_path(bp.inventory, g, reveal_time);
  const double b = eq.b_used;
  const PiecewisePath run = zip_paths(
      [&](double q, double nb, double mb, double v) {
        return q * (b * nb + mu) + p.eta * mb - p.etaB * v * v - 2.0 * p.aB * q * (v - nb) - p.phiB * q * q;
      },
      Q, cm.nubar, cm.mbar, bp.control);
  return integrate_path(run, g)[g.n];
}

McEstimate broker_payoff_monte_carlo(const Equilibrium& eq, std::optional<double> reveal_time, const TwoPointMu& law,
                                     int n_samples, std::uint64_t seed) {
  // For a fixed policy every grid quantity is affine in the realized mu, so
  // the payoff is an exact quadratic in mu: three solves pin it down.
  const double m = law.mean;
  const double j0 = broker_payoff_given_mu(eq, reveal_time, m);
  const double jp = broker_payoff_given_mu(eq, reveal_time, m + 1.0);
  const double jm = broker_payoff_given_mu(eq, reveal_time, m - 1.0);
  const double c1 = 0.5 * (jp - jm);
  const double c2 = 0.5 * (jp + jm) - j0;
  const double sd = std::sqrt(std::max(0.0, law.second_moment - m * m));

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = coin(rng) ? sd : -sd;
    const double v = j0 + c1 * x + c2 * x * x;
    const double d = v - mean;
    mean += d / (i + 1);
    m2 += d * (v - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.std_error = n_samples > 1 ? std::sqrt(m2 / (n_samples - 1) / n_samples) : 0.0;
  return est;
}

}  // namespace smfg
