#include "smfg/finite_game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "smfg/errors.hpp"
#include "smfg/riccati.hpp"

namespace smfg {

FiniteCoefficients compute_finite_coefficients(const ModelParams& p, int N, const TimeGrid& g, double b) {
  if (b > 0.0 && N < 2) throw Error(ErrorCode::NTooSmall, "N must be at least 2 when b > 0");
  ModelParams q = p;
  q.b = b;
  FiniteCoefficients fc;
  fc.N = N;
  fc.aN = shifted_aversion(q, N);
  fc.b_eff = b == 0.0 ? 0.0 : b * (N - 1) / static_cast<double>(N);
  fc.kernels = build_base_kernels(solve_gamma(fc.aN, p.eta, p.phi, g));
  fc.coeffs = compute_trader_coefficients(fc.kernels, compute_beta_coefficients(fc.kernels, fc.b_eff));
  return fc;
}

std::vector<Curve> evaluate_nash_controls(const FiniteCoefficients& fc, std::span<const double> inventories,
                                          double q0_mean, const MuPath& mu, const TimeGrid& g) {
  if (static_cast<int>(inventories.size()) != fc.N)
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(fc.N) + " inventories, got " + std::to_string(inventories.size()));
  const TraderCoefficients& c = fc.coeffs;
  const PiecewisePath m = mu_terms(c.cbar, c.dbar, mu, g);
  Curve common(g.size());
  for (int k = 0; k <= g.n; ++k) common[k] = c.abar[k] * q0_mean + m.values[k];
  std::vector<Curve> out(inventories.size(), Curve(g.size()));
  for (std::size_t j = 0; j < inventories.size(); ++j)
    for (int k = 0; k <= g.n; ++k) out[j][k] = common[k] + c.bbar[k] * inventories[j];
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceReport convergence_study(const ModelParams& p, const TimeGrid& g, double b, const MuPath& mu,
                                    const std::vector<int>& Ns, int n_repeats, std::uint64_t seed) {
  const BaseKernels K = build_base_kernels(solve_gamma(p.a, p.eta, p.phi, g));
  const TraderCoefficients mf = compute_trader_coefficients(K, compute_beta_coefficients(K, b));
  const ConditionalMoments cm = conditional_moments(mf, mu, p.q0_mean, p.q0_second_moment, g);
  const double sd = std::sqrt(std::max(0.0, p.q0_variance()));

  ConvergenceReport rep;
  rep.Ns = Ns;
  std::vector<double> q0;
  Curve avg(g.size()), avg2(g.size());
  for (int N : Ns) {
    const FiniteCoefficients fc = compute_finite_coefficients(p, N, g, b);
    double s1 = 0, s2 = 0;
    for (int r = 0; r < n_repeats; ++r) {
      std::seed_seq ss{seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(r)};
      std::mt19937_64 rng(ss);
      std::normal_distribution<double> law(p.q0_mean, sd);
      q0.resize(N);
      for (double& v : q0) v = sd > 0 ? law(rng) : p.q0_mean;
      const std::vector<Curve> ctrl = evaluate_nash_controls(fc, q0, p.q0_mean, mu, g);
      std::fill(avg.begin(), avg.end(), 0.0);
      std::fill(avg2.begin(), avg2.end(), 0.0);
      for (const Curve& c : ctrl)
        for (int k = 0; k <= g.n; ++k) {
          avg[k] += c[k];
          avg2[k] += c[k] * c[k];
        }
      double e1 = 0, e2 = 0;
      for (int k = 0; k <= g.n; ++k) {
        const double d1 = avg[k] / N - cm.nubar.values[k];
        e1 = std::max(e1, d1 * d1);
        e2 = std::max(e2, std::abs(avg2[k] / N - cm.mbar.values[k]));
      }
      rep.records.push_back({N, r, e1, e2});
      s1 += e1;
      s2 += e2;
    }
    rep.mean_e1.push_back(s1 / n_repeats);
    rep.mean_e2.push_back(s2 / n_repeats);
  }
  if (Ns.size() >= 2) {
    std::vector<double> x(Ns.begin(), Ns.end());
    bool positive = true;
    for (std::size_t i = 0; i < Ns.size(); ++i) positive = positive && rep.mean_e1[i] > 0 && rep.mean_e2[i] > 0;
    if (positive) {
      rep.slope_e1 = loglog_slope(x, rep.mean_e1);
      rep.slope_e2 = loglog_slope(x, rep.mean_e2);
    }
  }
  return rep;
}

}  // namespace smfg
