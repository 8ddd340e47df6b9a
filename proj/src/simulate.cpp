#include "smfg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "smfg/errors.hpp"

namespace smfg {

double PopulationResult::inventory(std::size_t path, const TimeGrid& g, double t) const {
  return interp(slope, g, t) * q0[path] + interp(offset, g, t);
}

PopulationResult simulate_population(const Equilibrium& eq, const SimulationConfig& cfg) {
  const TimeGrid& g = eq.grid;
  const MuPath mu = eq.mu_path();
  PopulationResult res;

  // control = (Abar qbar + m_t) + Bbar_t Q0, so the inventory is affine in Q0.
  const TraderPath zero = evaluate_trader_control(eq.trader, 0.0, eq.params.q0_mean, mu, g);
  res.offset = zero.inventory;
  res.slope = integrate_path(continuous_path(eq.trader.bbar, g, mu.t_c), g, 1.0);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> law(cfg.q0_mean, cfg.q0_std > 0 ? cfg.q0_std : 1.0);
  res.q0.resize(cfg.n_paths);
  for (double& v : res.q0) v = cfg.q0_std > 0 ? law(rng) : cfg.q0_mean;

  std::vector<double> xs(cfg.n_paths);
  for (double t : cfg.checkpoints) {
    for (int i = 0; i < cfg.n_paths; ++i) xs[i] = res.inventory(i, g, t);
    PopulationSnapshot snap;
    snap.time = t;
    snap.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / cfg.n_paths;
    double ss = 0.0;
    for (double x : xs) ss += (x - snap.mean) * (x - snap.mean);
    const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    double lo = *lo_it, hi = *hi_it;
    // Identical paths get an exact zero rather than the rounding left by the mean.
    snap.std = (cfg.n_paths > 1 && hi > lo) ? std::sqrt(ss / (cfg.n_paths - 1)) : 0.0;
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const int nb = std::max(1, cfg.n_bins);
    snap.bin_edges.resize(nb + 1);
    for (int j = 0; j <= nb; ++j) snap.bin_edges[j] = lo + (hi - lo) * j / nb;
    snap.counts.assign(nb, 0);
    for (double x : xs) {
      int j = static_cast<int>((x - lo) / (hi - lo) * nb);
      snap.counts[std::clamp(j, 0, nb - 1)]++;
    }
    res.snapshots.push_back(std::move(snap));
  }
  return res;
}

BrokerPath simulate_broker_path(const Equilibrium& eq) {
  const MuPath mu = eq.mu_path();
  const ConditionalMoments cm =
      conditional_moments(eq.trader, mu, eq.params.q0_mean, eq.params.q0_second_moment, eq.grid);
  return evaluate_broker_control(eq.broker, mu, eq.params, cm.nubar, eq.grid);
}

Curve simulate_price(const Equilibrium& eq, std::optional<double> sigma, double S0, std::uint64_t seed) {
  if (!sigma) throw Error(ErrorCode::MissingSigma, "price simulation needs sigma");
  const TimeGrid& g = eq.grid;
  const ConditionalMoments cm =
      conditional_moments(eq.trader, eq.mu_path(), eq.params.q0_mean, eq.params.q0_second_moment, g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double h = g.h(), sq = std::sqrt(h);
  Curve S(g.size());
  S[0] = S0;
  for (int k = 0; k < g.n; ++k) {
    const double dW = *sigma > 0 ? sq * z(rng) : 0.0;
    S[k + 1] = S[k] + (eq.b_used * cm.nubar.values[k] + eq.params.mu_realized) * h + *sigma * dW;
  }
  return S;
}

}  // namespace smfg
