#include <doctest.h>

#include <cmath>

#include "smfg/equilibrium.hpp"
#include "smfg/errors.hpp"
#include "smfg/simulate.hpp"

using namespace smfg;

namespace {

const Equilibrium& example(int n = 800) {
  static const Equilibrium eq = [] {
    const ModelParams p = table1_params();
    return solve_equilibrium(p, TimeGrid(800, p.T), SolveOptions{true, {}});
  }();
  static const Equilibrium fine = [] {
    const ModelParams p = table1_params();
    return solve_equilibrium(p, TimeGrid(1600, p.T), SolveOptions{true, {}});
  }();
  return n == 800 ? eq : fine;
}

std::vector<double> checkpoints() {
  std::vector<double> c;
  for (int i = 0; i <= 40; ++i) c.push_back(0.05 * i);
  return c;
}

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("population snapshots in the example") {
    const Equilibrium& eq = example();
    SimulationConfig cfg;
    cfg.checkpoints = checkpoints();
    const PopulationResult pop = simulate_population(eq, cfg);
    const double tc = *eq.policy.t_c;
    double peak = -1e300;
    for (const auto& s : pop.snapshots) {
      long mass = 0;
      for (long c : s.counts) mass += c;
      CHECK(mass == cfg.n_paths);
      if (s.time > tc) CHECK(s.mean > 0.0);
      peak = std::max(peak, s.mean);
    }
    const auto& last = pop.snapshots.back();
    CHECK(last.mean < peak);
    // Nonincreasing within sampling error: the spread is |slope_t| times the sample spread of Q0.
    for (std::size_t i = 1; i < pop.snapshots.size(); ++i)
      CHECK(pop.snapshots[i].std <= pop.snapshots[i - 1].std * (1 + 1e-12));
  }

  TEST_CASE("degenerate inventories give identical paths") {
    const Equilibrium& eq = example();
    SimulationConfig cfg;
    cfg.n_paths = 100;
    cfg.q0_std = 0.0;
    cfg.checkpoints = {0.0, 1.0, 2.0};
    const PopulationResult pop = simulate_population(eq, cfg);
    for (const auto& s : pop.snapshots) CHECK(s.std == 0.0);
  }

  TEST_CASE("same seed, same population") {
    const Equilibrium& eq = example();
    SimulationConfig cfg;
    cfg.n_paths = 500;
    cfg.checkpoints = {0.5, 1.5};
    const PopulationResult a = simulate_population(eq, cfg);
    const PopulationResult b = simulate_population(eq, cfg);
    CHECK(a.q0 == b.q0);
    CHECK(a.snapshots[1].counts == b.snapshots[1].counts);
  }

  TEST_CASE("inventory converges under step halving") {
    // Same revelation time on both grids, so only the integration step changes.
    const Equilibrium& coarse = example(800);
    const Equilibrium& fine = example(1600);
    const std::optional<double> tc = coarse.policy.t_c;
    for (double q0 : {0.0, 200.0}) {
      const TraderPath a = evaluate_trader_control(coarse.trader, q0, 0.0, coarse.mu_path(tc), coarse.grid);
      const TraderPath b = evaluate_trader_control(fine.trader, q0, 0.0, fine.mu_path(tc), fine.grid);
      const double qa = a.inventory.back(), qb = b.inventory.back();
      CHECK(std::abs(qa - qb) / std::abs(qb) < 1e-6);
    }
  }

  TEST_CASE("broker path") {
    const Equilibrium& eq = example();
    const BrokerPath bp = simulate_broker_path(eq);
    double peak = 0;
    for (double q : bp.inventory) peak = std::max(peak, q);
    CHECK(bp.inventory.back() < peak);
  }

  TEST_CASE("price paths") {
    ModelParams p = table1_params();
    const Equilibrium eq = solve_equilibrium(p, TimeGrid(200, p.T), SolveOptions{true, {}});
    CHECK_THROWS_AS(simulate_price(eq, std::nullopt, 100.0, 1), Error);
    const Curve line = simulate_price(eq, 0.0, 100.0, 1);
    for (int k = 0; k <= eq.grid.n; ++k) CHECK(line[k] == doctest::Approx(100.0 + 5.0 * eq.grid.t(k)).epsilon(1e-13));
    const int n_paths = 10000;
    const double sigma = 0.3;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n_paths; ++i) {
      const double d = simulate_price(eq, sigma, 100.0, 1000 + i).back() - 100.0;
      s1 += d;
      s2 += d * d;
    }
    const double mean = s1 / n_paths;
    const double var = s2 / n_paths - mean * mean;
    CHECK(std::abs(mean - 5.0 * p.T) < 3.0 * std::sqrt(var / n_paths));
    // Sample variance of a Gaussian has relative sd sqrt(2/n).
    CHECK(std::abs(var / (sigma * sigma * p.T) - 1.0) < 4.0 * std::sqrt(2.0 / n_paths));
  }
}
