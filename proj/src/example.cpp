#include "smfg/example.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "smfg/simulate.hpp"

namespace smfg {

namespace example_closed_form {
double beta3(double s, double T) { return std::exp(T - s) - 1.0; }
double cbar(double s, double t, double T) { return 50.0 * (std::exp(s - t) - std::exp(T - t)); }
double dbar(double t, double T) { return 50.0 * (std::exp(T - t) - 1.0); }
double cbarB(double s, double t, double T) {
  return -std::exp(2 * (T - t)) + std::exp(T + s - 2 * t) + std::exp(T - t) - std::exp(s - t);
}
double dbarB(double t, double T) { return (-T + t + 2.5) * std::exp(2 * (T - t)) - 3.0 * std::exp(T - t) + 0.5; }
double a_prime(double t, double T) {
  const double x = T - t;
  return 50 * (x - 2.5) * (x - 2) * std::exp(4 * x) + 275 * (x - 13.0 / 6) * std::exp(3 * x) -
         50 * (x - 107.0 / 12) * std::exp(2 * x) - 112.5 * std::exp(x) - 50 * (x - 17.0 / 12) +
         50 * (x - 13.0 / 6) * std::exp(-x) + 50 * std::exp(-2 * x);
}
}  // namespace example_closed_form

namespace {

struct RelErr {
  double err = 0.0;
  double ref = 0.0;
  void add(double x, double r) {
    err = std::max(err, std::abs(x - r));
    ref = std::max(ref, std::abs(r));
  }
  double value() const { return ref > 0 ? err / ref : err; }
};

CheckResult within(std::string name, double value, double lo, double hi) {
  return CheckResult{std::move(name), value, lo, hi, lo <= value && value <= hi};
}

}  // namespace

bool ExampleReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ExampleReport run_example_checks(int n_steps, double tol, const APrimeOptions& a_prime) {
  namespace cf = example_closed_form;
  const ModelParams p = table1_params();
  const TimeGrid g(n_steps, p.T);
  ExampleReport rep;
  const auto start = std::chrono::steady_clock::now();
  rep.eq = solve_equilibrium(p, g, SolveOptions{true, a_prime});
  rep.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Equilibrium& eq = rep.eq;
  const double T = p.T;

  rep.checks.push_back(within("critical_time", eq.policy.t_c ? *eq.policy.t_c : T, 0.31, 0.33));

  RelErr b3, cb, db, cbB, dbB, ap;
  for (int s = 0; s <= g.n; ++s) {
    const double ts = g.t(s);
    b3.add(eq.trader.beta.beta3[s], cf::beta3(ts, T));
    db.add(eq.trader.dbar[s], cf::dbar(ts, T));
    dbB.add(eq.broker.betas.dbarB[s], cf::dbarB(ts, T));
    ap.add(eq.policy.a_prime[s], cf::a_prime(ts, T));
    for (int t = s; t <= g.n; ++t) {
      cb.add(eq.trader.cbar(s, t), cf::cbar(ts, g.t(t), T));
      cbB.add(eq.broker.betas.cbarB(s, t), cf::cbarB(ts, g.t(t), T));
    }
  }
  rep.checks.push_back(within("beta3_rel_err", b3.value(), 0.0, tol));
  rep.checks.push_back(within("cbar_rel_err", cb.value(), 0.0, tol));
  rep.checks.push_back(within("dbar_rel_err", db.value(), 0.0, tol));
  rep.checks.push_back(within("cbarB_rel_err", cbB.value(), 0.0, tol));
  rep.checks.push_back(within("dbarB_rel_err", dbB.value(), 0.0, tol));
  rep.checks.push_back(within("A_prime_rel_err", ap.value(), 0.0, tol));

  const BrokerPath bp = simulate_broker_path(eq);
  const auto peak = std::max_element(bp.inventory.begin(), bp.inventory.end()) - bp.inventory.begin();
  rep.checks.push_back(within("broker_inventory_peak_time", g.t(static_cast<int>(peak)), 0.70, 0.80));
  return rep;
}

}  // namespace smfg
