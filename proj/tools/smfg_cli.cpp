#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/core.h>
#include <fmt/os.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "smfg/errors.hpp"
#include "smfg/example.hpp"
#include "smfg/finite_game.hpp"
#include "smfg/io.hpp"
#include "smfg/model.hpp"
#include "smfg/simulate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace smfg;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitError = 2;

// Flat config keys and command line flags share these names.
struct Settings {
  ModelParams p = table1_params();
  double q0_std = 0.5;
  int n_steps = 800;
  std::uint64_t seed = 42;
  bool zeroth_order = false;
  std::string out_dir = "runs";
};

struct SimulateArgs {
  int n_paths = 10000;
  std::optional<double> sigma;
  double S0 = 100.0;
  int n_price_paths = 1;
  double checkpoint_step = 0.25;
};

struct FiniteArgs {
  std::vector<int> Ns{100, 400, 1600};
  int repeats = 64;
};

struct ExampleArgs {
  double tol = 1e-5;
  int tamper_group = -1;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void add_model_options(CLI::App& app, Settings& s) {
  ModelParams& p = s.p;
  app.add_option("--a", p.a, "trader terminal inventory aversion")->capture_default_str();
  app.add_option("--eta", p.eta, "trader transaction cost")->capture_default_str();
  app.add_option("--phi", p.phi, "trader running inventory penalty")->capture_default_str();
  app.add_option("--b", p.b, "permanent price impact")->capture_default_str();
  app.add_option("--a_B", p.aB, "broker terminal inventory aversion")->capture_default_str();
  app.add_option("--eta_B", p.etaB, "broker transaction cost")->capture_default_str();
  app.add_option("--phi_B", p.phiB, "broker running inventory penalty")->capture_default_str();
  app.add_option("--T", p.T, "horizon")->capture_default_str();
  app.add_option("--Q0_B", p.Q0B, "broker initial inventory")->capture_default_str();
  app.add_option("--mu_mean", p.mu_mean, "E[mu]")->capture_default_str();
  app.add_option("--mu_second_moment", p.mu_second_moment, "E[mu^2]")->capture_default_str();
  app.add_option("--mu_realized", p.mu_realized, "realized drift known to the broker")->capture_default_str();
  app.add_option("--q0_mean", p.q0_mean, "mean initial trader inventory")->capture_default_str();
  app.add_option("--q0_std", s.q0_std, "std of initial trader inventory")->capture_default_str();
  app.add_option("--n_steps", s.n_steps, "grid intervals on [0, T]")->capture_default_str();
  app.add_option("--seed", s.seed, "random seed")->capture_default_str();
  app.add_flag("--zeroth-order,--zeroth_order", s.zeroth_order, "drop all Neumann corrections (b -> 0)");
  app.add_option("--out-dir,--out_dir", s.out_dir, "parent directory of run directories")->capture_default_str();
}

json config_echo(const Settings& s) {
  const ModelParams& p = s.p;
  return json{{"a", p.a},
              {"eta", p.eta},
              {"phi", p.phi},
              {"b", p.b},
              {"a_B", p.aB},
              {"eta_B", p.etaB},
              {"phi_B", p.phiB},
              {"T", p.T},
              {"Q0_B", p.Q0B},
              {"mu_mean", p.mu_mean},
              {"mu_second_moment", p.mu_second_moment},
              {"mu_realized", p.mu_realized},
              {"q0_mean", p.q0_mean},
              {"q0_std", s.q0_std},
              {"n_steps", s.n_steps},
              {"seed", s.seed},
              {"zeroth_order", s.zeroth_order}};
}

fs::path make_run_dir(const std::string& out_dir, std::uint64_t seed) {
  const std::time_t now = std::time(nullptr);
  const std::string stem = fmt::format("{:%Y%m%d-%H%M%S}-seed{}", fmt::localtime(now), seed);
  fs::path dir = fs::path(out_dir) / stem;
  for (int i = 2; fs::exists(dir); ++i) dir = fs::path(out_dir) / fmt::format("{}-{}", stem, i);
  fs::create_directories(dir);
  return dir;
}

class Run {
 public:
  Run(const Settings& s, std::string command) : out_dir_(s.out_dir), seed_(s.seed), t0_(Clock::now()) {
    manifest_["command"] = std::move(command);
    manifest_["seed"] = s.seed;
    manifest_["config"] = config_echo(s);
    manifest_["tolerances"] = json{{"grid_step", s.p.T / s.n_steps},
                                   {"riccati", "RK4, 4 substeps per cell"},
                                   {"series_stop_relative", 1e-12},
                                   {"series_max_terms", 200}};
  }

  fs::path file(const std::string& name) {
    files_.push_back(name);
    return dir() / name;
  }
  json& operator[](const char* key) { return manifest_[key]; }
  void timing(const char* what, double sec) { manifest_["timings_s"][what] = sec; }

  // Written last so every listed file already exists.
  void finish() {
    timing("total", seconds_since(t0_));
    manifest_["files"] = files_;
    manifest_["run_dir"] = dir().string();
    std::ofstream(dir() / "manifest.json") << manifest_.dump(2) << '\n';
    fmt::print("run directory: {}\n", dir().string());
  }

 private:
  // Created on first use so a run that fails early leaves nothing behind.
  const fs::path& dir() {
    if (dir_.empty()) dir_ = make_run_dir(out_dir_, seed_);
    return dir_;
  }

  std::string out_dir_;
  std::uint64_t seed_;
  fs::path dir_;
  Clock::time_point t0_;
  json manifest_;
  std::vector<std::string> files_;
};

ModelParams resolved_params(const Settings& s) {
  ModelParams p = s.p;
  p.q0_second_moment = s.q0_std * s.q0_std + p.q0_mean * p.q0_mean;
  return p;
}

bool degenerate_mu(const ModelParams& p) { return p.mu_variance() <= 1e-14 * std::max(1.0, p.mu_second_moment); }

json optional_time(std::optional<double> t) { return t ? json(*t) : json("never"); }

// Coefficients, A curves and the policy record.
Equilibrium solve_and_write(const Settings& s, Run& run) {
  const ModelParams p = resolved_params(s);
  const auto t0 = Clock::now();
  Equilibrium eq = solve_equilibrium(p, TimeGrid(s.n_steps, p.T), SolveOptions{s.zeroth_order, {}});
  run.timing("solve", seconds_since(t0));

  const bool degenerate = degenerate_mu(p);
  const RevelationPolicy& pol = eq.policy;
  const auto reduced = [&](std::optional<double> t) {
    return broker_objective_reduced(t, pol.A, eq.grid, p.mu_mean, p.mu_second_moment);
  };
  const double objective = reduced(pol.t_c);
  write_coefficients_csv(run.file("coefficients.csv"), eq);
  write_A_csv(run.file("fig1_A.csv"), eq.grid, pol.a_prime, pol.A);
  write_policy_csv(run.file("policy.csv"), pol, objective, degenerate);

  run["b_used"] = eq.b_used;
  run["b_admissibility_bound"] = b_admissibility_bound(p);
  run["t_c"] = optional_time(pol.t_c);
  run["A_min"] = pol.a_min;
  run["objectives"] = json{{"at_t_c", objective}, {"reveal_at_0", reduced(0.0)}, {"never", reduced(std::nullopt)}};
  if (degenerate) {
    run["decision"] = "degenerate";
    fmt::print("policy: degenerate: objective flat in t_c (Var(mu) = 0)\n");
  } else if (pol.t_c) {
    run["decision"] = "reveal";
    fmt::print("policy: reveal at t_c = {:.6f}, objective {:.6g}\n", *pol.t_c, objective);
  } else {
    run["decision"] = "never";
    fmt::print("policy: never reveal, objective {:.6g}\n", objective);
  }
  return eq;
}

std::vector<double> checkpoints(double T, double step) {
  std::vector<double> c;
  const int m = static_cast<int>(std::floor(T / step + 1e-9));
  for (int i = 0; i <= m; ++i) c.push_back(std::min(T, i * step));
  if (c.back() < T) c.push_back(T);
  return c;
}

// Representative traders, population snapshots and the broker path.
void simulate_and_write(const Settings& s, const SimulateArgs& a, const Equilibrium& eq, Run& run) {
  const auto t0 = Clock::now();
  const MuPath mu = eq.mu_path();
  const ModelParams& p = eq.params;
  const TraderPath zero = evaluate_trader_control(eq.trader, 0.0, p.q0_mean, mu, eq.grid);
  const TraderPath big = evaluate_trader_control(eq.trader, 200.0, p.q0_mean, mu, eq.grid);
  write_trader_csv(run.file("fig2_trader.csv"), eq.grid, {{0, zero}});
  write_trader_csv(run.file("fig3_trader.csv"), eq.grid, {{1, big}});

  SimulationConfig cfg;
  cfg.n_paths = a.n_paths;
  cfg.seed = s.seed;
  cfg.q0_mean = p.q0_mean;
  cfg.q0_std = s.q0_std;
  cfg.checkpoints = checkpoints(p.T, a.checkpoint_step);
  const PopulationResult pop = simulate_population(eq, cfg);
  write_population_csv(run.file("fig4_population.csv"), pop);

  const BrokerPath bp = simulate_broker_path(eq);
  write_broker_csv(run.file("fig5_broker.csv"), eq.grid, bp);
  const auto peak = std::max_element(bp.inventory.begin(), bp.inventory.end()) - bp.inventory.begin();
  run["broker_inventory_peak_time"] = eq.grid.t(static_cast<int>(peak));

  if (a.sigma) {
    std::vector<Curve> paths;
    for (int j = 0; j < a.n_price_paths; ++j) paths.push_back(simulate_price(eq, a.sigma, a.S0, s.seed + j));
    write_price_csv(run.file("price.csv"), eq.grid, paths);
    run["price"] = json{{"sigma", *a.sigma}, {"S0", a.S0}, {"paths", a.n_price_paths}};
  }
  run["simulation"] = json{{"n_paths", a.n_paths}, {"checkpoints", cfg.checkpoints}};
  run.timing("simulate", seconds_since(t0));
}

int cmd_print_bound(const Settings& s) {
  const ModelParams p = validate(resolved_params(s));
  fmt::print("b admissibility bound: {:.6g}\n", b_admissibility_bound(p));
  fmt::print("L norm bound: {:.6g}\n", L_norm_bound(p));
  fmt::print("Lhat norm bound: {:.6g}\n", Lhat_norm_bound(p));
  if (p.b > 0)
    fmt::print("configured b = {:.6g} is {} the bound\n", p.b, p.b < b_admissibility_bound(p) ? "below" : "NOT below");
  return 0;
}

int cmd_solve(const Settings& s) {
  Run run(s, "solve");
  solve_and_write(s, run);
  run.finish();
  return 0;
}

int cmd_simulate(const Settings& s, const SimulateArgs& a) {
  Run run(s, "simulate");
  const Equilibrium eq = solve_and_write(s, run);
  simulate_and_write(s, a, eq, run);
  run.finish();
  return 0;
}

int cmd_finite_n(const Settings& s, const FiniteArgs& a) {
  const ModelParams p = validate(resolved_params(s));
  for (int N : a.Ns)
    if (N <= p.b / p.a || (p.b > 0 && N < 2))
      throw Error(ErrorCode::NTooSmall,
                  fmt::format("N={} with b/a={:.6g}: the finite-player Riccati system is only guaranteed solvable "
                              "for N > b/a, and b > 0 needs at least two traders",
                              N, p.b / p.a));
  Run run(s, "finite-n");
  const TimeGrid g(s.n_steps, p.T);
  // The revelation time comes from the example solve; the finite-player
  // study itself uses the configured b.
  const Equilibrium eq = solve_equilibrium(p, g, SolveOptions{true, {}});
  const MuPath mu = eq.mu_path();
  run["t_c"] = optional_time(mu.t_c);

  if (p.b == 0.0) {
    const TraderCoefficients mf =
        compute_trader_coefficients(eq.trader_kernels, compute_beta_coefficients(eq.trader_kernels, 0.0));
    bool equal = true;
    for (int N : a.Ns) {
      const FiniteCoefficients fc = compute_finite_coefficients(p, N, g, 0.0);
      equal = equal && fc.coeffs.abar == mf.abar && fc.coeffs.bbar == mf.bbar && fc.coeffs.dbar == mf.dbar &&
              fc.coeffs.cbar == mf.cbar;
    }
    run["coefficients_equal_mean_field"] = equal;
    fmt::print("b = 0: finite-N coefficients {} the mean field coefficients\n",
               equal ? "exactly equal" : "DIFFER from");
  }

  const auto t0 = Clock::now();
  const ConvergenceReport rep = convergence_study(p, g, p.b, mu, a.Ns, a.repeats, s.seed);
  run.timing("finite_n", seconds_since(t0));
  write_finite_n_csv(run.file("finite_n.csv"), rep);
  run["finite_n"] = json{{"N", a.Ns},
                         {"repeats", a.repeats},
                         {"mean_e1", rep.mean_e1},
                         {"mean_e2", rep.mean_e2},
                         {"slope_e1", rep.slope_e1},
                         {"slope_e2", rep.slope_e2}};
  fmt::print("slope e1 {:.4f}, slope e2 {:.4f}\n", rep.slope_e1, rep.slope_e2);
  run.finish();
  return 0;
}

int cmd_reproduce_example(Settings s, const ExampleArgs& a) {
  s.p = table1_params();
  s.q0_std = 0.5;
  s.zeroth_order = true;
  Run run(s, "reproduce-example");
  const ExampleReport rep = run_example_checks(s.n_steps, a.tol, APrimeOptions{a.tamper_group});
  run.timing("solve", rep.solve_seconds);

  {
    auto out = fmt::output_file(run.file("example_checks.csv").string());
    out.print("# check=name value=measured lo,hi=accepted range pass=1 if lo <= value <= hi\n");
    out.print("check,value,lo,hi,pass\n");
    for (const CheckResult& c : rep.checks)
      out.print("{},{:.17g},{:.17g},{:.17g},{}\n", c.name, c.value, c.lo, c.hi, c.pass ? 1 : 0);
  }
  json checks = json::array();
  for (const CheckResult& c : rep.checks) {
    checks.push_back(json{{"check", c.name}, {"value", c.value}, {"lo", c.lo}, {"hi", c.hi}, {"pass", c.pass}});
    fmt::print("{:<28} {:>14.6g}  [{:.3g}, {:.3g}]  {}\n", c.name, c.value, c.lo, c.hi, c.pass ? "PASS" : "FAIL");
  }
  run["checks"] = checks;
  run["tolerances"]["example_relative"] = a.tol;
  run["tamper_a_prime_group"] = a.tamper_group;
  run["t_c"] = optional_time(rep.eq.policy.t_c);

  const Equilibrium& eq = rep.eq;
  write_coefficients_csv(run.file("coefficients.csv"), eq);
  write_A_csv(run.file("fig1_A.csv"), eq.grid, eq.policy.a_prime, eq.policy.A);
  const ModelParams& p = eq.params;
  write_policy_csv(run.file("policy.csv"), eq.policy,
                   broker_objective_reduced(eq.policy.t_c, eq.policy.A, eq.grid, p.mu_mean, p.mu_second_moment),
                   false);
  simulate_and_write(s, SimulateArgs{}, eq, run);
  run["all_pass"] = rep.all_pass();
  run.finish();
  fmt::print("{}\n", rep.all_pass() ? "all checks pass" : "some checks FAILED");
  return rep.all_pass() ? 0 : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informed broker and mean field traders: equilibrium solver"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file using the option names below");
  Settings s;
  add_model_options(app, s);

  auto* solve = app.add_subcommand("solve", "coefficients, A curves and the revelation policy");
  auto* simulate = app.add_subcommand("simulate", "solve, then trader, population and broker paths");
  SimulateArgs sim;
  simulate->add_option("--n-paths", sim.n_paths, "population size")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "price volatility; enables price paths");
  simulate->add_option("--S0", sim.S0, "initial price")->capture_default_str();
  simulate->add_option("--price-paths", sim.n_price_paths, "number of price paths")->capture_default_str();
  simulate->add_option("--checkpoint-step", sim.checkpoint_step, "snapshot spacing")->capture_default_str();

  auto* finite = app.add_subcommand("finite-n", "finite-player convergence study");
  FiniteArgs fin;
  finite->add_option("--N", fin.Ns, "player counts")->capture_default_str();
  finite->add_option("--repeats", fin.repeats, "replications per N")->capture_default_str();

  auto* example = app.add_subcommand("reproduce-example", "numerical example with its closed-form checks");
  ExampleArgs ex;
  example->add_option("--tol", ex.tol, "relative tolerance of the closed-form checks")->capture_default_str();
  example->add_option("--tamper-a-prime-group", ex.tamper_group, "negate one A' term group (0..6) as a negative control")
      ->check(CLI::Range(-1, 6));

  auto* bound = app.add_subcommand("print-bound", "admissibility bound on b and operator norm bounds");
  for (auto* sub : {solve, simulate, finite, example, bound}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fmt::print(stderr, "error: {}: {}\n", to_string(ErrorCode::ConfigParse), e.what());
    return kExitError;
  }

  try {
    if (*solve) return cmd_solve(s);
    if (*simulate) return cmd_simulate(s, sim);
    if (*finite) return cmd_finite_n(s, fin);
    if (*example) return cmd_reproduce_example(s, ex);
    if (*bound) return cmd_print_bound(s);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  }
  return kExitError;
}
