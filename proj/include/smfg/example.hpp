#pragma once

#include <string>
#include <vector>

#include "smfg/broker.hpp"
#include "smfg/equilibrium.hpp"

namespace smfg {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double lo = 0.0;  // pass iff lo <= value <= hi
  double hi = 0.0;
  bool pass = false;
};

struct ExampleReport {
  Equilibrium eq;
  double solve_seconds = 0.0;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

// Solves the numerical example in zeroth-order mode on n_steps intervals and
// compares against its closed forms. Relative errors are sup|x - ref| / sup|ref|
// over the grid and must stay below tol.
ExampleReport run_example_checks(int n_steps, double tol, const APrimeOptions& a_prime = {});

// Closed forms of the example (gamma = gamma^B = 0, a = eta = aB = 0.01,
// etaB = 0.005).
namespace example_closed_form {
double beta3(double s, double T);
double cbar(double s, double t, double T);
double dbar(double t, double T);
double cbarB(double s, double t, double T);
double dbarB(double t, double T);
double a_prime(double t, double T);
}  // namespace example_closed_form

}  // namespace smfg
