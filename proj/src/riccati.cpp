#include "smfg/riccati.hpp"

#include <fmt/core.h>

#include <cmath>
#include <string>

#include "smfg/errors.hpp"

namespace smfg {

namespace {
constexpr int kSubsteps = 4;
constexpr double kBlowup = 1e150;
}  // namespace

RiccatiSolution solve_riccati(double c0, double c1, double c2, double a, double eta, const TimeGrid& g) {
  RiccatiSolution r;
  r.grid = g;
  r.a = a;
  r.eta = eta;
  const int n = g.n;
  r.gamma.assign(g.size(), 0.0);

  auto f = [&](double x) { return c0 + c1 * x - c2 * x * x; };
  // Backward in time: x(t - dt) from x(t) with step -dt.
  const double dt = g.h() / kSubsteps;
  double x = 0.0;
  for (int k = n; k > 0; --k) {
    for (int j = 0; j < kSubsteps; ++j) {
      const double k1 = f(x);
      const double k2 = f(x - 0.5 * dt * k1);
      const double k3 = f(x - 0.5 * dt * k2);
      const double k4 = f(x - dt * k3);
      x -= dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!std::isfinite(x) || std::abs(x) > kBlowup)
      throw Error(ErrorCode::RiccatiBlowup, "Riccati solution left the finite range at t=" + std::to_string(g.t(k - 1)));
    r.gamma[k - 1] = x;
  }

  r.kappa.resize(g.size());
  for (int k = 0; k <= n; ++k) r.kappa[k] = (r.gamma[k] - 2.0 * a) / (2.0 * eta);
  r.expo.assign(g.size(), 0.0);
  for (int k = 1; k <= n; ++k) r.expo[k] = r.expo[k - 1] + 0.5 * g.h() * (r.kappa[k - 1] + r.kappa[k]);

  r.kernel = Kernel(g.size());
  for (int s = 0; s <= n; ++s) {
    double* row = r.kernel.row(s);
    for (int t = 0; t <= n; ++t) row[t] = std::exp(r.expo[t] - r.expo[s]);
  }
  return r;
}

RiccatiSolution solve_gamma(double a, double eta, double phi, const TimeGrid& g) {
  return solve_riccati(phi - a * a / eta, 2.0 * a / eta, 1.0 / (2.0 * eta), a, eta, g);
}

RiccatiSolution solve_gamma_broker(double aB, double etaB, double phiB, const TimeGrid& g) {
  return solve_riccati(2.0 * (phiB - aB * aB / etaB), 2.0 * aB / etaB, 1.0 / (2.0 * etaB), aB, etaB, g);
}

double shifted_aversion(const ModelParams& p, int N) {
  if (N <= 0 || static_cast<double>(N) <= p.b / p.a)
    throw Error(ErrorCode::NTooSmall, fmt::format("N={} must exceed b/a={:.6g}", N, p.b / p.a));
  return p.a - p.b / (2.0 * N);
}

RiccatiSolution solve_gamma_N(const ModelParams& p, int N, const TimeGrid& g) {
  const double aN = shifted_aversion(p, N);
  return solve_gamma(aN, p.eta, p.phi, g);
}

}  // namespace smfg
