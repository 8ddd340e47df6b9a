#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smfg/errors.hpp"
#include "smfg/finite_game.hpp"
#include "smfg/model.hpp"
#include "smfg/riccati.hpp"

using namespace smfg;

namespace {

ModelParams params() {
  ModelParams p = table1_params();
  p.phi = 0.02;
  p.q0_mean = 0.2;
  p.q0_second_moment = 0.29;
  p.mu_mean = 1.0;
  p.mu_second_moment = 26.0;
  return p;
}

TraderCoefficients mean_field(const ModelParams& p, const TimeGrid& g, double b) {
  const BaseKernels K = build_base_kernels(solve_gamma(p.a, p.eta, p.phi, g));
  return compute_trader_coefficients(K, compute_beta_coefficients(K, b));
}

double gap(const Curve& a, const Curve& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("finite_game") {
  TEST_CASE("b = 0 reproduces the mean field coefficients") {
    const ModelParams p = params();
    const TimeGrid g(200, p.T);
    const TraderCoefficients mf = mean_field(p, g, 0.0);
    for (int N : {1, 5, 100}) {
      const FiniteCoefficients fc = compute_finite_coefficients(p, N, g, 0.0);
      CHECK(fc.coeffs.abar == mf.abar);
      CHECK(fc.coeffs.bbar == mf.bbar);
      CHECK(fc.coeffs.dbar == mf.dbar);
      CHECK(sup_norm(fc.coeffs.abar) == 0.0);
    }
  }

  TEST_CASE("coefficient gaps shrink like 1/N") {
    const ModelParams p = params();
    const TimeGrid g(400, p.T);
    const double b = 0.5 * b_admissibility_bound(p);
    const TraderCoefficients mf = mean_field(p, g, b);
    std::vector<double> ga, gb, gd;
    for (int N : {64, 128, 256}) {
      const FiniteCoefficients fc = compute_finite_coefficients(p, N, g, b);
      ga.push_back(gap(fc.coeffs.abar, mf.abar));
      gb.push_back(gap(fc.coeffs.bbar, mf.bbar));
      gd.push_back(gap(fc.coeffs.dbar, mf.dbar));
    }
    for (const auto* v : {&ga, &gb, &gd}) {
      CHECK((*v)[0] / (*v)[1] == doctest::Approx(2.0).epsilon(0.25));
      CHECK((*v)[1] / (*v)[2] == doctest::Approx(2.0).epsilon(0.25));
    }
  }

  TEST_CASE("the (N-1)/N prefactor is visible at N = 2") {
    const ModelParams p = params();
    const double b = 0.5 * b_admissibility_bound(p);
    const TraderCoefficients mf = mean_field(p, TimeGrid(400, p.T), b);
    const TraderCoefficients mf_fine = mean_field(p, TimeGrid(800, p.T), b);
    double quad = 0;
    for (int k = 0; k <= 400; ++k) quad = std::max(quad, std::abs(mf.abar[k] - mf_fine.abar[2 * k]));
    const FiniteCoefficients fc = compute_finite_coefficients(p, 2, TimeGrid(400, p.T), b);
    CHECK(fc.b_eff == doctest::Approx(b / 2));
    CHECK(gap(fc.coeffs.abar, mf.abar) > 10.0 * quad);
  }

  TEST_CASE("N too small and length mismatch") {
    ModelParams p = params();
    const TimeGrid g(50, p.T);
    CHECK_THROWS_AS(compute_finite_coefficients(p, 1, g, 1e-6), Error);
    CHECK_NOTHROW(compute_finite_coefficients(p, 1, g, 0.0));
    CHECK_THROWS_AS(compute_finite_coefficients(p, 10, g, 0.2), Error);
    const FiniteCoefficients fc = compute_finite_coefficients(p, 3, g, 1e-6);
    const std::vector<double> two{1.0, 2.0};
    try {
      evaluate_nash_controls(fc, two, 0.2, MuPath{}, g);
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }

  TEST_CASE("equal inventories give equal controls") {
    const ModelParams p = params();
    const TimeGrid g(100, p.T);
    const FiniteCoefficients fc = compute_finite_coefficients(p, 5, g, 1e-6);
    const std::vector<double> q(5, 0.7);
    const auto ctrl = evaluate_nash_controls(fc, q, 0.2, MuPath{0.4, 1.0, 5.0}, g);
    for (const Curve& c : ctrl) CHECK(c == ctrl[0]);
  }

  TEST_CASE("Nash best-response residual") {
    const ModelParams p = params();
    const TimeGrid g(200, p.T);
    const double b = 0.2 / L_norm_estimate(build_base_kernels(solve_gamma(p.a, p.eta, p.phi, g)));
    const int N = 8;
    ModelParams q = p;
    q.b = b;
    REQUIRE(N > b / p.a);
    const FiniteCoefficients fc = compute_finite_coefficients(p, N, g, b);
    const BaseKernels& K = fc.kernels;
    const Eigen::MatrixXd LN = oracle::dense_L(K) * ((N - 1.0) / N);
    std::vector<double> inv{-1.0, 0.0, 0.3, 0.5, 1.2, 2.0, -0.4, 0.9};
    const MuPath mu{std::nullopt, p.mu_mean, 5.0};
    const auto ctrl = evaluate_nash_controls(fc, inv, p.q0_mean, mu, g);
    // nubar^N and nubar^{N,j} = E[nu^j | F_t] share the form with Q0^j -> qbar.
    const Curve nbar = evaluate_nash_controls(fc, std::vector<double>(N, p.q0_mean), p.q0_mean, mu, g)[0];
    const Eigen::VectorXd Lnb = LN * Eigen::Map<const Eigen::VectorXd>(nbar.data(), nbar.size());
    const Curve drive = apply_Ltilde(KernelPair{K.C, K.D}, Curve(g.size(), p.mu_mean), g.h());
    double res = 0;
    for (int j = 0; j < N; ++j)
      for (int k = 0; k <= g.n; ++k) {
        const double rhs = K.z[k] * inv[j] + drive[k] + b * N / (N - 1.0) * Lnb[k] - b / (N - 1.0) * Lnb[k];
        res = std::max(res, std::abs(ctrl[j][k] - rhs));
      }
    CHECK(res < 1e-8);
    CHECK(sup_norm(fc.coeffs.abar) > 1e-3);
  }

  TEST_CASE("averaging identity and the empirical average") {
    const ModelParams p = params();
    const TimeGrid g(200, p.T);
    const FiniteCoefficients fc = compute_finite_coefficients(p, 10000, g, 1e-6);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> law(p.q0_mean, 0.5);
    std::vector<double> inv(10000);
    double qhat = 0;
    for (double& v : inv) {
      v = law(rng);
      qhat += v / inv.size();
    }
    const MuPath mu{0.5, p.mu_mean, 5.0};
    const auto ctrl = evaluate_nash_controls(fc, inv, p.q0_mean, mu, g);
    const PiecewisePath m = mu_terms(fc.coeffs.cbar, fc.coeffs.dbar, mu, g);
    double ident = 0, worst = 0;
    for (int k = 0; k <= g.n; ++k) {
      double avg = 0, avg2 = 0;
      for (const Curve& c : ctrl) {
        avg += c[k];
        avg2 += c[k] * c[k];
      }
      avg /= ctrl.size();
      avg2 /= ctrl.size();
      const double form = fc.coeffs.abar[k] * p.q0_mean + fc.coeffs.bbar[k] * qhat + m.values[k];
      ident = std::max(ident, std::abs(avg - form));
      const double nbarN = (fc.coeffs.abar[k] + fc.coeffs.bbar[k]) * p.q0_mean + m.values[k];
      const double sd = std::sqrt(std::max(0.0, avg2 - avg * avg));
      if (sd > 0) worst = std::max(worst, std::abs(avg - nbarN) / (sd / std::sqrt(10000.0)));
    }
    CHECK(ident < 1e-9);
    CHECK(worst < 4.0);
  }

  TEST_CASE("convergence rates") {
    ModelParams p = table1_params();
    const TimeGrid g(800, p.T);
    const double b = 0.5 * b_admissibility_bound(p);
    const MuPath mu{0.32, p.mu_mean, 5.0};
    const ConvergenceReport rep = convergence_study(p, g, b, mu, {100, 400, 1600}, 64, 2024);
    CHECK(rep.records.size() == 3 * 64);
    CHECK(rep.slope_e1 >= -1.3);
    CHECK(rep.slope_e1 <= -0.7);
    CHECK(rep.slope_e2 >= -0.75);
    CHECK(rep.slope_e2 <= -0.25);
    const ConvergenceReport again = convergence_study(p, g, b, mu, {100, 400, 1600}, 64, 2024);
    CHECK(again.slope_e1 == rep.slope_e1);
  }

  TEST_CASE("degenerate inventories and b = 0") {
    ModelParams p = table1_params();
    p.q0_mean = 0.3;
    p.q0_second_moment = 0.09;
    const ConvergenceReport rep = convergence_study(p, TimeGrid(100, p.T), 0.0, MuPath{0.32, 0.0, 5.0}, {10, 20}, 3, 1);
    for (const auto& r : rep.records) CHECK(r.e1 < 1e-20);
  }

  TEST_CASE("log-log slope") {
    CHECK(loglog_slope({1, 2, 4}, {1, 0.25, 0.0625}) == doctest::Approx(-2.0));
  }
}
