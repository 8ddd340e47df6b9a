#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smfg/errors.hpp"
#include "smfg/model.hpp"
#include "smfg/riccati.hpp"
#include "smfg/trader.hpp"

using namespace smfg;

namespace {

struct Setup {
  ModelParams p;
  BaseKernels K;
  TraderCoefficients c;
};

Setup make(int n, double b, double phi = 0.01) {
  Setup s;
  s.p = table1_params();
  s.p.phi = phi;
  s.p.b = b;
  s.K = build_base_kernels(solve_gamma(s.p.a, s.p.eta, s.p.phi, TimeGrid(n, s.p.T)));
  s.c = compute_trader_coefficients(s.K, compute_beta_coefficients(s.K, b));
  return s;
}

}  // namespace

TEST_SUITE("trader") {
  TEST_CASE("b = 0 coefficients in the example setting") {
    const Setup s = make(800, 0.0);
    const TimeGrid& g = s.K.grid();
    Curve b3(g.size()), d(g.size());
    double errC = 0, scaleC = 0;
    for (int i = 0; i <= g.n; ++i) {
      b3[i] = oracle::example::beta3(g.t(i), g.T);
      d[i] = oracle::example::dbar(g.t(i), g.T);
      for (int j = i; j <= g.n; ++j) {
        const double ref = oracle::example::cbar(g.t(i), g.t(j), g.T);
        errC = std::max(errC, std::abs(s.c.cbar(i, j) - ref));
        scaleC = std::max(scaleC, std::abs(ref));
      }
    }
    CHECK(oracle::sup_rel(s.c.beta.beta3, b3) < 1e-5);
    CHECK(oracle::sup_rel(s.c.dbar, d) < 1e-5);
    CHECK(errC / scaleC < 1e-5);
    CHECK(s.c.beta.beta3[0] == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-5));
    CHECK(s.c.cbar(0, g.n) == doctest::Approx(50 * (std::exp(-2.0) - 1)).epsilon(1e-5));
    CHECK(s.c.dbar[0] == doctest::Approx(319.45).epsilon(1e-4));
    CHECK(s.c.bbar[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(sup_norm(s.c.abar) == 0.0);
    CHECK(sup_norm(s.c.beta.beta1) == 0.0);
    CHECK(sup_norm_upper(s.c.beta.beta2) == 0.0);
  }

  TEST_CASE("terminal values and Bbar = z") {
    const Setup s = make(400, 1e-5, 0.02);
    const int n = s.K.grid().n;
    CHECK(s.c.beta.beta3[n] == 0.0);
    CHECK(s.c.dbar[n] == 0.0);
    CHECK(s.c.bbar == s.K.z);
  }

  TEST_CASE("beta3 moves by O(b)") {
    const Setup s0 = make(400, 0.0);
    const Setup s1 = make(400, 1e-5);
    const Setup s2 = make(400, 0.5e-5);
    double d1 = 0, d2 = 0;
    for (std::size_t i = 0; i < s0.c.beta.beta3.size(); ++i) {
      d1 = std::max(d1, std::abs(s1.c.beta.beta3[i] - s0.c.beta.beta3[i]));
      d2 = std::max(d2, std::abs(s2.c.beta.beta3[i] - s0.c.beta.beta3[i]));
    }
    CHECK(d1 > 0.0);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.01));
  }

  TEST_CASE("kernel-pair route agrees with the Neumann route") {
    // Abar + Bbar = (I - bL)^{-1} z, and (Cbar, Dbar) is the summed Lhat series.
    const double b = 0.3 / Lhat_norm_estimate(make(200, 0.0).K);
    const Setup s = make(200, b, 0.02);
    Curve sum(s.c.abar.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = s.c.abar[i] + s.c.bbar[i];
    CHECK(oracle::sup_rel(sum, s.c.beta.y) < 1e-12);
    CHECK(oracle::sup_rel(s.c.dbar, s.c.beta.series.sum.F) < 1e-12);
    const int m = s.K.grid().size();
    double err = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) err = std::max(err, std::abs(s.c.cbar(i, j) - s.c.beta.series.sum.E(i, j)));
    CHECK(err < 1e-12 * sup_norm_upper(s.c.cbar));
  }

  TEST_CASE("fixed point residual, no revelation") {
    const Setup s = make(800, 0.5 * b_admissibility_bound(table1_params()));
    oracle::FixedPointInput in{&s.K, &s.c, s.p.b, 0.3, 2.0, 5.0, std::nullopt};
    CHECK(oracle::fixed_point_residual(in) < 1e-8);
  }

  TEST_CASE("fixed point residual, revelation at a node") {
    const double b = 0.5 * b_admissibility_bound(table1_params());
    const Setup s = make(400, b, 0.02);
    for (int c : {0, 1, 57, 128, 399}) {
      oracle::FixedPointInput in{&s.K, &s.c, b, 0.3, 2.0, 5.0, c};
      CHECK(oracle::fixed_point_residual(in) < 1e-8);
    }
  }

  TEST_CASE("fixed point residual with a visible b") {
    // Far above the admissibility bound but still contracting, so the
    // b-dependent terms are large enough to be tested.
    const double b = 0.2 / Lhat_norm_estimate(make(150, 0.0).K);
    const Setup s = make(150, b, 0.02);
    for (std::optional<int> c : {std::optional<int>{}, std::optional<int>{40}}) {
      oracle::FixedPointInput in{&s.K, &s.c, b, 0.3, 2.0, 5.0, c};
      CHECK(oracle::fixed_point_residual(in) < 1e-8);
      // Dropping the feedback term breaks the identity visibly.
      in.b = 0.0;
      CHECK(oracle::fixed_point_residual(in) > 1e-3);
    }
  }

  TEST_CASE("inactive trader before revelation") {
    const Setup s = make(800, 0.0);
    const TimeGrid& g = s.K.grid();
    const MuPath mu{0.32, 0.0, 5.0};
    const TraderPath tp = evaluate_trader_control(s.c, 0.0, 0.0, mu, g);
    for (int k = 0; k <= g.n && g.t(k) <= 0.32; ++k) CHECK(tp.control.values[k] == 0.0);
    const TraderPath big = evaluate_trader_control(s.c, 200.0, 0.0, mu, g);
    for (int k = 0; k <= g.n && g.t(k) < 0.32; ++k)
      CHECK(big.control.values[k] == doctest::Approx(s.c.bbar[k] * 200.0).epsilon(1e-14));
    CHECK(big.control.values[0] < 0.0);
  }

  TEST_CASE("terminal control equals minus terminal inventory") {
    const Setup s = make(800, 0.0);
    const TimeGrid& g = s.K.grid();
    const TraderPath tp = evaluate_trader_control(s.c, 200.0, 0.0, MuPath{0.32, 0.0, 5.0}, g);
    CHECK(tp.control.values[g.n] == doctest::Approx(-tp.inventory[g.n]).epsilon(1e-4));
  }

  TEST_CASE("revelation structure of the trader control") {
    const Setup s = make(800, 0.5 * b_admissibility_bound(table1_params()));
    const TimeGrid& g = s.K.grid();
    const double tc = 0.3213;
    const TraderPath a = evaluate_trader_control(s.c, 1.0, 0.2, MuPath{tc, 1.0, 5.0}, g);
    const TraderPath b = evaluate_trader_control(s.c, 1.0, 0.2, MuPath{tc, 1.0, 8.0}, g);
    double slope_err = 0;
    for (int k = 0; k <= g.n; ++k) {
      const double t = g.t(k);
      if (t <= tc) {
        CHECK(a.control.values[k] == b.control.values[k]);
      } else {
        const double pred = column_integral(s.c.cbar, g, k, tc, t) + s.c.dbar[k];
        slope_err = std::max(slope_err, std::abs((b.control.values[k] - a.control.values[k]) / 3.0 - pred));
      }
    }
    CHECK(slope_err < 1e-8);
    CHECK(b.control.right - b.control.left == doctest::Approx(interp(s.c.dbar, g, tc) * 7.0).epsilon(1e-12));
  }

  TEST_CASE("conditional moments") {
    const Setup s = make(800, 0.5 * b_admissibility_bound(table1_params()));
    const TimeGrid& g = s.K.grid();
    const MuPath mu{0.32, 0.0, 5.0};
    SUBCASE("variance identity") {
      const ConditionalMoments cm = conditional_moments(s.c, mu, 0.3, 0.34, g);
      for (int k = 0; k <= g.n; ++k) {
        const double lhs = cm.mbar.values[k] - cm.nubar.values[k] * cm.nubar.values[k];
        const double rhs = s.c.bbar[k] * s.c.bbar[k] * 0.25;
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(rhs), std::abs(cm.mbar.values[k])));
      }
    }
    SUBCASE("degenerate Q0") {
      const ConditionalMoments cm = conditional_moments(s.c, mu, 0.3, 0.09, g);
      for (int k = 0; k <= g.n; ++k)
        CHECK(cm.mbar.values[k] == doctest::Approx(cm.nubar.values[k] * cm.nubar.values[k]).epsilon(1e-12));
    }
    SUBCASE("zero means before revelation") {
      const Setup z = make(800, 0.0);
      const ConditionalMoments cm = conditional_moments(z.c, mu, 0.0, 0.25, g);
      for (int k = 0; k <= g.n && g.t(k) <= 0.32; ++k) {
        CHECK(cm.nubar.values[k] == 0.0);
        CHECK(cm.mbar.values[k] == doctest::Approx(z.c.bbar[k] * z.c.bbar[k] * 0.25).epsilon(1e-14));
      }
    }
    SUBCASE("inconsistent moments") {
      CHECK_THROWS_AS(conditional_moments(s.c, mu, 1.0, 0.5, g), Error);
    }
  }

  TEST_CASE("Monte Carlo average of the control matches nubar") {
    const Setup s = make(400, 0.5 * b_admissibility_bound(table1_params()));
    const TimeGrid& g = s.K.grid();
    const MuPath mu{0.32, 0.5, 5.0};
    const double q0m = 0.2, sd = 0.5;
    const ConditionalMoments cm = conditional_moments(s.c, mu, q0m, sd * sd + q0m * q0m, g);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> law(q0m, sd);
    const int checks[] = {0, 60, 150, 300, 400};
    std::vector<double> sum(5, 0.0), sum2(5, 0.0);
    const int n_mc = 100000;
    // The control is affine in Q0, so two evaluations give every sample.
    const TraderPath p0 = evaluate_trader_control(s.c, 0.0, q0m, mu, g);
    const TraderPath p1 = evaluate_trader_control(s.c, 1.0, q0m, mu, g);
    for (int i = 0; i < n_mc; ++i) {
      const double q = law(rng);
      for (int j = 0; j < 5; ++j) {
        const int k = checks[j];
        const double v = p0.control.values[k] + q * (p1.control.values[k] - p0.control.values[k]);
        sum[j] += v;
        sum2[j] += v * v;
      }
    }
    for (int j = 0; j < 5; ++j) {
      const double m = sum[j] / n_mc;
      const double se = std::sqrt(std::max(0.0, sum2[j] / n_mc - m * m) / n_mc);
      CHECK(std::abs(m - cm.nubar.values[checks[j]]) <= 3.0 * se + 1e-12);
    }
  }

  TEST_CASE("apply_Ltilde on a constant drift") {
    const Setup s = make(200, 0.0);
    const TimeGrid& g = s.K.grid();
    const Curve one(g.size(), 1.0);
    const Curve out = apply_Ltilde(KernelPair{s.K.C, s.K.D}, one, g.h());
    for (int k = 0; k <= g.n; k += 50)
      CHECK(out[k] == doctest::Approx(column_integral(s.K.C, g, k, 0.0, g.t(k)) + s.K.D[k]).epsilon(1e-12));
  }
}
