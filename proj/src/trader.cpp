#include "smfg/trader.hpp"

#include <algorithm>
#include <cmath>

#include "smfg/errors.hpp"

namespace smfg {

BetaCoefficients compute_beta_coefficients(const BaseKernels& K, double b) {
  const auto& Gam = K.ric.kernel;
  const int n = K.grid().n;
  const double h = K.grid().h();

  BetaCoefficients beta;
  NeumannResult nr = neumann_resolve(K.z, b, K);
  beta.y = std::move(nr.y);
  beta.neumann_norms = std::move(nr.term_norms);
  beta.series = lhat_series(base_pair(K), b, K);

  beta.beta1 = tail_sum(Gam, beta.y.data(), 0, h);
  for (double& v : beta.beta1) v *= b;

  beta.beta2 = Kernel(n + 1);
  for (int u = 0; u <= n; ++u) {
    const Curve P = tail_sum(Gam, beta.series.sum.E.row(u), u, h);
    for (int s = u; s <= n; ++s) beta.beta2(u, s) = b * P[s];
  }

  const Kernel G = first_index_tails(beta.series.sum, h);
  beta.beta3.assign(n + 1, 0.0);
  for (int s = 0; s < n; ++s) {
    double acc = 0.5 * (G(s, s) + Gam(n, s) * G(s, n));
    for (int r = s + 1; r < n; ++r) acc += Gam(r, s) * G(s, r);
    beta.beta3[s] = K.tail[s] + b * h * acc;
  }
  return beta;
}

TraderCoefficients compute_trader_coefficients(const BaseKernels& K, BetaCoefficients beta) {
  const auto& Gam = K.ric.kernel;
  const int n = K.grid().n;
  const double h = K.grid().h();
  const double c2 = 1.0 / (2.0 * K.eta());

  TraderCoefficients c;
  c.z = K.z;
  c.bbar = K.z;

  const Curve Hb1 = head_sum(Gam, beta.beta1.data(), 0, h);
  c.abar.resize(n + 1);
  for (int t = 0; t <= n; ++t) c.abar[t] = c2 * beta.beta1[t] + K.k[t] * Hb1[t];

  c.dbar.resize(n + 1);
  for (int t = 0; t <= n; ++t) c.dbar[t] = c2 * beta.beta3[t];

  // Same corner terms as in apply_Lhat, so that cbar equals the summed series.
  c.cbar = Kernel(n + 1);
  for (int u = 0; u <= n; ++u) {
    const double* b2 = beta.beta2.row(u);
    const Curve H = head_sum(Gam, b2, u, h);
    for (int t = u; t <= n; ++t) {
      double inner = H[t] + Gam(u, t) * beta.beta3[u];
      if (t > 0 && u == 0) inner -= 0.5 * h * Gam(0, t) * b2[0];
      if (t > 0 && u == t) inner += 0.5 * h * b2[t];
      c.cbar(u, t) = K.k[t] * inner + c2 * b2[t];
    }
  }
  c.beta = std::move(beta);
  return c;
}

double column_integral(const Kernel& K, const TimeGrid& g, int t_node, double x0, double x1) {
  x1 = std::min(x1, g.t(t_node));
  x0 = std::max(x0, 0.0);
  if (x1 <= x0 || t_node == 0) return 0.0;
  const double h = g.h();
  auto val = [&](int c, double x) {
    const double w = std::clamp((x - g.t(c)) / h, 0.0, 1.0);
    return (1.0 - w) * K(c, t_node) + w * K(c + 1, t_node);
  };
  const int c0 = std::min(g.cell(x0), t_node - 1);
  double total = 0.0;
  for (int c = c0; c < t_node; ++c) {
    const double lo = std::max(x0, g.t(c));
    const double hi = std::min(x1, g.t(c + 1));
    if (hi <= lo) {
      if (g.t(c) >= x1) break;
      continue;
    }
    if (lo == g.t(c) && hi == g.t(c + 1))
      total += 0.5 * h * (K(c, t_node) + K(c + 1, t_node));
    else
      total += 0.5 * (hi - lo) * (val(c, lo) + val(c, hi));
  }
  return total;
}

PiecewisePath mu_terms(const Kernel& K, const Curve& Dc, const MuPath& mu, const TimeGrid& g) {
  PiecewisePath m;
  m.t_c = mu.t_c;
  m.values.resize(g.size());
  auto pre = [&](int k) { return mu.mean * (column_integral(K, g, k, 0.0, g.t(k)) + Dc[k]); };
  for (int k = 0; k <= g.n; ++k) {
    const double t = g.t(k);
    if (!mu.revealed(t)) {
      m.values[k] = pre(k);
    } else {
      const double tc = *mu.t_c;
      m.values[k] = mu.mean * column_integral(K, g, k, 0.0, tc) +
                    mu.realized * (column_integral(K, g, k, tc, t) + Dc[k]);
    }
  }
  if (mu.t_c && *mu.t_c < g.T) {
    const double tc = *mu.t_c;
    const int kc = g.cell(tc);
    const double w = (tc - g.t(kc)) / g.h();
    m.left = (1.0 - w) * pre(kc) + w * pre(kc + 1);
    m.right = m.left + interp(Dc, g, tc) * (mu.realized - mu.mean);
  }
  return m;
}

TraderPath evaluate_trader_control(const TraderCoefficients& c, double Q0, double q0_mean, const MuPath& mu,
                                   const TimeGrid& g) {
  const PiecewisePath m = mu_terms(c.cbar, c.dbar, mu, g);
  const PiecewisePath A = continuous_path(c.abar, g, mu.t_c);
  const PiecewisePath B = continuous_path(c.bbar, g, mu.t_c);
  TraderPath out;
  out.control = zip_paths([&](double mv, double av, double bv) { return av * q0_mean + bv * Q0 + mv; }, m, A, B);
  out.inventory = integrate_path(out.control, g, Q0);
  return out;
}

ConditionalMoments conditional_moments(const TraderCoefficients& c, const MuPath& mu, double q0_mean,
                                       double q0_second_moment, const TimeGrid& g) {
  if (q0_second_moment < q0_mean * q0_mean)
    throw Error(ErrorCode::MomentInconsistency, "q0_second_moment below q0_mean^2");
  const PiecewisePath m = mu_terms(c.cbar, c.dbar, mu, g);
  const PiecewisePath A = continuous_path(c.abar, g, mu.t_c);
  const PiecewisePath B = continuous_path(c.bbar, g, mu.t_c);
  ConditionalMoments out;
  out.nubar = zip_paths([&](double mv, double av, double bv) { return (av + bv) * q0_mean + mv; }, m, A, B);
  out.mbar = zip_paths(
      [&](double mv, double av, double bv) {
        return (av * av + 2.0 * av * bv) * q0_mean * q0_mean + bv * bv * q0_second_moment +
               2.0 * (av + bv) * mv * q0_mean + mv * mv;
      },
      m, A, B);
  return out;
}

Curve apply_Ltilde(const KernelPair& pair, const Curve& mu_nodes, double h) {
  const int n = static_cast<int>(mu_nodes.size()) - 1;
  Curve out(n + 1);
  for (int t = 0; t <= n; ++t) {
    double acc = 0.0;
    if (t > 0) {
      acc = 0.5 * (pair.E(0, t) * mu_nodes[0] + pair.E(t, t) * mu_nodes[t]);
      for (int s = 1; s < t; ++s) acc += pair.E(s, t) * mu_nodes[s];
      acc *= h;
    }
    out[t] = acc + pair.F[t] * mu_nodes[t];
  }
  return out;
}

}  // namespace smfg
