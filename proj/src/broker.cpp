#include "smfg/broker.hpp"

#include <algorithm>
#include <cmath>

#include "smfg/quadrature.hpp"

namespace smfg {

namespace {

// Gregory integrals over arbitrary node ranges of one fixed vector in O(1)
// via a prefix sum plus the end corrections.
class RangeQuad {
 public:
  RangeQuad(Curve f, double h) : f_(std::move(f)), S_(f_.size() + 1, 0.0), h_(h) {
    for (std::size_t k = 0; k < f_.size(); ++k) S_[k + 1] = S_[k] + f_[k];
  }

  double operator()(int i, int j) const {
    const int m = j - i;
    if (m < 5) return gregory([&](int k) { return f_[k]; }, i, j, h_);
    double s = S_[j + 1] - S_[i];
    s += (3.0 / 8.0 - 1.0) * (f_[i] + f_[j]);
    s += (7.0 / 6.0 - 1.0) * (f_[i + 1] + f_[j - 1]);
    s += (23.0 / 24.0 - 1.0) * (f_[i + 2] + f_[j - 2]);
    return s * h_;
  }

 private:
  Curve f_;
  Curve S_;
  double h_;
};

// J(t, s) = int_t^s K(r, s) dr for t <= s.
Kernel first_index_integrals(const Kernel& K, double h) {
  const int n = K.size() - 1;
  Kernel J(n + 1);
  Curve col;
  for (int s = 0; s <= n; ++s) {
    col.assign(s + 1, 0.0);
    for (int r = 0; r <= s; ++r) col[r] = K(r, s);
    const RangeQuad q(col, h);
    for (int t = 0; t <= s; ++t) J(t, s) = q(t, s);
  }
  return J;
}

}  // namespace

BrokerBetas compute_broker_beta_coefficients(const ModelParams& p, const TraderCoefficients& tr,
                                             const RiccatiSolution& bric, double b) {
  const auto& GB = bric.kernel;
  const TimeGrid& g = bric.grid;
  const int n = g.n;
  const double h = g.h();
  Curve w(n + 1);
  for (int s = 0; s <= n; ++s) w[s] = b + 2.0 * p.aB - bric.gamma[s];

  BrokerBetas bb;
  bb.abarB.assign(n + 1, 0.0);
  bb.dbarB.assign(n + 1, 0.0);
  bb.cbarB = Kernel(n + 1);
  const Kernel J = first_index_integrals(tr.cbar, h);

  Curve wg(n + 1);
  for (int t = 0; t <= n; ++t) {
    for (int r = t; r <= n; ++r) wg[r] = w[r] * GB(r, t);
    bb.abarB[t] = gregory([&](int s) { return wg[s] * (tr.abar[s] + tr.bbar[s]); }, t, n, h);
    bb.dbarB[t] = gregory([&](int s) { return wg[s] * (J(t, s) + tr.dbar[s]); }, t, n, h) +
                  gregory([&](int s) { return GB(s, t); }, t, n, h);
    for (int s = 0; s <= t; ++s) {
      const double* cs = tr.cbar.row(s);
      bb.cbarB(s, t) = gregory([&](int r) { return wg[r] * cs[r]; }, t, n, h);
    }
  }
  return bb;
}

BrokerCoefficients compute_broker_control_coefficients(const ModelParams& p, BrokerBetas betas,
                                                       const TraderCoefficients& tr, const RiccatiSolution& bric) {
  const auto& GB = bric.kernel;
  const TimeGrid& g = bric.grid;
  const int n = g.n;
  const double h = g.h();
  const double c2 = 1.0 / (2.0 * p.etaB);
  const Curve& kB = bric.kappa;

  BrokerCoefficients bc;
  bc.ahatB.resize(n + 1);
  bc.bhatB.resize(n + 1);
  bc.dhatB.resize(n + 1);
  bc.chatB = Kernel(n + 1);

  Curve gcol(n + 1);
  for (int t = 0; t <= n; ++t) {
    for (int s = 0; s <= t; ++s) gcol[s] = GB(s, t);
    bc.ahatB[t] = c2 * betas.abarB[t] +
                  kB[t] * gregory([&](int s) { return gcol[s] * (c2 * betas.abarB[s] - tr.abar[s] - tr.bbar[s]); },
                                  0, t, h);
    bc.bhatB[t] = kB[t] * GB(0, t);
    bc.dhatB[t] = c2 * betas.dbarB[t];
  }

  Kernel diff(n + 1);
  for (int s = 0; s <= n; ++s)
    for (int r = s; r <= n; ++r) diff(s, r) = c2 * betas.cbarB(s, r) - tr.cbar(s, r);

  for (int t = 0; t <= n; ++t) {
    for (int r = 0; r <= t; ++r) gcol[r] = GB(r, t);
    for (int s = 0; s <= t; ++s) {
      const double* ds = diff.row(s);
      const double inner = gregory([&](int r) { return gcol[r] * ds[r]; }, s, t, h) +
                           gcol[s] * (c2 * betas.dbarB[s] - tr.dbar[s]);
      bc.chatB(s, t) = c2 * betas.cbarB(s, t) + kB[t] * inner;
    }
  }
  bc.betas = std::move(betas);
  return bc;
}

Curve compute_A_prime(const ModelParams& p, const TraderCoefficients& tr, const BrokerBetas& bb, const TimeGrid& g,
                      const APrimeOptions& opt) {
  const int n = g.n;
  const double h = g.h();
  const double eta = p.eta, etaB = p.etaB;
  const Kernel& C = tr.cbar;
  const Kernel& CB = bb.cbarB;
  const Curve& D = tr.dbar;
  const Curve& DB = bb.dbarB;
  const Kernel I = first_index_integrals(C, h);
  const Kernel IB = first_index_integrals(CB, h);

  auto sign = [&](int group) { return group == opt.negate_group ? -1.0 : 1.0; };
  Curve ap(n + 1);
  for (int s = 0; s <= n; ++s) {
    const double* Cs = C.row(s);
    const double* CBs = CB.row(s);
    const double* Is = I.row(s);
    const double* IBs = IB.row(s);
    const double g0 = eta * D[s] * D[s];
    const double g1 = -D[s] * DB[s];
    const double g2 = DB[s] * DB[s] / (4.0 * etaB);
    const double g3 = gregory(
        [&](int r) {
          return 2.0 * eta * D[r] * Cs[r] - (D[r] * CBs[r] + DB[r] * Cs[r]) + DB[r] * CBs[r] / (2.0 * etaB);
        },
        s, n, h);
    const double g4 = 2.0 * eta * gregory([&](int u) { return Is[u] * Cs[u]; }, s, n, h);
    const double g5 = -gregory([&](int u) { return Is[u] * CBs[u] + IBs[u] * Cs[u]; }, s, n, h);
    const double g6 = gregory([&](int u) { return IBs[u] * CBs[u]; }, s, n, h) / (2.0 * etaB);
    ap[s] = sign(0) * g0 + sign(1) * g1 + sign(2) * g2 + sign(3) * g3 + sign(4) * g4 + sign(5) * g5 + sign(6) * g6;
  }
  return ap;
}

Curve compute_A(const Curve& a_prime, const TimeGrid& g) {
  const RangeQuad q(a_prime, g.h());
  Curve A(g.size());
  for (int t = 0; t <= g.n; ++t) A[t] = -q(t, g.n);
  return A;
}

double A_at(const Curve& A, const TimeGrid& g, double t) {
  if (g.n < 2) return interp(A, g, t);
  const int k = std::clamp(g.nearest(t), 1, g.n - 1);
  const double x = (t - g.t(k)) / g.h();
  return A[k] + 0.5 * x * (A[k + 1] - A[k - 1]) + 0.5 * x * x * (A[k - 1] - 2.0 * A[k] + A[k + 1]);
}

RevelationPolicy critical_time(const Curve& A, const Curve& a_prime, const TimeGrid& g) {
  RevelationPolicy pol;
  pol.A = A;
  pol.a_prime = a_prime;
  int k = 0;
  for (int j = 1; j <= g.n; ++j)
    if (A[j] < A[k]) k = j;
  pol.a_min = A[k];
  if (!(A[k] < 0.0)) return pol;
  double tc = g.t(k);
  if (k > 0 && k < g.n) {
    const double d = A[k - 1] - 2.0 * A[k] + A[k + 1];
    if (d > 0.0) {
      const double x = std::clamp(0.5 * (A[k - 1] - A[k + 1]) / d, -0.5, 0.5);
      tc = g.t(k) + x * g.h();
      pol.a_min = std::min(A[k], A_at(A, g, tc));
    }
  }
  pol.t_c = tc;
  return pol;
}

BrokerPath evaluate_broker_control(const BrokerCoefficients& bc, const MuPath& mu, const ModelParams& p,
                                   const PiecewisePath& nubar, const TimeGrid& g) {
  const PiecewisePath m = mu_terms(bc.chatB, bc.dhatB, mu, g);
  const PiecewisePath Ah = continuous_path(bc.ahatB, g, mu.t_c);
  const PiecewisePath Bh = continuous_path(bc.bhatB, g, mu.t_c);
  BrokerPath out;
  out.control = zip_paths([&](double mv, double av, double bv) { return av * p.q0_mean + bv * p.Q0B + mv; }, m, Ah, Bh);
  const PiecewisePath flow = zip_paths([](double v, double nb) { return v - nb; }, out.control, nubar);
  out.inventory = integrate_path(flow, g, p.Q0B);
  const PiecewisePath mb = mu_terms(bc.betas.cbarB, bc.betas.dbarB, mu, g);
  const PiecewisePath Ab = continuous_path(bc.betas.abarB, g, mu.t_c);
  out.beta = zip_paths([&](double mv, double av) { return av * p.q0_mean + mv; }, mb, Ab);
  return out;
}

double broker_objective_reduced(std::optional<double> reveal_time, const Curve& A, const TimeGrid& g, double mu_mean,
                                double mu_second_moment) {
  const double head = -mu_mean * mu_mean * A[0];
  if (!reveal_time || *reveal_time >= g.T) return head;
  const double var = mu_second_moment - mu_mean * mu_mean;
  return head - var * A_at(A, g, *reveal_time);
}

}  // namespace smfg
