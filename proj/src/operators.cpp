#include "smfg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smfg/errors.hpp"

namespace smfg {

namespace {
constexpr int kMaxTerms = 200;
constexpr double kStopRel = 1e-12;
}  // namespace

Curve tail_sum(const Kernel& G, const double* f, int from, double h) {
  const int n = G.size() - 1;
  Curve P(n + 1, 0.0);
  for (int u = n - 1; u >= from; --u) {
    const double g = G(u + 1, u);
    P[u] = g * P[u + 1] + 0.5 * h * (f[u] + g * f[u + 1]);
  }
  return P;
}

Curve head_sum(const Kernel& G, const double* f, int from, double h) {
  const int n = G.size() - 1;
  Curve H(n + 1, 0.0);
  for (int t = from + 1; t <= n; ++t) {
    const double g = G(t - 1, t);
    H[t] = g * H[t - 1] + 0.5 * h * (g * f[t - 1] + f[t]);
  }
  return H;
}

BaseKernels build_base_kernels(RiccatiSolution ric) {
  BaseKernels K;
  const TimeGrid g = ric.grid;
  const int n = g.n;
  const double eta = ric.eta;
  K.k.resize(n + 1);
  K.z.resize(n + 1);
  for (int t = 0; t <= n; ++t) {
    K.k[t] = (ric.gamma[t] - 2.0 * ric.a) / (4.0 * eta * eta);
    K.z[t] = ric.kappa[t] * ric.kernel(0, t);
  }
  const Curve ones(n + 1, 1.0);
  K.tail = tail_sum(ric.kernel, ones.data(), 0, g.h());
  K.D.resize(n + 1);
  for (int t = 0; t <= n; ++t) K.D[t] = K.tail[t] / (2.0 * eta);
  K.C = Kernel(n + 1);
  for (int s = 0; s <= n; ++s)
    for (int t = s; t <= n; ++t) K.C(s, t) = K.k[t] * ric.kernel(s, t) * K.tail[s];
  K.ric = std::move(ric);
  return K;
}

Kernel first_index_tails(const KernelPair& pair, double h) {
  const int n = pair.E.size() - 1;
  Kernel G(n + 1);
  for (int r = 0; r <= n; ++r) {
    G(r, r) = pair.F[r];
    for (int s = r - 1; s >= 0; --s) G(s, r) = G(s + 1, r) + 0.5 * h * (pair.E(s, r) + pair.E(s + 1, r));
  }
  return G;
}

Curve apply_L(const Curve& xi, const BaseKernels& K) {
  const auto& G = K.ric.kernel;
  const double h = K.grid().h();
  const Curve P = tail_sum(G, xi.data(), 0, h);
  const Curve H = head_sum(G, P.data(), 0, h);
  Curve out(xi.size());
  for (std::size_t t = 0; t < xi.size(); ++t) out[t] = K.k[t] * H[t] + P[t] / (2.0 * K.eta());
  return out;
}

// The corner terms make the grid operator intertwine exactly with the grid
// L acting on paths whose drift estimate is a nodal martingale: swapping the
// order of the two trapezoid sums over the triangle 0 <= u <= s <= t leaves
// a half weight at (u, s) = (0, 0) and at u = s = t.
KernelPair apply_Lhat(const KernelPair& pair, const BaseKernels& K) {
  const auto& Gam = K.ric.kernel;
  const int n = K.grid().n;
  const double h = K.grid().h();
  const double c2 = 1.0 / (2.0 * K.eta());
  const Kernel G = first_index_tails(pair, h);

  KernelPair out{Kernel(n + 1), Curve(n + 1, 0.0)};
  Curve P(n + 1);
  for (int s = 0; s <= n; ++s) {
    const double* Es = pair.E.row(s);
    std::fill(P.begin(), P.end(), 0.0);
    for (int u = n - 1; u >= s; --u) {
      const double g = Gam(u + 1, u);
      P[u] = g * P[u + 1] + 0.5 * h * (Es[u] + g * Es[u + 1]);
    }
    const double* Gs = G.row(s);
    const double R = [&] {
      if (s == n) return 0.0;
      double acc = 0.5 * (Gs[s] + Gam(n, s) * Gs[n]);
      for (int r = s + 1; r < n; ++r) acc += Gam(r, s) * Gs[r];
      return acc * h;
    }();
    out.F[s] = c2 * R;

    double H = 0.0;
    for (int t = s; t <= n; ++t) {
      if (t > s) {
        const double g = Gam(t - 1, t);
        H = g * H + 0.5 * h * (g * P[t - 1] + P[t]);
      }
      double T1 = K.k[t] * H;
      if (t > 0 && s == 0) T1 -= 0.5 * h * K.k[t] * Gam(0, t) * P[0];
      if (t > 0 && s == t) T1 += 0.5 * h * K.k[t] * P[t];
      out.E(s, t) = T1 + K.k[t] * Gam(s, t) * R + c2 * P[t];
    }
  }
  return out;
}

NeumannResult neumann_resolve(const Curve& x, double b, const BaseKernels& K) {
  NeumannResult res;
  res.y = x;
  double prev = sup_norm(x);
  res.term_norms.push_back(prev);
  if (b == 0.0) return res;
  Curve term = x;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term = apply_L(term, K);
    for (double& v : term) v *= b;
    for (std::size_t i = 0; i < term.size(); ++i) res.y[i] += term[i];
    const double tn = sup_norm(term);
    res.term_norms.push_back(tn);
    if (tn <= kStopRel * (1.0 + sup_norm(res.y))) return res;
    if (k >= 2 && tn > prev) throw Error(ErrorCode::SeriesDiverging, "Neumann terms grow at order " + std::to_string(k));
    prev = tn;
  }
  throw Error(ErrorCode::TruncationLimit, "Neumann series needs more than 200 terms");
}

KernelPair base_pair(const BaseKernels& K) { return KernelPair{K.C, K.D}; }

SeriesResult lhat_series(const KernelPair& seed, double b, const BaseKernels& K) {
  SeriesResult res;
  res.sum = seed;
  auto pair_norm = [](const KernelPair& p) { return std::max(sup_norm_upper(p.E), sup_norm(p.F)); };
  double prev = pair_norm(seed);
  res.term_norms.push_back(prev);
  if (b == 0.0) return res;
  const int n = K.grid().n;
  KernelPair term = seed;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term = apply_Lhat(term, K);
    for (int s = 0; s <= n; ++s) {
      for (int t = s; t <= n; ++t) {
        term.E(s, t) *= b;
        res.sum.E(s, t) += term.E(s, t);
      }
      term.F[s] *= b;
      res.sum.F[s] += term.F[s];
    }
    const double tn = pair_norm(term);
    res.term_norms.push_back(tn);
    if (tn <= kStopRel * (1.0 + pair_norm(res.sum))) return res;
    if (k >= 2 && tn > prev) throw Error(ErrorCode::SeriesDiverging, "Lhat terms grow at order " + std::to_string(k));
    prev = tn;
  }
  throw Error(ErrorCode::TruncationLimit, "Lhat series needs more than 200 terms");
}

namespace {
BaseKernels with_abs_k(const BaseKernels& K) {
  BaseKernels A = K;
  for (double& v : A.k) v = std::abs(v);
  return A;
}
}  // namespace

double L_norm_estimate(const BaseKernels& K) {
  const BaseKernels A = with_abs_k(K);
  return sup_norm(apply_L(Curve(K.grid().size(), 1.0), A));
}

double Lhat_norm_estimate(const BaseKernels& K) {
  const BaseKernels A = with_abs_k(K);
  const int m = K.grid().size();
  const KernelPair ones{Kernel(m, 1.0), Curve(m, 1.0)};
  const KernelPair out = apply_Lhat(ones, A);
  return std::max(sup_norm_upper(out.E), sup_norm(out.F));
}

}  // namespace smfg
