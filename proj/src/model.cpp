#include "smfg/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smfg/errors.hpp"

namespace smfg {

ModelParams table1_params() {
  ModelParams p;
  p.a = 0.01;
  p.eta = 0.01;
  p.phi = p.a * p.a / p.eta;
  p.b = 0.0;
  p.aB = 0.01;
  p.etaB = 0.005;
  p.phiB = p.aB * p.aB / p.etaB;
  p.T = 2.0;
  p.Q0B = 0.0;
  p.mu_mean = 0.0;
  p.mu_second_moment = 25.0;
  p.mu_realized = 5.0;
  p.q0_mean = 0.0;
  p.q0_second_moment = 0.25;
  return p;
}

const ModelParams& validate(const ModelParams& p) {
  const std::pair<const char*, double> positive[] = {
      {"a", p.a}, {"eta", p.eta}, {"phi", p.phi}, {"a_B", p.aB}, {"eta_B", p.etaB}, {"phi_B", p.phiB}, {"T", p.T}};
  for (auto [name, v] : positive)
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::NonPositiveParameter, std::string(name) + " must be strictly positive");
  if (!(p.b >= 0.0) || !std::isfinite(p.b)) throw Error(ErrorCode::NonPositiveParameter, "b must be >= 0");
  if (p.mu_second_moment < p.mu_mean * p.mu_mean)
    throw Error(ErrorCode::MomentInconsistency, "mu_second_moment below mu_mean^2");
  if (p.q0_second_moment < p.q0_mean * p.q0_mean)
    throw Error(ErrorCode::MomentInconsistency, "q0_second_moment below q0_mean^2");
  return p;
}

namespace {
double m_rate(const ModelParams& p) { return std::max(p.a, std::sqrt(p.eta * p.phi)); }
}  // namespace

double b_admissibility_bound(const ModelParams& p) {
  const double m = m_rate(p);
  const double lead = std::min({p.eta * p.eta / p.a, std::pow(p.eta, 1.5) / std::sqrt(p.phi), p.eta});
  return std::exp(-2.0 * p.T * m / p.eta) * lead / (p.T * p.T + p.T);
}

double L_norm_bound(const ModelParams& p) {
  const double m = m_rate(p);
  const double T2 = p.T * p.T, e2 = p.eta * p.eta;
  return std::exp(2.0 * p.T * m / p.eta) * std::sqrt(m * m * T2 * T2 / (4.0 * e2 * e2) + T2 / e2);
}

double Lhat_norm_bound(const ModelParams& p) {
  const double m = m_rate(p);
  const double T = p.T, e = p.eta;
  const double x = std::max(T * T / (4.0 * e) + T / (2.0 * e), m / (2.0 * e * e) * (T * T + T) + T / (2.0 * e));
  return std::exp(2.0 * T * m / e) * x;
}

}  // namespace smfg
