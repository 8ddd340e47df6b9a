#include "smfg/grid.hpp"

#include <algorithm>
#include <cmath>

#include "smfg/errors.hpp"

namespace smfg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::MomentInconsistency: return "MomentInconsistency";
    case ErrorCode::RiccatiBlowup: return "RiccatiBlowup";
    case ErrorCode::NTooSmall: return "NTooSmall";
    case ErrorCode::SeriesDiverging: return "SeriesDiverging";
    case ErrorCode::TruncationLimit: return "TruncationLimit";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingSigma: return "MissingSigma";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::BAboveBound: return "BAboveBound";
  }
  return "Unknown";
}

TimeGrid::TimeGrid(int n_steps, double horizon) : n(n_steps), T(horizon) {
  if (n_steps < 1) throw Error(ErrorCode::NonPositiveParameter, "n_steps must be >= 1");
  if (!(horizon > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "T must be > 0");
}

int TimeGrid::cell(double x) const {
  int k = static_cast<int>(std::floor(x / h()));
  return std::clamp(k, 0, n - 1);
}

int TimeGrid::nearest(double x) const {
  int k = static_cast<int>(std::lround(x / h()));
  return std::clamp(k, 0, n);
}

double sup_norm(const Curve& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm_upper(const Kernel& k) {
  double m = 0.0;
  for (int s = 0; s < k.size(); ++s)
    for (int t = s; t < k.size(); ++t) m = std::max(m, std::abs(k(s, t)));
  return m;
}

double interp(const Curve& c, const TimeGrid& g, double t) {
  const int k = g.cell(t);
  const double w = std::clamp((t - g.t(k)) / g.h(), 0.0, 1.0);
  return (1.0 - w) * c[k] + w * c[k + 1];
}

double interp(const Kernel& K, const TimeGrid& g, double s, double t) {
  const int i = g.cell(s), j = g.cell(t);
  const double u = std::clamp((s - g.t(i)) / g.h(), 0.0, 1.0);
  const double v = std::clamp((t - g.t(j)) / g.h(), 0.0, 1.0);
  return (1 - u) * (1 - v) * K(i, j) + u * (1 - v) * K(i + 1, j) + (1 - u) * v * K(i, j + 1) +
         u * v * K(i + 1, j + 1);
}

PiecewisePath continuous_path(Curve values, const TimeGrid& g, std::optional<double> t_c) {
  PiecewisePath p;
  p.t_c = t_c;
  if (t_c && *t_c < g.T) p.left = p.right = interp(values, g, *t_c);
  p.values = std::move(values);
  return p;
}

namespace {

// int over cell [t_k, t_k+1] from a cubic through four nodes of one smooth
// branch [lo, hi]; trapezoid when the branch is too short.
double cell_integral(const Curve& f, int k, int lo, int hi, double h) {
  if (k - 1 >= lo && k + 2 <= hi) return h / 24.0 * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
  if (k + 3 <= hi) return h / 24.0 * (9.0 * f[k] + 19.0 * f[k + 1] - 5.0 * f[k + 2] + f[k + 3]);
  if (k - 2 >= lo) return h / 24.0 * (f[k - 2] - 5.0 * f[k - 1] + 19.0 * f[k] + 9.0 * f[k + 1]);
  return 0.5 * h * (f[k] + f[k + 1]);
}

}  // namespace

Curve integrate_path(const PiecewisePath& p, const TimeGrid& g, double x0) {
  Curve out(g.size());
  out[0] = x0;
  const double h = g.h();
  const bool jump = p.t_c && *p.t_c < g.T;
  const int kc = jump ? g.cell(*p.t_c) : -1;
  for (int k = 0; k < g.n; ++k) {
    double inc;
    if (k == kc) {
      const double tc = *p.t_c;
      inc = 0.5 * (tc - g.t(k)) * (p.values[k] + p.left) + 0.5 * (g.t(k + 1) - tc) * (p.right + p.values[k + 1]);
    } else if (jump && k < kc) {
      inc = cell_integral(p.values, k, 0, kc, h);
    } else {
      inc = cell_integral(p.values, k, jump ? kc + 1 : 0, g.n, h);
    }
    out[k + 1] = out[k] + inc;
  }
  return out;
}

double path_value(const PiecewisePath& p, const TimeGrid& g, double t, bool right_limit) {
  const bool jump = p.t_c && *p.t_c < g.T;
  if (!jump) return interp(p.values, g, t);
  const double tc = *p.t_c;
  const int kc = g.cell(tc);
  if (t == tc) return right_limit ? p.right : p.left;
  const int k = g.cell(t);
  if (k != kc) return interp(p.values, g, t);
  // Inside the jump cell: interpolate toward the one-sided limit.
  if (t < tc) {
    const double w = (t - g.t(k)) / (tc - g.t(k));
    return (1 - w) * p.values[k] + w * p.left;
  }
  const double w = (t - tc) / (g.t(k + 1) - tc);
  return (1 - w) * p.right + w * p.values[k + 1];
}

}  // namespace smfg
