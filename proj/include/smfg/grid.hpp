#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace smfg {

// Uniform grid t_k = k*T/n on [0,T].
struct TimeGrid {
  int n = 800;
  double T = 2.0;

  TimeGrid() = default;
  TimeGrid(int n_steps, double horizon);

  int size() const { return n + 1; }
  double h() const { return T / n; }
  double t(int k) const { return k == n ? T : k * h(); }

  // Index k with t_k <= x < t_{k+1}, clamped to [0, n-1].
  int cell(double x) const;
  // Nearest node.
  int nearest(double x) const;
};

using Curve = std::vector<double>;

// Square table indexed (s-node, t-node). Most kernels only use s <= t.
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(int size, double fill = 0.0)
      : m_(size), v_(static_cast<std::size_t>(size) * size, fill) {}

  int size() const { return m_; }
  double operator()(int s, int t) const { return v_[idx(s, t)]; }
  double& operator()(int s, int t) { return v_[idx(s, t)]; }
  const double* row(int s) const { return v_.data() + idx(s, 0); }
  double* row(int s) { return v_.data() + idx(s, 0); }

  bool operator==(const Kernel&) const = default;

 private:
  std::size_t idx(int s, int t) const { return static_cast<std::size_t>(s) * m_ + t; }
  int m_ = 0;
  std::vector<double> v_;
};

double sup_norm(const Curve& c);
// Sup over the upper triangle s <= t.
double sup_norm_upper(const Kernel& k);

double interp(const Curve& c, const TimeGrid& g, double t);
double interp(const Kernel& k, const TimeGrid& g, double s, double t);

// A time path sampled at the nodes, with a possible jump at t_c.
// left/right hold the one-sided limits at t_c; values at nodes t_k <= t_c
// belong to the left branch.
struct PiecewisePath {
  Curve values;
  std::optional<double> t_c;
  double left = 0.0;
  double right = 0.0;
};

// A continuous path (no jump) that still carries t_c so it can be zipped
// with jumping paths.
PiecewisePath continuous_path(Curve values, const TimeGrid& g, std::optional<double> t_c);

// Pointwise map over paths sharing the same t_c.
template <class F, class... P>
PiecewisePath zip_paths(F&& f, const PiecewisePath& first, const P&... rest) {
  PiecewisePath out;
  out.t_c = first.t_c;
  out.values.resize(first.values.size());
  for (std::size_t k = 0; k < first.values.size(); ++k) out.values[k] = f(first.values[k], rest.values[k]...);
  out.left = f(first.left, rest.left...);
  out.right = f(first.right, rest.right...);
  return out;
}

// Cumulative integral x_k = x0 + int_0^{t_k} p(s) ds. Cells inside a smooth
// branch use a four-node cubic rule; the cell containing t_c is split at the
// jump and each part integrated by trapezoid.
Curve integrate_path(const PiecewisePath& p, const TimeGrid& g, double x0 = 0.0);

// Value at t from the left (t <= t_c) or right branch.
double path_value(const PiecewisePath& p, const TimeGrid& g, double t, bool right_limit);

}  // namespace smfg
