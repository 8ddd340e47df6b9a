#pragma once

namespace smfg {

// Composite trapezoid over nodes i..j (i <= j) of f(k).
template <class F>
double trapezoid(F&& f, int i, int j, double h) {
  if (j <= i) return 0.0;
  double s = 0.5 * (f(i) + f(j));
  for (int k = i + 1; k < j; ++k) s += f(k);
  return s * h;
}

// Fourth-order Gregory rule over nodes i..j. Falls back to Simpson-type
// rules on short ranges and to the trapezoid on a single cell.
template <class F>
double gregory(F&& f, int i, int j, double h) {
  const int m = j - i;
  if (m <= 0) return 0.0;
  switch (m) {
    case 1:
      return 0.5 * h * (f(i) + f(j));
    case 2:
      return h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(j));
    case 3:
      return 3.0 * h / 8.0 * (f(i) + 3.0 * f(i + 1) + 3.0 * f(i + 2) + f(j));
    case 4:
      return h / 3.0 * (f(i) + 4.0 * f(i + 1) + 2.0 * f(i + 2) + 4.0 * f(i + 3) + f(j));
    default:
      break;
  }
  double s = 0.0;
  for (int k = i + 3; k <= j - 3; ++k) s += f(k);
  s += 3.0 / 8.0 * (f(i) + f(j));
  s += 7.0 / 6.0 * (f(i + 1) + f(j - 1));
  s += 23.0 / 24.0 * (f(i + 2) + f(j - 2));
  return s * h;
}

}  // namespace smfg
