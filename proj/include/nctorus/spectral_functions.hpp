#pragma once

// Scalar spectral functions used by the modular-curvature formulas.
// Everything reduces to K(s) = (e^s - 1)/s and its divided differences, which
// makes every evaluator entire and numerically stable across the removable
// singularities at s = 0, t = 0, s + t = 0.

#include <cmath>
#include <functional>
#include <string>

namespace nct {

// K(s) = (e^s - 1)/s, series for small |s|.
inline double fnK(double s) {
  if (std::abs(s) > 0.5) return std::expm1(s) / s;
  double term = 1.0, sum = 1.0;
  for (int j = 1; j < 30; ++j) {
    term *= s / (j + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Divided difference (K(a)-K(b))/(a-b); complete-homogeneous series when the
// arguments are close.
inline double fnK_dd(double a, double b) {
  if (std::abs(a - b) > 0.1) return (fnK(a) - fnK(b)) / (a - b);
  // sum_{m>=0} h_m(a,b)/(m+2)!  with h_m = sum a^p b^{m-p}
  double h = 1.0, bm = 1.0, fact = 2.0, sum = 0.0;
  int small = 0;
  for (int m = 0; m < 60; ++m) {
    double term = h / fact;
    sum += term;
    // h_m vanishes identically on a + b = 0 for odd m, so one tiny term is
    // not a stopping criterion; require two in a row
    small = std::abs(term) < 1e-19 * std::max(1.0, std::abs(sum)) ? small + 1 : 0;
    if (small >= 2) break;
    bm *= b;
    h = a * h + bm;
    fact *= (m + 3);
  }
  return sum;
}

inline double fn_g1(double mu) {  // (mu-1)/log(mu)
  return fnK(std::log(mu));
}

// g2hat(s,t) := g2(e^s, e^t) = (s e^s (e^t - 1) - t (e^s - 1)) / (s t (s+t))
//             = e^s (K(t) - K(-s)) / (t + s).
inline double fn_g2hat(double s, double t) {
  return std::exp(s) * fnK_dd(t, -s);
}

// H used by the curvature formula: the combination -2 g2 + (1/2) g1 g1.
inline double fnH(double s, double t) {
  return -2.0 * fn_g2hat(s, t) + 0.5 * fnK(s) * fnK(t);
}

// The variant of H quoted from the earlier two-torus literature,
// -2 (K(s+t)-K(t))/s - (3/2) K(t) K(s).  A genuinely different function; the
// printed scalar identities relating H(s,-s) and H(-s,s) hold for this one.
inline double fnH_lit(double s, double t) {
  return -2.0 * fnK_dd(s + t, t) - 1.5 * fnK(t) * fnK(s);
}

struct SpectralFunction {
  std::string name;
  std::function<double(double)> f;
};

struct SpectralFunction2 {
  std::string name;
  std::function<double(double, double)> f;
};

inline SpectralFunction spectral_K() { return {"K", [](double s) { return fnK(s); }}; }
inline SpectralFunction spectral_exp() {
  return {"exp", [](double s) { return std::exp(s); }};
}
inline SpectralFunction2 spectral_H() {
  return {"H", [](double s, double t) { return fnH(s, t); }};
}
inline SpectralFunction2 spectral_g2() {
  return {"g2", [](double s, double t) { return fn_g2hat(s, t); }};
}

}  // namespace nct
