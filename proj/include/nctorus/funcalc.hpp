#pragma once

// Functional calculus: exponentials by scaling-and-squaring with a Banach
// algebra remainder bound, and multiplicative inverses by Newton iteration.
// All analytic truncation error is charged to dropped_mass.

#include <nctorus/core.hpp>

namespace nct {

struct FuncalcConfig {
  int taylor_order_max = 40;
  double squaring_threshold = 0.5;
  int newton_max_iters = 60;
  double target_tol = 1e-12;
  // Coefficients below prune_tol (absolute) are compacted into dropped_mass
  // during series evaluation; 0 disables.
  double prune_tol = 1e-16;
};

struct NonInvertibleError : Error {
  double residual;
  NonInvertibleError(const std::string& w, double r) : Error(w), residual(r) {}
};

// exp(f) with || remainder ||_1 <= (||g||^{K+1}/(K+1)!) e^{||g||} per halving
// level, valid in any Banach algebra by submultiplicativity.
inline AlgebraElement exp_element(const AlgebraElement& f,
                                  const FuncalcConfig& cfg = {}) {
  if (!is_self_adjoint(f, 1e-9 + 1e-9 * one_norm(f)))
    throw Error("exp_element: argument not self-adjoint");
  const double nf = one_norm(f);
  int halvings = 0;
  double ng = nf;
  while (ng > cfg.squaring_threshold && halvings < 60) {
    ng /= 2;
    ++halvings;
  }
  AlgebraElement g = scale(f, std::ldexp(1.0, -halvings));

  // Taylor order K with bound (||g||^{K+1}/(K+1)!) e^{||g||} <= budget.
  const double budget =
      cfg.target_tol / (4.0 * std::ldexp(1.0, halvings) *
                        std::max(1.0, std::exp(nf)));
  int K = 1;
  double term = ng;  // ||g||^{K+1}/(K+1)! at K=... track iteratively
  double bound = ng * std::exp(ng);
  while (K < cfg.taylor_order_max) {
    ++K;
    term *= ng / K;
    bound = term * ng / (K + 1) * std::exp(ng);
    if (bound <= budget) break;
  }
  if (bound > budget)
    throw Error("exp_element: tolerance unachievable; achieved bound " +
                std::to_string(bound));

  AlgebraElement r = identity(f.theta);
  AlgebraElement p = identity(f.theta);
  for (int k = 1; k <= K; ++k) {
    p = prune(mul(p, g), cfg.prune_tol);
    p = scale(p, 1.0 / k);
    r = add(r, p);
  }
  r.dropped_mass += bound;  // analytic remainder of the truncated series
  for (int h = 0; h < halvings; ++h) r = prune(mul(r, r), cfg.prune_tol);
  return r;
}

// Newton iteration x <- x(2 - a x).  Divergence doubles as the positive
// non-invertibility test for projections.
inline AlgebraElement inverse_element(const AlgebraElement& a,
                                      const AlgebraElement& guess,
                                      const FuncalcConfig& cfg = {}) {
  AlgebraElement x = guess;
  const AlgebraElement one = identity(a.theta);
  double best = 1e300;
  AlgebraElement best_x = x;
  for (int it = 0; it < cfg.newton_max_iters; ++it) {
    AlgebraElement res = sub(mul(a, x), one);
    // convergence is judged on the coefficient residual; dropped_mass is a
    // reporting bound that never shrinks and would mask quadratic convergence
    double r = res.coeff_mass();
    if (r <= cfg.target_tol) return x;
    if (r < best) {
      best = r;
      best_x = x;
    } else if (it > 2) {
      if (best <= 1e3 * cfg.target_tol) return best_x;
      throw NonInvertibleError("inverse_element: residual stalled at " +
                                   std::to_string(best),
                               best);
    }
    x = prune(sub(scale(x, 2.0), mul(x, mul(a, x))), cfg.prune_tol);
  }
  throw NonInvertibleError("inverse_element: max iterations, residual " +
                               std::to_string(best),
                           best);
}

// Default Newton seed 1/||a||_1, valid for self-adjoint a with positive
// spectrum (the exponentials this library inverts).
inline AlgebraElement inverse_element(const AlgebraElement& a,
                                      const FuncalcConfig& cfg = {}) {
  return inverse_element(a, scale(identity(a.theta), 1.0 / one_norm(a)), cfg);
}

}  // namespace nct
