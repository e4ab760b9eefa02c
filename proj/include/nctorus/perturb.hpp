#pragma once

// Gauss-Bonnet trace as a function of the perturbation parameter, its Taylor
// coefficients, and the order-4 obstruction functional.

#include <nctorus/core.hpp>
#include <nctorus/funcalc.hpp>

#include <vector>

namespace nct {

struct PerturbationProbe {
  AlgebraElement f;
  std::vector<double> t_samples = {-0.25, -0.2, -0.15, -0.1, -0.05,
                                   0.05,  0.1,  0.15,  0.2,  0.25};
  int fit_degree = 6;
};

// Omega_f(t) = (1/2) tau( (d2 e^{-tf/2})(d2 e^{tf})
//                        + (d2 e^{tf/2})(d2 e^{tf}) e^{-tf} )
inline cplx omega(const AlgebraElement& f, double t,
                  DerivationScale ds = DerivationScale::unit,
                  const FuncalcConfig& cfg = {}) {
  if (t == 0) return 0;
  AlgebraElement eh = exp_element(scale(f, t * 0.5), cfg);   // e^{tf/2}
  AlgebraElement emh = inverse_element(eh, cfg);             // e^{-tf/2}
  AlgebraElement ef = mul(eh, eh);                           // e^{tf}
  AlgebraElement emf = mul(emh, emh);                        // e^{-tf}
  AlgebraElement d_ef = derive(ef, 1, ds);
  cplx v = trace(mul(derive(emh, 1, ds), d_ef)) +
           trace(mul(derive(eh, 1, ds), mul(d_ef, emf)));
  return 0.5 * v;
}

// 3 tau( f^2 (d2 f)(d2 f) - f (d2 f) f (d2 f) ), exact in polynomial
// arithmetic.
inline cplx order4_obstruction(const AlgebraElement& f,
                               DerivationScale ds = DerivationScale::unit) {
  AlgebraElement d = derive(f, 1, ds);
  AlgebraElement fd = mul(f, d);
  cplx a = trace(mul(mul(f, fd), d));
  cplx b = trace(mul(fd, fd));
  return 3.0 * (a - b);
}

// Least-squares polynomial fit of omega(t) samples; returns c_0..c_degree.
inline std::vector<cplx> taylor_fit(const PerturbationProbe& probe,
                                    DerivationScale ds = DerivationScale::unit,
                                    const FuncalcConfig& cfg = {}) {
  const int deg = probe.fit_degree;
  const int m = static_cast<int>(probe.t_samples.size());
  if (m < deg + 2) throw Error("taylor_fit: need at least fit_degree + 2 samples");

  std::vector<cplx> y(m);
  for (int i = 0; i < m; ++i) y[i] = omega(probe.f, probe.t_samples[i], ds, cfg);

  // normal equations A^T A c = A^T y, A = Vandermonde in t / t_max
  // (normalizing the variable keeps the Gram matrix well conditioned)
  double tmax = 0;
  for (double t : probe.t_samples) tmax = std::max(tmax, std::abs(t));
  if (tmax == 0) throw Error("taylor_fit: degenerate t samples");
  const int p = deg + 1;
  std::vector<long double> ata(p * p, 0.0L);
  std::vector<std::complex<long double>> aty(p, 0.0L);
  for (int i = 0; i < m; ++i) {
    long double pw[16];
    pw[0] = 1.0L;
    for (int j = 1; j < p; ++j)
      pw[j] = pw[j - 1] * (long double)(probe.t_samples[i] / tmax);
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < p; ++c) ata[r * p + c] += pw[r] * pw[c];
      aty[r] += pw[r] * std::complex<long double>(y[i].real(), y[i].imag());
    }
  }
  // Gaussian elimination with partial pivoting
  long double max_piv = 0, min_piv = 1e300L;
  for (int k = 0; k < p; ++k) {
    int piv = k;
    for (int r = k + 1; r < p; ++r)
      if (std::abs(ata[r * p + k]) > std::abs(ata[piv * p + k])) piv = r;
    if (piv != k) {
      for (int c = 0; c < p; ++c) std::swap(ata[k * p + c], ata[piv * p + c]);
      std::swap(aty[k], aty[piv]);
    }
    long double d = ata[k * p + k];
    max_piv = std::max(max_piv, std::abs(d));
    min_piv = std::min(min_piv, std::abs(d));
    if (std::abs(d) < 1e-300L || max_piv / std::abs(d) > 1e14L)
      throw Error("taylor_fit: ill-conditioned normal equations");
    for (int r = k + 1; r < p; ++r) {
      long double fctr = ata[r * p + k] / d;
      for (int c = k; c < p; ++c) ata[r * p + c] -= fctr * ata[k * p + c];
      aty[r] -= fctr * aty[k];
    }
  }
  std::vector<std::complex<long double>> a(p);
  for (int k = p - 1; k >= 0; --k) {
    std::complex<long double> s = aty[k];
    for (int c = k + 1; c < p; ++c) s -= ata[k * p + c] * a[c];
    a[k] = s / ata[k * p + k];
  }
  std::vector<cplx> coef(p);
  long double sc = 1.0L;
  for (int k = 0; k < p; ++k) {
    coef[k] = cplx((double)(a[k].real() / sc), (double)(a[k].imag() / sc));
    sc *= (long double)tmax;
  }
  return coef;
}

}  // namespace nct
