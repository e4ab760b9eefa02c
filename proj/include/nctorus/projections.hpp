#pragma once

// Test-element constructions: Powers-Rieffel projections from smooth bump
// functions, and the commuting self-adjoint family (cross-product condition
// kn = ml).

#include <nctorus/core.hpp>

#include <vector>

namespace nct {

struct BumpSpec {
  double theta = 0.6180339887498949;  // trace of the projection, in (0,1)
  int fourier_cutoff = 32;
  double smoothing_width = 0;  // ramp width; 0 = auto (0.8 * min(t, 1-t))
  double ramp_shape = 2.0;     // exponent weight of the C^inf step
  double tol_proj = 1e-8;
};

namespace detail {

// C^inf partition-of-unity step built from exp(-w/u); the mollified bump it
// produces only seeds the band-limited refinement below, so moderate Fourier
// decay is enough.
inline double smooth_step(double u, double w) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  double a = std::exp(-w / u), b = std::exp(-w / (1 - u));
  return a / (a + b);
}

// Gauss-Newton refinement of the two bump functions inside the span of
// frequencies |k| <= C.  The projection conditions reduce to three functional
// equations on the circle,
//   F1(x) = g1(x) g1(x+t)                     (V^2 band of e^2 - e)
//   F2(x) = g1(x) (g0(x) + g0(x+t) - 1)       (V^1 band)
//   F3(x) = g1(x)^2 + g1(x-t)^2 - g0 + g0^2   (V^0 band)
// plus the trace constraint  g0-hat(0) = t.  The truncated bump is a good
// seed but its tail alone misses tol_proj by orders of magnitude; a dozen
// least-squares steps on the 4C+2 real coefficients push the residual to
// ~1e-10, and the refined functions are exactly band-limited so nothing is
// dropped.  Coefficient layout per function: a[0..C] real parts, a[C+1..2C]
// imaginary parts of hat(1..C); negative frequencies follow by conjugation.
inline void refine_band_limited(std::vector<double>& p, int C, double t) {
  const int NU = int(p.size());  // == 2 * (2C + 1)
  const int M = std::max(512, 8 * C);
  const int half = 2 * C + 1;
  // cached Fourier basis per shift in {0, +t, -t}: cos/sin(2 pi k (i/M + s))
  std::vector<std::vector<double>> basis_c(3), basis_s(3);
  const double shifts[3] = {0.0, t, -t};
  for (int sh = 0; sh < 3; ++sh) {
    basis_c[sh].resize(std::size_t(C + 1) * M);
    basis_s[sh].resize(std::size_t(C + 1) * M);
    for (int k = 0; k <= C; ++k)
      for (int i = 0; i < M; ++i) {
        double ph = two_pi * k * (double(i) / M + shifts[sh]);
        basis_c[sh][std::size_t(k) * M + i] = std::cos(ph);
        basis_s[sh][std::size_t(k) * M + i] = std::sin(ph);
      }
  }
  auto eval_fn = [&](const double* a, std::vector<double>& g, int sh) {
    for (int i = 0; i < M; ++i) g[i] = a[0];
    for (int k = 1; k <= C; ++k) {
      const double* cb = basis_c[sh].data() + std::size_t(k) * M;
      const double* sb = basis_s[sh].data() + std::size_t(k) * M;
      double ar = 2 * a[k], ai = 2 * a[C + k];
      for (int i = 0; i < M; ++i) g[i] += ar * cb[i] - ai * sb[i];
    }
  };
  std::vector<double> g0(M), g1(M), g0t(M), g1t(M), g1mt(M);
  auto residuals = [&](const std::vector<double>& q, std::vector<double>& r) {
    const double* A0 = q.data();
    const double* A1 = q.data() + half;
    eval_fn(A0, g0, 0);
    eval_fn(A1, g1, 0);
    eval_fn(A0, g0t, 1);
    eval_fn(A1, g1t, 1);
    eval_fn(A1, g1mt, 2);
    r.resize(3 * M + 1);
    for (int i = 0; i < M; ++i) {
      r[i] = g1[i] * g1t[i];
      r[M + i] = g1[i] * (g0[i] + g0t[i] - 1.0);
      r[2 * M + i] = g1[i] * g1[i] + g1mt[i] * g1mt[i] - g0[i] + g0[i] * g0[i];
    }
    r[3 * M] = 1e3 * (A0[0] - t);
  };
  auto norm2 = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };
  std::vector<double> r, r2;
  residuals(p, r);
  const int NR = int(r.size());
  std::vector<double> J(std::size_t(NR) * NU), JtJ(std::size_t(NU) * NU),
      A(std::size_t(NU) * NU), Jtr(NU), b(NU), d(NU);
  double lam = 1e-6;  // Levenberg-Marquardt damping
  for (int it = 0; it < 60 && norm2(r) > 1e-12; ++it) {
    for (int c = 0; c < NU; ++c) {
      std::vector<double> q = p;
      const double h = 1e-7;
      q[c] += h;
      residuals(q, r2);
      for (int i = 0; i < NR; ++i)
        J[std::size_t(c) * NR + i] = (r2[i] - r[i]) / h;
    }
    for (int c1 = 0; c1 < NU; ++c1) {
      for (int c2 = c1; c2 < NU; ++c2) {
        double s = 0;
        for (int i = 0; i < NR; ++i)
          s += J[std::size_t(c1) * NR + i] * J[std::size_t(c2) * NR + i];
        JtJ[std::size_t(c1) * NU + c2] = JtJ[std::size_t(c2) * NU + c1] = s;
      }
      double s = 0;
      for (int i = 0; i < NR; ++i) s += J[std::size_t(c1) * NR + i] * r[i];
      Jtr[c1] = -s;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      A = JtJ;
      b = Jtr;
      for (int c = 0; c < NU; ++c)
        A[std::size_t(c) * NU + c] += lam * (1.0 + JtJ[std::size_t(c) * NU + c]);
      for (int k = 0; k < NU; ++k) {  // partial-pivot elimination
        int piv = k;
        for (int i = k + 1; i < NU; ++i)
          if (std::abs(A[std::size_t(i) * NU + k]) >
              std::abs(A[std::size_t(piv) * NU + k]))
            piv = i;
        if (piv != k) {
          for (int j = 0; j < NU; ++j)
            std::swap(A[std::size_t(k) * NU + j], A[std::size_t(piv) * NU + j]);
          std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < NU; ++i) {
          double f = A[std::size_t(i) * NU + k] / A[std::size_t(k) * NU + k];
          for (int j = k; j < NU; ++j)
            A[std::size_t(i) * NU + j] -= f * A[std::size_t(k) * NU + j];
          b[i] -= f * b[k];
        }
      }
      for (int k = NU - 1; k >= 0; --k) {
        double s = b[k];
        for (int j = k + 1; j < NU; ++j) s -= A[std::size_t(k) * NU + j] * d[j];
        d[k] = s / A[std::size_t(k) * NU + k];
      }
      std::vector<double> q = p;
      for (int c = 0; c < NU; ++c) q[c] += d[c];
      residuals(q, r2);
      if (norm2(r2) < norm2(r)) {
        p = q;
        r = r2;
        lam = std::max(lam / 4, 1e-14);
        accepted = true;
      } else {
        lam *= 8;
      }
    }
    if (!accepted) break;
  }
}

}  // namespace detail

// e = g_{-1}(U) W^{-1} + g_0(U) + g_1(U) W  with W = V^{-1}, built on the
// (axis_u, axis_v) sublattice.  Conjugation by W translates functions of U by
// t = theta_{uv} (mod 1), which also equals tau(e); the bump layout is an
// up-ramp I = [0, eps], a plateau of measure t, and the complementary
// down-ramp at I + t, with g_1 = sqrt(g_0(1-g_0)) supported on I and
// g_{-1}(x) = g_1(x - t).  The truncated bumps seed a band-limited
// least-squares refinement of the projection conditions, which is what
// brings the idempotency defect within tol_proj at the default cutoff.
inline AlgebraElement powers_rieffel(const BumpSpec& spec, const ThetaMatrix& th,
                                     int axis_u = 0, int axis_v = 1) {
  double t = th.th[axis_u][axis_v];
  t -= std::floor(t);
  if (t < 1e-6 || t > 1 - 1e-6)
    throw Error("powers_rieffel: translation angle too close to integer");
  double eps = spec.smoothing_width > 0 ? spec.smoothing_width
                                        : 0.8 * std::min(t, 1.0 - t);
  eps = std::min(eps, 0.95 * std::min(t, 1.0 - t));

  const int M = 1 << 13;
  std::vector<double> g0(M), g1(M);
  for (int i = 0; i < M; ++i) {
    double x = double(i) / M;
    double v;
    if (x < eps)
      v = detail::smooth_step(x / eps, spec.ramp_shape);
    else if (x < t)
      v = 1.0;
    else if (x < t + eps)
      v = 1.0 - detail::smooth_step((x - t) / eps, spec.ramp_shape);
    else
      v = 0.0;
    g0[i] = v;
    g1[i] = (x < eps) ? std::sqrt(std::max(0.0, v - v * v)) : 0.0;
  }

  const int C = spec.fourier_cutoff;
  const int half = 2 * C + 1;
  std::vector<double> p(2 * half, 0.0);
  for (int k = 0; k <= C; ++k) {
    cplx s0 = 0, s1 = 0;
    for (int i = 0; i < M; ++i) {
      cplx ph = std::polar(1.0, -two_pi * k * double(i) / M);
      s0 += g0[i] * ph;
      s1 += g1[i] * ph;
    }
    s0 /= double(M);
    s1 /= double(M);
    p[k] = s0.real();
    p[half + k] = s1.real();
    if (k) {
      p[C + k] = s0.imag();
      p[half + C + k] = s1.imag();
    }
  }
  detail::refine_band_limited(p, C, t);
  p[0] = t;  // pin the trace exactly (refinement leaves it within roundoff)

  // The refined coefficients are the definition of e: both functions are
  // exactly band-limited, so nothing is dropped.
  AlgebraElement e(th);
  auto put = [&](int k, cplx c, int vpow, double phase_shift) {
    MultiIndex mk;
    mk.n = th.n;
    mk.k[axis_u] = k;
    mk.k[axis_v] = vpow;
    cplx coef = c * std::polar(1.0, phase_shift);
    if (vpow != 0) {
      // normal-order g(U) V^{vpow} into the U^k basis via the cocycle
      MultiIndex ku, kv;
      ku.n = kv.n = th.n;
      ku.k[axis_u] = k;
      kv.k[axis_v] = vpow;
      coef *= cocycle(th, ku, kv);
    }
    e = add(e, monomial(th, mk, coef));
  };
  for (int k = -C; k <= C; ++k) {
    int ak = std::abs(k);
    double sg = k < 0 ? -1.0 : 1.0;
    cplx c0(p[ak], ak ? sg * p[C + ak] : 0.0);
    cplx c1(p[half + ak], ak ? sg * p[half + C + ak] : 0.0);
    if (c0 != cplx(0)) put(k, c0, 0, 0.0);
    // g_1(U) W = g_1(U) V^{-1};  g_{-1}(x) = g_1(x - t) => coefficients
    // c1 * e^{-2 pi i k t}, attached to W^{-1} = V.
    if (c1 != cplx(0)) {
      put(k, c1, -1, 0.0);
      put(k, c1, +1, -two_pi * k * t);
    }
  }
  e = scale(add(e, adjoint(e)), 0.5);  // absorb quadrature roundoff

  double resid = distance_1(mul(e, e), e);
  if (resid > spec.tol_proj)
    throw Error("powers_rieffel: idempotency residual " +
                std::to_string(resid) + " above tolerance; raise cutoff");
  return e;
}

struct CommutingTerm {
  int m = 0, n = 0;
  cplx a = 0;
};

// f = sum_j (a_j U^{m_j} V^{n_j} + conj) with pairwise m_i n_j = m_j n_i, so
// every monomial (and hence every partial derivative) commutes with f.
inline AlgebraElement commuting_family(const std::vector<CommutingTerm>& terms,
                                       const ThetaMatrix& th) {
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j)
      if (terms[i].m * terms[j].n != terms[j].m * terms[i].n)
        throw Error("commuting_family: cross-product condition fails for terms " +
                    std::to_string(i) + "," + std::to_string(j));
  AlgebraElement f(th);
  for (auto& tm : terms) {
    MultiIndex k;
    k.n = th.n;
    k.k[0] = tm.m;
    k.k[1] = tm.n;
    f = add(f, monomial(th, k, tm.a));
  }
  f = add(f, adjoint(f));
  return f;
}

}  // namespace nct
