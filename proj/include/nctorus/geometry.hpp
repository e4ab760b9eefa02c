#pragma once

// Metric families on the 2- and 4-torus, Levi-Civita Christoffel data,
// curvature tensors, scalar curvature, and the Gauss-Bonnet /
// Einstein-Hilbert trace functionals.
//
// Operator-ordering conventions are documented in docs/conventions.md.  The
// single genuinely convention-sensitive choice is the side on which the
// inverse metric contracts the lowered Christoffel data; the worked-out
// component formulas the families are validated against force
//   gamma . g^{-1}   (right)  for the conformal-type families, and
//   g^{-1} . gamma   (left)   for the non-diagonal constant-off-diagonal ones.

#include <nctorus/core.hpp>
#include <nctorus/funcalc.hpp>

#include <array>
#include <optional>

namespace nct {

enum class MetricFamily {
  ConformalFlat,        // diag(e^f, ..., e^f), n = 2 or 4
  DiagEF1,              // diag(e^f, 1), n = 2
  PartialConformal4,    // diag(e^f, e^f, 1, 1)
  PartialConformal4Alt, // diag(e^f, 1, e^f, 1)
  NonDiagReal,          // [[e^f, t], [t, e^{-f}]], 0 <= t < 1
  NonDiagHermitian,     // [[e^f, alpha], [conj(alpha), e^{-f}]], |alpha| < 1
};

struct MetricSpec {
  MetricFamily family = MetricFamily::ConformalFlat;
  int n = 2;
  AlgebraElement f;
  double t = 0;        // NonDiagReal
  cplx alpha = 0;      // NonDiagHermitian
  DerivationScale ds = DerivationScale::unit;
};

struct Metric {
  MetricSpec spec;
  int n = 2;
  std::array<std::array<AlgebraElement, 4>, 4> g, g_inv;
  AlgebraElement sqrt_det;     // volume element (scalar multiple of 1 for
                               // the non-diagonal families)
  double det_scalar = 1.0;     // sqrt(det) scalar part for NonDiag families
  double inv_residual = 0;
  bool contract_left = false;  // side of the g^{-1} contraction in Gamma
  AlgebraElement ef, emf;      // cached e^{f}, e^{-f}
};

inline bool conformal_axis(const MetricSpec& s, int i) {
  switch (s.family) {
    case MetricFamily::ConformalFlat: return true;
    case MetricFamily::DiagEF1: return i == 0;
    case MetricFamily::PartialConformal4: return i < 2;
    case MetricFamily::PartialConformal4Alt: return i == 0 || i == 2;
    default: return false;
  }
}

inline Metric build_metric(const MetricSpec& spec, const FuncalcConfig& cfg = {}) {
  if (!is_self_adjoint(spec.f, 1e-9 + 1e-9 * one_norm(spec.f)))
    throw Error("build_metric: f not self-adjoint");
  Metric m;
  m.spec = spec;
  m.n = spec.n;
  const ThetaMatrix& th = spec.f.theta;
  if (th.n != spec.n) throw Error("build_metric: dimension mismatch");
  m.ef = exp_element(spec.f, cfg);
  m.emf = exp_element(scale(spec.f, -1.0), cfg);
  const AlgebraElement one = identity(th);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      m.g[i][j] = zero(th);
      m.g_inv[i][j] = zero(th);
    }

  switch (spec.family) {
    case MetricFamily::ConformalFlat:
    case MetricFamily::DiagEF1:
    case MetricFamily::PartialConformal4:
    case MetricFamily::PartialConformal4Alt: {
      m.contract_left = false;
      for (int i = 0; i < m.n; ++i) {
        m.g[i][i] = conformal_axis(spec, i) ? m.ef : one;
        m.g_inv[i][i] = conformal_axis(spec, i) ? m.emf : one;
      }
      if (spec.family == MetricFamily::ConformalFlat)
        m.sqrt_det = (m.n == 2) ? m.ef : exp_element(scale(spec.f, 2.0), cfg);
      else if (spec.family == MetricFamily::DiagEF1)
        m.sqrt_det = exp_element(scale(spec.f, 0.5), cfg);
      else
        m.sqrt_det = m.ef;  // two conformal axes
      break;
    }
    case MetricFamily::NonDiagReal:
    case MetricFamily::NonDiagHermitian: {
      m.contract_left = true;
      cplx a = spec.family == MetricFamily::NonDiagReal ? cplx(spec.t)
                                                        : spec.alpha;
      double a2 = std::norm(a);
      if (a2 >= 1.0) throw Error("build_metric: positivity fails, |off| >= 1");
      m.g[0][0] = m.ef;
      m.g[1][1] = m.emf;
      m.g[0][1] = scale(one, a);
      m.g[1][0] = scale(one, std::conj(a));
      // adjugate/det; the off-diagonal entries need the minus signs for
      // g g^{-1} = 1 (validated below).
      double d = 1.0 - a2;
      m.g_inv[0][0] = scale(m.emf, 1.0 / d);
      m.g_inv[1][1] = scale(m.ef, 1.0 / d);
      m.g_inv[0][1] = scale(one, -a / d);
      m.g_inv[1][0] = scale(one, -std::conj(a) / d);
      m.det_scalar = std::sqrt(d);
      m.sqrt_det = scale(one, m.det_scalar);
      break;
    }
  }

  double res = 0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      AlgebraElement s(th);
      for (int l = 0; l < m.n; ++l) s = add(s, mul(m.g_inv[i][l], m.g[l][j]));
      if (i == j) s = sub(s, one);
      res = std::max(res, one_norm(s));
    }
  m.inv_residual = res;
  if (res > 1e-8)
    throw Error("build_metric: inverse residual " + std::to_string(res));
  return m;
}

struct ChristoffelTable {
  int n = 2;
  // gamma_low[i][j][k] = <nabla_i d_j, d_k>; gamma[i][j][k] = Gamma_{ij}^k
  std::array<std::array<std::array<AlgebraElement, 4>, 4>, 4> gamma_low, gamma;
};

inline ChristoffelTable christoffel(const Metric& m) {
  ChristoffelTable ct;
  ct.n = m.n;
  const auto ds = m.spec.ds;
  std::array<std::array<std::array<AlgebraElement, 4>, 4>, 4> dg;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      for (int k = 0; k < m.n; ++k) dg[i][j][k] = derive(m.g[j][k], i, ds);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      for (int k = 0; k < m.n; ++k) {
        ct.gamma_low[i][j][k] =
            scale(sub(add(dg[i][j][k], dg[j][i][k]), dg[k][i][j]), 0.5);
      }
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      for (int k = 0; k < m.n; ++k) {
        AlgebraElement s(m.spec.f.theta);
        for (int l = 0; l < m.n; ++l)
          s = add(s, m.contract_left ? mul(m.g_inv[k][l], ct.gamma_low[i][j][l])
                                     : mul(ct.gamma_low[i][j][l], m.g_inv[l][k]));
        ct.gamma[i][j][k] = s;
      }
  return ct;
}

// Coefficient of d_m in R(d_i, d_j) d_k = (nabla_j nabla_i - nabla_i nabla_j) d_k,
// with the left Leibniz rule:  d_j(Gamma_{ik}^m) + sum_l Gamma_{ik}^l Gamma_{jl}^m
// minus the (i <-> j) exchange.
inline AlgebraElement curvature_coeff(const Metric& m, const ChristoffelTable& ct,
                                      int i, int j, int k, int mm) {
  const auto ds = m.spec.ds;
  AlgebraElement c = sub(derive(ct.gamma[i][k][mm], j, ds),
                         derive(ct.gamma[j][k][mm], i, ds));
  for (int l = 0; l < m.n; ++l) {
    c = add(c, mul(ct.gamma[i][k][l], ct.gamma[j][l][mm]));
    c = sub(c, mul(ct.gamma[j][k][l], ct.gamma[i][l][mm]));
  }
  return c;
}

// R_{ijkl} = sum_m coeff^m g_{ml}  (pairing on the right slot).
inline AlgebraElement curvature_component(const Metric& m,
                                          const ChristoffelTable& ct, int i,
                                          int j, int k, int l) {
  AlgebraElement r(m.spec.f.theta);
  for (int mm = 0; mm < m.n; ++mm) {
    if (m.g[mm][l].coeffs.empty()) continue;
    r = add(r, mul(curvature_coeff(m, ct, i, j, k, mm), m.g[mm][l]));
  }
  return r;
}

// Scalar curvature by the per-family contraction (inverse factors multiply
// from the left).
inline AlgebraElement scalar_curvature(const Metric& m,
                                       const ChristoffelTable& ct) {
  const ThetaMatrix& th = m.spec.f.theta;
  auto sum_pairs = [&](const std::vector<std::pair<int, int>>& pairs) {
    AlgebraElement s(th);
    for (auto [i, j] : pairs)
      s = add(s, curvature_component(m, ct, i, j, i, j));
    return s;
  };
  switch (m.spec.family) {
    case MetricFamily::ConformalFlat: {
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
          if (i != j) pairs.push_back({i, j});
      AlgebraElement e2 = mul(m.emf, m.emf);
      return mul(e2, sum_pairs(pairs));
    }
    case MetricFamily::DiagEF1:
      return mul(m.emf, sum_pairs({{0, 1}, {1, 0}}));
    case MetricFamily::NonDiagReal:
    case MetricFamily::NonDiagHermitian: {
      double a2 = m.spec.family == MetricFamily::NonDiagReal
                      ? m.spec.t * m.spec.t
                      : std::norm(m.spec.alpha);
      return scale(sum_pairs({{0, 1}, {1, 0}}), 1.0 / (1.0 - a2));
    }
    case MetricFamily::PartialConformal4:
    case MetricFamily::PartialConformal4Alt: {
      std::vector<int> ca, fa;  // conformal / flat axes
      for (int i = 0; i < 4; ++i)
        (conformal_axis(m.spec, i) ? ca : fa).push_back(i);
      AlgebraElement e2 = mul(m.emf, m.emf);
      AlgebraElement s_cc = sum_pairs({{ca[0], ca[1]}, {ca[1], ca[0]}});
      std::vector<std::pair<int, int>> mixed;
      for (int i : ca)
        for (int j : fa) {
          mixed.push_back({i, j});
          mixed.push_back({j, i});
        }
      AlgebraElement s_mix = sum_pairs(mixed);
      AlgebraElement s_ff = sum_pairs({{fa[0], fa[1]}, {fa[1], fa[0]}});
      return add(add(mul(e2, s_cc), mul(m.emf, s_mix)), s_ff);
    }
  }
  throw Error("scalar_curvature: unsupported family");
}

struct TraceValue {
  cplx value;
  double uncertainty = 0;  // accumulated dropped_mass of the traced element
};

inline TraceValue gb_functional(const Metric& m, const ChristoffelTable& ct) {
  if (m.n != 2) throw Error("gb_functional: n must be 2");
  AlgebraElement R = scalar_curvature(m, ct);
  const double mr = R.coeff_mass(), ms = m.sqrt_det.coeff_mass();
  double unc = mr * m.sqrt_det.dropped_mass +
               R.dropped_mass * (ms + m.sqrt_det.dropped_mass);
  return {trace_pair(R, m.sqrt_det), unc};
}

inline TraceValue gb_functional(const Metric& m) {
  return gb_functional(m, christoffel(m));
}

struct EhResult {
  cplx eh;                 // tau(R sqrt(det g))
  double uncertainty = 0;
  double reference = 0;    // Q(f) (conformal) or Q_{flat axes}(f) (partial)
};

/// Q over the given axes: sum tau((d_i e^f) e^{-f} (d_i e^f)).
inline double q_magnitude(const Metric& m, const std::vector<int>& axes) {
  double q = 0;
  for (int i : axes) {
    AlgebraElement x = derive(m.ef, i, m.spec.ds);
    q += std::real(trace_pair(mul(x, m.emf), x));
  }
  return q;
}

inline EhResult eh_action(const Metric& m) {
  if (m.n != 4) throw Error("eh_action: n must be 4");
  if (m.spec.family != MetricFamily::ConformalFlat &&
      m.spec.family != MetricFamily::PartialConformal4 &&
      m.spec.family != MetricFamily::PartialConformal4Alt)
    throw Error("eh_action: unsupported family");
  ChristoffelTable ct = christoffel(m);
  AlgebraElement R = scalar_curvature(m, ct);
  EhResult r;
  r.eh = trace_pair(R, m.sqrt_det);
  r.uncertainty = R.coeff_mass() * m.sqrt_det.dropped_mass +
                  R.dropped_mass * one_norm(m.sqrt_det);
  std::vector<int> axes;
  if (m.spec.family == MetricFamily::ConformalFlat)
    for (int i = 0; i < 4; ++i) axes.push_back(i);
  else
    for (int i = 0; i < 4; ++i)
      if (!conformal_axis(m.spec, i)) axes.push_back(i);
  r.reference = q_magnitude(m, axes);
  return r;
}

// tau(R)/pi^2 computed directly from the explicit 4-torus curvature formula:
// sum_i tau(-e^{-h} d_i^2(e^h) e^{-h} + (3/2) e^{-h} d_i(e^h) e^{-h} d_i(e^h) e^{-h}),
// reported with the reference magnitude (1/2) sum_i tau(e^{-2h} d_i(e^h) e^{-h} d_i(e^h)).
inline EhResult fk_trace_functional(const AlgebraElement& h,
                                    const FuncalcConfig& cfg = {},
                                    DerivationScale ds = DerivationScale::unit) {
  if (h.theta.n != 4) throw Error("fk_trace_functional: n must be 4");
  AlgebraElement eh = exp_element(h, cfg);
  AlgebraElement emh = exp_element(scale(h, -1.0), cfg);
  AlgebraElement acc(h.theta);
  double ref = 0;
  for (int i = 0; i < 4; ++i) {
    AlgebraElement x = derive(eh, i, ds);
    AlgebraElement d2 = derive(x, i, ds);
    acc = add(acc, scale(mul(mul(emh, d2), emh), -1.0));
    acc = add(acc, scale(mul(mul(mul(mul(emh, x), emh), x), emh), 1.5));
    ref += std::real(trace(mul(mul(mul(mul(emh, emh), x), emh), x)));
  }
  EhResult r;
  r.eh = trace(acc);
  r.uncertainty = acc.dropped_mass;
  // Integration by parts gives tau(e^{-2h} d_i^2(e^h)) = +2 tau(X_i) with
  // X_i = e^{-2h} d_i(e^h) e^{-h} d_i(e^h)  (the derivative of the inverse
  // flips the sign), so the combination above traces to -(1/2) sum tau(X_i).
  r.reference = 0.5 * ref;
  return r;
}

}  // namespace nct
