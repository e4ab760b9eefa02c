#pragma once

// Named verification scenarios: the reproduction surface of the library.
// Each check records the quantity, its uncertainty (propagated dropped_mass),
// the tolerance it was held to, and the anchor of the claim it verifies.

#include <nctorus/core.hpp>
#include <nctorus/funcalc.hpp>
#include <nctorus/geometry.hpp>
#include <nctorus/golden.hpp>
#include <nctorus/modular.hpp>
#include <nctorus/modular_curvature.hpp>
#include <nctorus/perturb.hpp>
#include <nctorus/projections.hpp>
#include <nctorus/random.hpp>
#include <nctorus/report.hpp>
#include <nctorus/spectral_functions.hpp>

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace nct {

namespace detail {

inline CheckRecord vanishing(const std::string& name, cplx value, double unc,
                             double tol, const std::string& ref,
                             const std::string& note = "") {
  return {name, value, unc, tol, std::abs(value) <= tol + unc, ref, note};
}

inline CheckRecord relative(const std::string& name, double resid, double scl,
                            double rtol, double unc, const std::string& ref,
                            const std::string& note = "") {
  return {name, resid, unc, rtol * scl, resid <= rtol * scl + unc, ref, note};
}

inline CheckRecord above(const std::string& name, double value, double floor,
                         double unc, const std::string& ref,
                         const std::string& note = "") {
  return {name, value, unc, floor, value > floor + unc, ref, note};
}

inline double tol_or(const ScenarioConfig& cfg, double dflt) {
  return cfg.tol > 0 ? cfg.tol : dflt;
}

inline int box_or(const ScenarioConfig& cfg, int dflt) {
  return cfg.box_radius > 0 ? cfg.box_radius : dflt;
}

// Projection used as a test element (not itself under scrutiny): widen the
// Fourier cutoff when the translation angle leaves little room between the
// bump and its translate, and only require idempotency at the comparison
// tolerance of the surrounding scenario.
inline AlgebraElement make_projection(const ThetaMatrix& th, int u, int v) {
  double t = th.th[u][v];
  t -= std::floor(t);
  double tmin = std::min(t, 1.0 - t);
  BumpSpec bs;
  bs.theta = t;
  bs.fourier_cutoff = std::max(32, int(std::ceil(14.0 / tmin)));
  bs.tol_proj = 1e-7;
  return powers_rieffel(bs, th, u, v);
}

}  // namespace detail

// ---------------------------------------------------------------- n = 2 GB

inline void scn_gb_conformal_2t(const ScenarioConfig& cfg, ScenarioReport& rep) {
  const double tol = detail::tol_or(cfg, 1e-8);
  ThetaMatrix th = ThetaMatrix::torus2(cfg.theta);
  Rng rng(cfg.seed);
  FuncalcConfig fc;
  fc.target_tol = 1e-11;
  fc.prune_tol = 1e-15;
  for (int i = 0; i < 20; ++i) {
    AlgebraElement f = random_self_adjoint(th, 2, 4, 1.0, rng);
    MetricSpec spec{MetricFamily::ConformalFlat, 2, f, 0, 0, cfg.ds};
    TraceValue gb = gb_functional(build_metric(spec, fc));
    rep.add(detail::vanishing("tau(R sqrt(det g)), conformal f #" +
                                  std::to_string(i),
                              gb.value, gb.uncertainty, tol, "Prop. (G-B)"));
  }
}

inline void scn_series_telescoping(const ScenarioConfig& cfg,
                                   ScenarioReport& rep) {
  // exact partial sums S_Q of sum_q (q^2+2q-1)/(q!(q+2)!) as fractions
  auto gcd = [](long long a, long long b) { return std::gcd(a, b); };
  long long num = 0, den = 1;
  auto push = [&](long long n2, long long d2) {
    long long n = num * d2 + n2 * den, d = den * d2;
    long long g = gcd(std::llabs(n), d);
    if (g) { n /= g; d /= g; }
    num = n; den = d;
  };
  long long fq = 1, fq2 = 2;  // q!, (q+2)!
  const long long want_num[3] = {-1, -1, -1};
  const long long want_den[3] = {2, 6, 48};
  for (int q = 0; q <= 2; ++q) {
    if (q > 0) { fq *= q; fq2 *= (q + 2); }
    push(1LL * q * q + 2 * q - 1, fq * fq2);
    bool ok = (num == want_num[q] && den == want_den[q]);
    rep.add({"partial sum S_" + std::to_string(q) + " exact rational",
             cplx(double(num) / double(den)), 0, 0, ok, "Eq. (finalseries)",
             "expected " + std::to_string(want_num[q]) + "/" +
                 std::to_string(want_den[q])});
  }
  double s = 0, qfac = 1, q2fac = 2;
  for (int q = 0; q <= 20; ++q) {
    if (q > 0) { qfac *= q; q2fac *= (q + 2); }
    s += (q * q + 2.0 * q - 1.0) / (qfac * q2fac);
  }
  rep.add(detail::vanishing("S_20", s, 0, detail::tol_or(cfg, 1e-12),
                            "Eq. (finalseries)"));
}

inline void scn_gb_diag_ef1_commuting(const ScenarioConfig& cfg,
                                      ScenarioReport& rep) {
  const double tol = detail::tol_or(cfg, 1e-8);
  ThetaMatrix th = ThetaMatrix::torus2(cfg.theta);
  std::vector<std::pair<std::string, AlgebraElement>> corpus;
  corpus.emplace_back(
      "2(V + V^{-1})",
      scale(commuting_family({{0, 1, 1.0}}, th), 2.0));
  corpus.emplace_back("diagonal family a11 UV + a22 U^2V^2",
                      commuting_family({{1, 1, cplx(0.4, 0.2)}, {2, 2, 0.1}}, th));
  corpus.emplace_back("U^2V^3 + U^4V^6 family",
                      commuting_family({{2, 3, 0.3}, {4, 6, cplx(0.1, 0.1)}}, th));
  corpus.emplace_back("UV^2 + U^2V^4 family",
                      commuting_family({{1, 2, cplx(0.25, 0.1)}, {2, 4, 0.05}}, th));
  corpus.emplace_back("function of U",
                      commuting_family({{1, 0, 0.5}, {2, 0, cplx(0, 0.2)}}, th));
  corpus.emplace_back("function of V",
                      commuting_family({{0, 1, 0.3}, {0, 2, 0.2}, {0, 3, cplx(0, 0.1)}}, th));
  for (auto& [name, f] : corpus) {
    MetricSpec spec{MetricFamily::DiagEF1, 2, f, 0, 0, cfg.ds};
    TraceValue gb = gb_functional(build_metric(spec));
    rep.add(detail::vanishing("tau(R e^{f/2}), f = " + name, gb.value,
                              gb.uncertainty, tol,
                              "Prop. (G-Bsecondmetric), Prop. (G-Barbitraryf)"));
  }
  // coefficient bookkeeping of e^{V+V^{-1}}: U^0 V^k coefficients against the
  // direct series sums sum_q 1/(q!(q+k)!)
  AlgebraElement E = exp_element(commuting_family({{0, 1, 1.0}}, th));
  for (int k = 0; k <= 2; ++k) {
    double series = 0, qf = 1, qkf = 1;
    for (int j = 1; j <= k; ++j) qkf *= j;
    for (int q = 0; q <= 30; ++q) {
      if (q > 0) { qf *= q; qkf *= (q + k); }
      series += 1.0 / (qf * qkf);
    }
    MultiIndex mk;
    mk.n = 2;
    mk.k[1] = k;
    rep.add(detail::vanishing(
        "V^" + std::to_string(k) + " coefficient of e^{V+V^{-1}} - series sum",
        E.coeff(mk) - series, E.dropped_mass, 1e-10,
        "Prop. (G-Bsecondmetric)"));
  }
}

inline void scn_gb_nondiag_t_sweep(const ScenarioConfig& cfg,
                                   ScenarioReport& rep) {
  const double tol = detail::tol_or(cfg, 1e-7);
  ThetaMatrix th = ThetaMatrix::torus2(cfg.theta);
  Rng rng(cfg.seed);
  std::vector<AlgebraElement> fs;
  for (int i = 0; i < 5; ++i)
    fs.push_back(random_self_adjoint(th, 2, 3, 1.0, rng));
  for (double t : {0.0, 0.3, 0.6, 0.9})
    for (std::size_t i = 0; i < fs.size(); ++i) {
      MetricSpec spec{MetricFamily::NonDiagReal, 2, fs[i], t, 0, cfg.ds};
      TraceValue gb = gb_functional(build_metric(spec));
      char name[64];
      std::snprintf(name, sizeof(name), "tau(R sqrt(det g)), t=%.1f, f #%zu", t, i);
      rep.add(detail::vanishing(name, gb.value, gb.uncertainty, tol,
                                "Prop. (riemanniannondiagonal)"));
    }
}

inline void scn_gb_hermitian_alpha(const ScenarioConfig& cfg,
                                   ScenarioReport& rep) {
  const double tol = detail::tol_or(cfg, 1e-7);
  ThetaMatrix th = ThetaMatrix::torus2(cfg.theta);
  Rng rng(cfg.seed);
  std::vector<AlgebraElement> fs;
  for (int i = 0; i < 5; ++i)
    fs.push_back(random_self_adjoint(th, 2, 3, 1.0, rng));
  const cplx alphas[3] = {0.3, cplx(0, 0.5), cplx(0.4, 0.4)};
  for (cplx a : alphas)
    for (std::size_t i = 0; i < fs.size(); ++i) {
      MetricSpec spec{MetricFamily::NonDiagHermitian, 2, fs[i], 0, a, cfg.ds};
      TraceValue gb = gb_functional(build_metric(spec));
      char name[80];
      std::snprintf(name, sizeof(name),
                    "tau(R sqrt(det g)), alpha=%.2f%+.2fi, f #%zu", a.real(),
                    a.imag(), i);
      rep.add(detail::vanishing(name, gb.value, gb.uncertainty, tol,
                                "Prop. (hermitiannondiagonal)"));
    }
}

// ---------------------------------------------------------------- n = 4 EH

inline void scn_eh_4t_conformal(const ScenarioConfig& cfg, ScenarioReport& rep) {
  const double rtol = detail::tol_or(cfg, 1e-6);
  ThetaMatrix th = ThetaMatrix::torus4(cfg.theta);
  Rng rng(cfg.seed);
  int sign0 = 0;
  for (int i = 0; i < 10; ++i) {
    AlgebraElement f = random_self_adjoint(th, 2, 2, 1.0, rng);
    MetricSpec spec{MetricFamily::ConformalFlat, 4, f, 0, 0, cfg.ds};
    EhResult r = eh_action(build_metric(spec));
    std::string tag = ", f #" + std::to_string(i);
    rep.add(detail::relative("| |EH| - (3/2) Q(f) |" + tag,
                             std::abs(std::abs(r.eh) - 1.5 * r.reference),
                             1.5 * r.reference, rtol, r.uncertainty,
                             "Prop. (E-Himproved), Eq. (E-Hrelation)"));
    rep.add(detail::above("|EH| nonzero for nonconstant f" + tag,
                          std::abs(r.eh), 1e-8, 0,
                          "Prop. (E-Himproved)"));
    int sgn = r.eh.real() > 0 ? 1 : -1;
    if (sign0 == 0) sign0 = sgn;
    rep.add({"EH sign consistency" + tag, r.eh, r.uncertainty, 0, sgn == sign0,
             "Prop. (E-Himproved)",
             std::string("corpus sign ") + (sign0 > 0 ? "+" : "-")});
  }
  MetricSpec cspec{MetricFamily::ConformalFlat, 4,
                   scale(identity(th), 0.3), 0, 0, cfg.ds};
  EhResult rc = eh_action(build_metric(cspec));
  rep.add(detail::vanishing("EH vanishes for constant f", rc.eh,
                            rc.uncertainty, 1e-8, "Prop. (E-Himproved)"));
}

inline void scn_eh_4t_partial_diag(const ScenarioConfig& cfg,
                                   ScenarioReport& rep) {
  const double rtol = detail::tol_or(cfg, 1e-6);
  ThetaMatrix th = ThetaMatrix::torus4(cfg.theta);
  Rng rng(cfg.seed);
  for (int i = 0; i < 5; ++i) {
    AlgebraElement f = random_self_adjoint(th, 2, 2, 1.0, rng);
    MetricSpec spec{MetricFamily::PartialConformal4, 4, f, 0, 0, cfg.ds};
    EhResult r = eh_action(build_metric(spec));
    rep.add(detail::relative(
        "| |EH| - (1/2) Q_{34}(f) |, f #" + std::to_string(i),
        std::abs(std::abs(r.eh) - 0.5 * r.reference), 0.5 * r.reference, rtol,
        r.uncertainty, "Prop. (E-Hnewprop), Eq. (traceE-Hnewprop)"));
  }
  AlgebraElement f12 = random_self_adjoint(th, 2, 3, 1.0, rng, {0, 1});
  MetricSpec spec{MetricFamily::PartialConformal4, 4, f12, 0, 0, cfg.ds};
  EhResult r = eh_action(build_metric(spec));
  rep.add(detail::vanishing("EH vanishes for f on conformal axes only", r.eh,
                            r.uncertainty, 1e-8,
                            "Prop. (E-Hnewprop)"));
}

inline void scn_eh_fk_functional(const ScenarioConfig& cfg,
                                 ScenarioReport& rep) {
  const double rtol = detail::tol_or(cfg, 1e-6);
  ThetaMatrix th = ThetaMatrix::torus4(cfg.theta);
  Rng rng(cfg.seed);
  double sign_ref = 0;
  for (int i = 0; i < 5; ++i) {
    AlgebraElement h = random_self_adjoint(th, 2, 2, 1.0, rng);
    EhResult r = fk_trace_functional(h, {}, cfg.ds);
    rep.add(detail::relative(
        "| |tau(R)| - (1/2) sum tau(e^{-2h}(d_i e^h)e^{-h}(d_i e^h)) |, h #" +
            std::to_string(i),
        std::abs(std::abs(r.eh) - r.reference), r.reference, rtol,
        r.uncertainty, "Prop. (MasoudFarzadEH)",
        "derived constant 1/2; the printed 7/2 follows from a sign slip in "
        "the integration-by-parts step (the derivative of e^{-h} flips it)"));
    rep.add(detail::above(
        "printed constant 7/2 differs from the measured ratio, h #" +
            std::to_string(i),
        std::abs(std::abs(r.eh) - 7.0 * r.reference), 1e-3 * r.reference,
        r.uncertainty, "Prop. (MasoudFarzadEH)",
        "documented discrepancy: |tau(R)| / sum tau(X_i) = 1/2, not 7/2"));
    rep.add(detail::above("functional nonzero for nonconstant h #" +
                              std::to_string(i),
                          std::abs(r.eh), 1e-10, 0, "Prop. (MasoudFarzadEH)"));
    double sg = std::real(r.eh) > 0 ? 1.0 : -1.0;
    if (i == 0) sign_ref = sg;
    rep.add(detail::vanishing("sign fixed across corpus, h #" +
                                  std::to_string(i),
                              sg - sign_ref, 0, 0.5,
                              "Prop. (MasoudFarzadEH)"));
  }
  EhResult rc = fk_trace_functional(scale(identity(th), 0.4), {}, cfg.ds);
  rep.add(detail::vanishing("functional vanishes for constant h", rc.eh,
                            rc.uncertainty, 1e-12, "Prop. (MasoudFarzadEH)"));
}

inline void scn_eh_gradient_check(const ScenarioConfig& cfg,
                                  ScenarioReport& rep) {
  ThetaMatrix th = ThetaMatrix::torus4(cfg.theta);
  Rng rng(cfg.seed);
  const int box = detail::box_or(cfg, 16);
  const std::vector<int> axes{0, 1};
  for (int i = 0; i < 3; ++i) {
    AlgebraElement f = random_self_adjoint(th, 1, 3, 0.15, rng, axes);
    AdOperator op = build_ad(f, box);
    AlgebraElement g = grad_eh(f, op, cfg.ds);
    for (int j = 0; j < 5; ++j) {
      AlgebraElement h = random_self_adjoint(th, 1, 3, 0.15, rng, axes);
      auto omega_of = [&](double t) {
        return eh_omega(add(f, scale(h, t)), cfg.ds).value.real();
      };
      double o0 = omega_of(0);
      double d1 = (omega_of(0.1) - omega_of(-0.1)) / 0.2;
      double d2 = (omega_of(0.05) - omega_of(-0.05)) / 0.1;
      double fd = (4 * d2 - d1) / 3.0;  // Richardson extrapolation
      double curv = std::abs(omega_of(0.1) + omega_of(-0.1) - 2 * o0) / 0.01;
      double pred = std::real(trace(mul(g, h)));
      double tol = detail::tol_or(cfg, 1e-5) * std::max(1.0, curv);
      char name[64];
      std::snprintf(name, sizeof(name),
                    "tau(h grad) vs d/dt Omega, f #%d h #%d", i, j);
      rep.add(detail::vanishing(name, pred - fd, g.dropped_mass, tol,
                                "Eqs. (gradientE-Hfinal), (gradientderat0)"));
    }
  }
}

// ------------------------------------------------------- modular curvature

inline void scn_curvature_modular_vs_direct(const ScenarioConfig& cfg,
                                            ScenarioReport& rep) {
  const double rtol = detail::tol_or(cfg, 1e-6);
  ThetaMatrix th = ThetaMatrix::torus4(cfg.theta);
  Rng rng(cfg.seed);
  const int box = detail::box_or(cfg, 16);
  const std::vector<int> axes{0, 1};
  auto compare = [&](const AlgebraElement& f, const AdOperator& op,
                     const std::string& tag) {
    AlgebraElement rmod = curvature_modular(f, op, cfg.ds);
    MetricSpec spec{MetricFamily::ConformalFlat, 4, f, 0, 0, cfg.ds};
    Metric m = build_metric(spec);
    AlgebraElement rdir = scalar_curvature(m, christoffel(m));
    double resid = distance_1(rmod, rdir);
    rep.add(detail::relative("||R_modular - R_direct||, " + tag, resid,
                             one_norm(rdir), rtol,
                             rmod.dropped_mass + rdir.dropped_mass,
                             "Prop. (RNablaDelta) vs Eq. (ourcurvature)"));
  };
  for (int i = 0; i < 5; ++i) {
    AlgebraElement f = random_self_adjoint(th, 1, 3, 1.0, rng, axes);
    compare(f, build_ad(f, box), "random f #" + std::to_string(i));
  }
  AlgebraElement p = detail::make_projection(th, 0, 1);
  for (double s : {0.25, 0.5, 1.0}) {
    char tag[32];
    std::snprintf(tag, sizeof(tag), "dilaton s=%.2f", s);
    compare(scale(p, s), build_ad_dilaton(p, s), tag);
  }
}

inline void scn_dilaton_curvature(const ScenarioConfig& cfg,
                                  ScenarioReport& rep) {
  const double rtol = detail::tol_or(cfg, 1e-6);
  ThetaMatrix th = ThetaMatrix::torus4(cfg.theta);
  AlgebraElement p = detail::make_projection(th, 0, 1);
  for (double s : {0.25, 0.5, 1.0}) {
    AdOperator op = build_ad_dilaton(p, s);
    AlgebraElement rmod = curvature_modular(scale(p, s), op, cfg.ds);
    AlgebraElement rclosed =
        dilaton_curvature(p, s, dilaton_coeffs_derived(s), cfg.ds);
    char name[80];
    std::snprintf(name, sizeof(name),
                  "closed form vs modular route, s=%.2f", s);
    rep.add(detail::relative(name, distance_1(rmod, rclosed), one_norm(rmod),
                             rtol, rmod.dropped_mass + rclosed.dropped_mass,
                             "Eq. (Rdilaton)"));
  }
  // verbatim coefficient formulas at s = 1
  DilatonCoeffs c = dilaton_coeffs_printed(1.0);
  const double e1 = std::exp(1.0), em1 = std::exp(-1.0);
  const double verbatim[4] = {
      2.5 - 2.5 * std::cosh(1.0) - std::sinh(1.0),
      -3.5 + em1 + 2.5 * std::cosh(1.0) + std::sinh(1.0),
      -1.5 - e1 + 2.5 * std::cosh(1.0) + std::sinh(1.0),
      -4.0 + 4.0 * std::sinh(1.0)};
  const double got[4] = {c.c1, c.c2, c.c3, c.c4};
  for (int i = 0; i < 4; ++i)
    rep.add(detail::vanishing(
        "printed coefficient c" + std::to_string(i + 1) + " at s=1, verbatim",
        got[i] - verbatim[i], 0, 1e-15, "Eq. (Rdilaton)"));
  // the printed coefficient table does not agree with the paper's own
  // modular machinery; the discrepancy is asserted (documented in README)
  DilatonCoeffs d = dilaton_coeffs_derived(1.0);
  double mism = std::max({std::abs(c.c1 - d.c1), std::abs(c.c2 - d.c2),
                          std::abs(c.c3 - d.c3), std::abs(c.c4 - d.c4)});
  rep.add(detail::above(
      "printed vs machinery-derived coefficients differ (known inconsistency)",
      mism, 1e-3, 0, "Eq. (Rdilaton)",
      "printed table is internally inconsistent with Prop. (RNablaDelta); "
      "see README"));
}

inline void scn_identities_suite(const ScenarioConfig& cfg,
                                 ScenarioReport& rep) {
  const double etol = detail::tol_or(cfg, 1e-7);
  const double stol = 1e-12;
  ThetaMatrix th2 = ThetaMatrix::torus2(cfg.theta);
  Rng rng(cfg.seed);
  const int box = detail::box_or(cfg, 12);
  for (int i = 0; i < 2; ++i) {
    AlgebraElement f = random_self_adjoint(th2, 1, 3, 0.5, rng);
    AdOperator op = build_ad(f, box);
    for (auto& c : modular_identity_suite(f, op, cfg.ds))
      rep.add(detail::relative(c.name + ", f #" + std::to_string(i),
                               c.residual, std::max(1.0, c.scale_ref), etol, 0,
                               "Eq. (identities), Eq. (deltasquare)"));
  }
  ThetaMatrix th4 = ThetaMatrix::torus4(cfg.theta);
  AlgebraElement p = detail::make_projection(th4, 0, 1);
  const double s = 1.0;
  AdOperator dop = build_ad_dilaton(p, s);
  for (auto& c : dilaton_identity_suite(p, s, dop, cfg.ds))
    rep.add(detail::relative(c.name, c.residual, std::max(1.0, c.scale_ref),
                             etol, 0,
                             "Eq. (laplacianidentity), Eq. (K(Nabla))"));
  // scalar closed forms: the literature kernel satisfies the printed sums
  double worst_sum = 0, worst_diff = 0, worst_closed = 0, worst_comb = 0;
  for (double sv : {0.3, 0.7, 1.0, 1.9, -0.4, -1.3}) {
    double hs = fnH_lit(sv, -sv), hm = fnH_lit(-sv, sv);
    worst_sum = std::max(worst_sum,
                         std::abs(hs + hm +
                                  5.0 / (sv * sv) *
                                      (std::exp(sv) + std::exp(-sv) - 2)));
    worst_diff = std::max(
        worst_diff,
        std::abs(hm - hs - (4 * sv - 4 * std::sinh(sv)) / (sv * sv)));
    // third printed line of Eq. (H): closed form of -2g2 + (1/2)g1g1
    for (double tv : {0.5, -0.8, 1.4}) {
      double closed = (sv * (std::exp(tv) - 1) * (-3 * std::exp(sv) - 1) +
                       tv * (std::exp(sv) - 1) * (std::exp(tv) + 3)) /
                      (2 * sv * tv * (sv + tv));
      worst_closed = std::max(worst_closed, std::abs(fnH(sv, tv) - closed));
    }
    // analogous sums for the kernel the curvature formula actually uses
    double cs = fnH(sv, -sv), cm = fnH(-sv, sv);
    worst_comb = std::max(
        worst_comb,
        std::abs(cs + cm + (std::exp(sv) + std::exp(-sv) - 2) / (sv * sv)));
  }
  rep.add(detail::vanishing("H's sum closed form (literature kernel)",
                            worst_sum, 0, stol, "Eq. (H's)"));
  rep.add(detail::vanishing("H's difference closed form (literature kernel)",
                            worst_diff, 0, stol, "Eq. (H's)"));
  rep.add(detail::vanishing("H third printed line vs -2g2+g1g1/2", worst_closed,
                            0, stol, "Eq. (H)"));
  rep.add(detail::vanishing(
      "sum analogue for the curvature kernel", worst_comb, 0, stol,
      "Eq. (H)",
      "Eq. (H) and the Eq. (H's) kernel differ; both are checked against "
      "the form they satisfy (see README)"));
}

// ------------------------------------------------------------ perturbation

inline void scn_gb_failure_order4(const ScenarioConfig& cfg,
                                  ScenarioReport& rep) {
  ThetaMatrix th = ThetaMatrix::torus2(cfg.theta);
  Rng rng(cfg.seed);
  std::vector<std::pair<std::string, AlgebraElement>> corpus;
  {
    AlgebraElement f(th);
    MultiIndex u, v;
    u.n = v.n = 2;
    u.k[0] = 1;
    v.k[1] = 1;
    f = add(add(monomial(th, u, 1.0), monomial(th, -u, 1.0)),
            add(monomial(th, v, 1.0), monomial(th, -v, 1.0)));
    corpus.emplace_back("U+U^{-1}+V+V^{-1}", f);
  }
  int guard = 0;
  while (corpus.size() < 6 && guard++ < 100) {
    AlgebraElement f = random_self_adjoint(th, 2, 3, 1.0, rng);
    if (std::abs(order4_obstruction(f, cfg.ds)) > 1e-3)
      corpus.emplace_back("random f #" + std::to_string(corpus.size() - 1), f);
  }
  std::vector<double> ratios;
  bool paper_element = true;
  for (auto& [name, f] : corpus) {
    PerturbationProbe probe;
    probe.f = f;
    probe.fit_degree = 8;  // degree 6 leaks c6/c8 into the low coefficients
    if (paper_element)     // ||f||_1 = 4: halve the steps to keep tf small
      for (auto& t : probe.t_samples) t *= 0.5;
    paper_element = false;
    auto c = taylor_fit(probe, cfg.ds);
    double low = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]),
                           std::abs(c[3])});
    rep.add(detail::vanishing("fitted c0..c3, f = " + name, low, 0,
                              detail::tol_or(cfg, 1e-8),
                              "Prop. (FailGBbyPerturbation)"));
    cplx obs = order4_obstruction(f, cfg.ds);
    double ratio = c[4].real() / obs.real();
    ratios.push_back(ratio);
    rep.add(detail::relative("c4 / obstruction vs pinned constant, f = " + name,
                             std::abs(ratio - order4_fit_constant),
                             std::abs(order4_fit_constant), 1e-3, 0,
                             "Eq. (order4trace)"));
  }
  // the closed-form obstruction for U+U^{-1}+V+V^{-1}: the paper's two
  // ingredient traces -6 and -2e^{i t}-2e^{-i t}-2 appear with theta -> 2 pi
  // theta and one factor of the derivation scale squared; its printed sign
  // combination fails the commuting-case sanity check (see README)
  {
    const AlgebraElement& f = corpus[0].second;
    double u2 = std::norm(derivation_unit(cfg.ds));  // |scale|^2
    double lam = two_pi * cfg.theta;
    AlgebraElement d = derive(f, 1, cfg.ds);
    cplx A = trace(mul(mul(mul(f, f), d), d));
    cplx B = trace(mul(mul(mul(f, d), f), d));
    rep.add(detail::vanishing("ingredient tau(f^2 (d2 f)^2) vs paper -6",
                              A - (-u2) * (-6.0), 0, 1e-12,
                              "Eq. (order4trace)"));
    rep.add(detail::vanishing(
        "ingredient tau(f d2f f d2f) vs paper -2e^{it}-2e^{-it}-2",
        B - (-u2) * (-2.0 - 4.0 * std::cos(lam)), 0, 1e-12,
        "Eq. (order4trace)"));
    cplx obs = order4_obstruction(f, cfg.ds);
    rep.add(detail::vanishing("obstruction closed form 3(A - B)",
                              obs - 3.0 * (A - B), 0, 1e-12,
                              "Eq. (order4trace)"));
  }
}

inline void scn_powers_rieffel_obstruction(const ScenarioConfig& cfg,
                                           ScenarioReport& rep) {
  ThetaMatrix th = ThetaMatrix::torus2(cfg.theta);
  BumpSpec bs;
  bs.theta = cfg.theta - std::floor(cfg.theta);
  AlgebraElement e = powers_rieffel(bs, th);
  rep.add(detail::vanishing("||e^2 - e||_1", distance_1(mul(e, e), e), 0,
                            detail::tol_or(cfg, 1e-8), "§5.2 example"));
  rep.add(detail::vanishing("||e - e*||_1", distance_1(e, adjoint(e)), 0,
                            1e-12, "§5.2 example"));
  rep.add(detail::vanishing("tau(e) - theta", trace(e) - bs.theta,
                            e.dropped_mass, 1e-8, "§5.2 example"));
  cplx obs = order4_obstruction(e, cfg.ds);
  rep.add(detail::vanishing("Im(obstruction)", obs.imag(), 0, 1e-10,
                            "Prop. (GBFailure)"));
  rep.add(detail::above("order-4 obstruction positive", obs.real(), 1e-6, 0,
                        "Prop. (GBFailure)"));
  cplx om = omega(e, 0.3, cfg.ds);
  rep.add(detail::above("|Omega_e(0.3)| nonzero", std::abs(om), 1e-8, 0,
                        "Prop. (FailGBbyPerturbation)"));
}

// ----------------------------------------------------------------- runner

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::string anchor;
  void (*fn)(const ScenarioConfig&, ScenarioReport&);
};

inline const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> reg = {
      {"gb-conformal-2t",
       "Gauss-Bonnet trace vanishes for conformally flat metrics on the "
       "2-torus (20 random dilatons)",
       "Prop. (G-B)", scn_gb_conformal_2t},
      {"gb-diag-ef1-commuting",
       "Gauss-Bonnet for diag(e^f,1) metrics with commuting-family dilatons, "
       "plus Bessel-style coefficient bookkeeping for e^{V+V^{-1}}",
       "Prop. (G-Bsecondmetric), Prop. (G-Barbitraryf)",
       scn_gb_diag_ef1_commuting},
      {"series-telescoping",
       "Telescoping series sum_q (q^2+2q-1)/(q!(q+2)!) vanishes; exact "
       "rational partial sums",
       "Eq. (finalseries)", scn_series_telescoping},
      {"gb-nondiag-t-sweep",
       "Gauss-Bonnet for the real non-diagonal metric, t in {0,0.3,0.6,0.9}",
       "Prop. (riemanniannondiagonal)", scn_gb_nondiag_t_sweep},
      {"gb-hermitian-alpha",
       "Gauss-Bonnet for the hermitian non-diagonal metric, three alpha values",
       "Prop. (hermitiannondiagonal)", scn_gb_hermitian_alpha},
      {"eh-4t-conformal",
       "Einstein-Hilbert action on the conformally flat 4-torus: sign "
       "definiteness and |EH| = (3/2) Q(f)",
       "Prop. (E-Himproved), Eq. (E-Hrelation)", scn_eh_4t_conformal},
      {"eh-4t-partial-diag",
       "Einstein-Hilbert action for diag(e^f,e^f,1,1): |EH| = (1/2) Q_34(f)",
       "Prop. (E-Hnewprop), Eq. (traceE-Hnewprop)", scn_eh_4t_partial_diag},
      {"eh-fk-functional",
       "Direct 4-torus curvature trace functional vs its quadratic reference "
       "form (derived constant 1/2; printed 7/2 documented as a discrepancy)",
       "Prop. (MasoudFarzadEH)", scn_eh_fk_functional},
      {"eh-gradient-check",
       "Gradient of the Einstein-Hilbert action vs central finite differences",
       "Eqs. (gradientE-Hfinal), (gradientderat0)", scn_eh_gradient_check},
      {"curvature-modular-vs-direct",
       "Scalar curvature from the modular-operator formula vs the direct "
       "Christoffel route, random dilatons and projections",
       "Prop. (RNablaDelta) vs Eq. (ourcurvature)",
       scn_curvature_modular_vs_direct},
      {"dilaton-curvature",
       "Dilaton (projection) closed-form curvature coefficients vs the "
       "modular route; verbatim coefficient check at s=1",
       "Eq. (Rdilaton)", scn_dilaton_curvature},
      {"identities-suite",
       "Modular rearrangement identities, projection corner identities, and "
       "the scalar closed forms of the curvature kernels",
       "Eqs. (identities), (deltasquare), (laplacianidentity), (K(Nabla)), "
       "(H's)",
       scn_identities_suite},
      {"gb-failure-order4",
       "Taylor fit of the perturbed Gauss-Bonnet trace: c0..c3 vanish, c4 "
       "proportional to the order-4 obstruction",
       "Prop. (FailGBbyPerturbation), Eq. (order4trace)",
       scn_gb_failure_order4},
      {"powers-rieffel-obstruction",
       "Powers-Rieffel projection: idempotency, trace, and a strictly "
       "positive Gauss-Bonnet obstruction",
       "Prop. (GBFailure), §5.2 example", scn_powers_rieffel_obstruction},
  };
  return reg;
}

inline ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  const ScenarioInfo* info = nullptr;
  for (auto& s : scenario_registry())
    if (s.name == cfg.scenario) info = &s;
  if (!info) {
    std::string names;
    for (auto& s : scenario_registry()) names += "\n  " + s.name;
    throw Error("unknown scenario '" + cfg.scenario + "'; available:" + names);
  }
  ScenarioReport rep;
  rep.scenario = info->name;
  rep.description = info->description;
  rep.paper_anchor = info->anchor;
  rep.config = cfg;
  rep.timestamp = utc_timestamp();
  auto t0 = std::chrono::steady_clock::now();
  try {
    info->fn(cfg, rep);
  } catch (const Error& e) {
    rep.add({"scenario execution", 0, 0, 0, false, info->anchor,
             std::string("error: ") + e.what()});
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace nct
