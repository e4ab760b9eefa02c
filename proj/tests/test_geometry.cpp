#include <catch2/catch_amalgamated.hpp>

#include <nctorus/geometry.hpp>
#include <nctorus/random.hpp>

using namespace nct;

namespace {

Metric make(MetricFamily fam, int n, const AlgebraElement& f, double t = 0,
            cplx alpha = 0) {
  MetricSpec spec{fam, n, f, t, alpha, DerivationScale::unit};
  return build_metric(spec);
}

}  // namespace

TEST_CASE("metric inverses close to machine precision") {
  ThetaMatrix th2 = ThetaMatrix::torus2(0.6180339887498949);
  Rng rng(31);
  AlgebraElement f = random_self_adjoint(th2, 2, 4, 1.0, rng);
  for (auto fam : {MetricFamily::ConformalFlat, MetricFamily::DiagEF1})
    REQUIRE(make(fam, 2, f).inv_residual < 1e-10);
  REQUIRE(make(MetricFamily::NonDiagReal, 2, f, 0.6).inv_residual < 1e-10);
  REQUIRE(make(MetricFamily::NonDiagHermitian, 2, f, 0, cplx(0.4, 0.4))
              .inv_residual < 1e-10);
  ThetaMatrix th4 = ThetaMatrix::torus4(0.6180339887498949);
  AlgebraElement f4 = random_self_adjoint(th4, 2, 3, 1.0, rng);
  for (auto fam : {MetricFamily::ConformalFlat, MetricFamily::PartialConformal4,
                   MetricFamily::PartialConformal4Alt})
    REQUIRE(make(fam, 4, f4).inv_residual < 1e-10);
}

TEST_CASE("flat metric has zero curvature") {
  ThetaMatrix th = ThetaMatrix::torus2(0.37);
  AlgebraElement f = zero(th);
  Metric m = make(MetricFamily::ConformalFlat, 2, f);
  AlgebraElement R = scalar_curvature(m, christoffel(m));
  REQUIRE(one_norm(R) < 1e-12);
}

TEST_CASE("curvature coefficients are antisymmetric in the plane indices") {
  ThetaMatrix th = ThetaMatrix::torus2(0.51);
  Rng rng(33);
  AlgebraElement f = random_self_adjoint(th, 2, 4, 0.8, rng);
  Metric m = make(MetricFamily::NonDiagReal, 2, f, 0.3);
  ChristoffelTable ct = christoffel(m);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      AlgebraElement r01 = curvature_component(m, ct, 0, 1, k, l);
      AlgebraElement r10 = curvature_component(m, ct, 1, 0, k, l);
      REQUIRE(distance_1(r01, scale(r10, -1.0)) < 1e-12);
    }
}

TEST_CASE("classical limit: commutative torus satisfies Gauss-Bonnet") {
  ThetaMatrix th = ThetaMatrix::torus2(0.0);
  Rng rng(34);
  AlgebraElement f = random_self_adjoint(th, 2, 4, 1.0, rng);
  TraceValue gb = gb_functional(make(MetricFamily::ConformalFlat, 2, f));
  REQUIRE(std::abs(gb.value) < 1e-8 + gb.uncertainty);
  TraceValue gb2 = gb_functional(make(MetricFamily::NonDiagReal, 2, f, 0.5));
  REQUIRE(std::abs(gb2.value) < 1e-8 + gb2.uncertainty);
}

TEST_CASE("Christoffel symbols vanish for constant metrics") {
  ThetaMatrix th = ThetaMatrix::torus2(0.44);
  Metric m = make(MetricFamily::NonDiagReal, 2, zero(th), 0.7);
  ChristoffelTable ct = christoffel(m);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) REQUIRE(one_norm(ct.gamma[i][j][k]) < 1e-14);
}

TEST_CASE("einstein-hilbert action vanishes exactly for constant dilaton") {
  ThetaMatrix th = ThetaMatrix::torus4(0.6180339887498949);
  EhResult r = eh_action(make(MetricFamily::ConformalFlat, 4,
                              scale(identity(th), 0.25)));
  REQUIRE(std::abs(r.eh) < 1e-8 + r.uncertainty);
  REQUIRE(r.reference < 1e-10);
}

TEST_CASE("reference magnitude Q is positive for nonconstant dilatons") {
  ThetaMatrix th = ThetaMatrix::torus4(0.6180339887498949);
  Rng rng(35);
  AlgebraElement f = random_self_adjoint(th, 1, 3, 0.8, rng);
  Metric m = make(MetricFamily::ConformalFlat, 4, f);
  REQUIRE(q_magnitude(m, {0, 1, 2, 3}) > 1e-6);
}

TEST_CASE("direct 4-torus trace functional: constant input and magnitude") {
  ThetaMatrix th = ThetaMatrix::torus4(0.6180339887498949);
  EhResult rc = fk_trace_functional(scale(identity(th), 0.4));
  REQUIRE(std::abs(rc.eh) < 1e-12);
  Rng rng(36);
  AlgebraElement h = random_self_adjoint(th, 1, 2, 0.8, rng);
  EhResult r = fk_trace_functional(h);
  REQUIRE(std::abs(std::abs(r.eh) - r.reference) <
          1e-6 * r.reference + r.uncertainty);
}
