#include <catch2/catch_amalgamated.hpp>

#include <nctorus/funcalc.hpp>
#include <nctorus/random.hpp>

using namespace nct;

TEST_CASE("exponential of a scalar matches exp") {
  ThetaMatrix th = ThetaMatrix::torus2(0.41);
  AlgebraElement e = exp_element(scale(identity(th), 0.7));
  REQUIRE(std::abs(trace(e) - std::exp(0.7)) < 1e-12);
  REQUIRE(e.coeffs.size() == 1);
}

TEST_CASE("exp(f) exp(-f) = 1 within the certified bound") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  Rng rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    AlgebraElement f = random_self_adjoint(th, 2, 4, 1.2, rng);
    AlgebraElement ef = exp_element(f);
    AlgebraElement emf = exp_element(scale(f, -1.0));
    AlgebraElement prod = mul(ef, emf);
    REQUIRE(distance_1(prod, identity(th)) < 1e-10 + prod.dropped_mass);
    // the analytic remainder bound is honest: nonzero and small
    REQUIRE(ef.dropped_mass > 0);
    REQUIRE(ef.dropped_mass < 1e-9);
    REQUIRE(is_self_adjoint(ef, 1e-11));
  }
}

TEST_CASE("exp matches the raw Taylor series at small norm") {
  ThetaMatrix th = ThetaMatrix::torus2(0.29);
  Rng rng(22);
  AlgebraElement f = random_self_adjoint(th, 2, 4, 0.3, rng);
  AlgebraElement series = identity(th), p = identity(th);
  for (int k = 1; k <= 30; ++k) {
    p = scale(mul(p, f), 1.0 / k);
    series = add(series, p);
  }
  AlgebraElement e = exp_element(f);
  REQUIRE(distance_1(e, series) < 1e-12);
}

TEST_CASE("exponential rejects non-self-adjoint input") {
  ThetaMatrix th = ThetaMatrix::torus2(0.3);
  MultiIndex k;
  k.n = 2;
  k.k[0] = 1;
  REQUIRE_THROWS_AS(exp_element(monomial(th, k, cplx(0, 1))), Error);
}

TEST_CASE("Newton inverse converges for exponentials") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  Rng rng(23);
  AlgebraElement f = random_self_adjoint(th, 2, 4, 1.0, rng);
  AlgebraElement ef = exp_element(f);
  AlgebraElement inv = inverse_element(ef);
  REQUIRE(distance_1(mul(ef, inv), identity(th)) < 1e-9);
  REQUIRE(distance_1(mul(inv, ef), identity(th)) < 1e-9);
  // and agrees with exp(-f)
  REQUIRE(distance_1(inv, exp_element(scale(f, -1.0))) < 1e-9);
}

TEST_CASE("Newton inverse diverges on a singular element") {
  // spectrum of 1 + U + U* is [-1, 3], which contains 0
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  MultiIndex k;
  k.n = 2;
  k.k[0] = 1;
  AlgebraElement a =
      add(identity(th), add(monomial(th, k), monomial(th, -k)));
  REQUIRE_THROWS_AS(inverse_element(a), NonInvertibleError);
}

TEST_CASE("tighter tolerance gives a compatible exponential") {
  ThetaMatrix th = ThetaMatrix::torus2(0.37);
  Rng rng(25);
  AlgebraElement f = random_self_adjoint(th, 2, 4, 1.5, rng);
  FuncalcConfig loose, tight;
  loose.target_tol = 1e-8;
  tight.target_tol = 1e-14;
  AlgebraElement el = exp_element(f, loose), et = exp_element(f, tight);
  REQUIRE(distance_1(el, et) <= el.dropped_mass + et.dropped_mass + 1e-14);
  REQUIRE(et.dropped_mass < loose.target_tol);
}
