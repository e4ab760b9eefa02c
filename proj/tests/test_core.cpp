#include <catch2/catch_amalgamated.hpp>

#include <nctorus/core.hpp>
#include <nctorus/random.hpp>
#include <nctorus/serialize.hpp>

#include "rational_rep.hpp"

using namespace nct;

namespace {

// straight double loop over coefficient pairs: the reference product
AlgebraElement mul_ref(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r(a.theta);
  for (auto& [ka, ca] : a.coeffs)
    for (auto& [kb, cb] : b.coeffs) {
      MultiIndex k = ka + kb;
      r.set(k, r.coeff(k) + ca * cb * cocycle(a.theta, ka, kb));
    }
  return r;
}

MultiIndex mk2(int a, int b) {
  MultiIndex k;
  k.n = 2;
  k.k[0] = a;
  k.k[1] = b;
  return k;
}

}  // namespace

TEST_CASE("pairwise commutation relations") {
  for (int n : {2, 4}) {
    ThetaMatrix th = n == 2 ? ThetaMatrix::torus2(0.37) : ThetaMatrix::torus4(0.37);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        MultiIndex ej, ek;
        ej.n = ek.n = n;
        ej.k[j] = 1;
        ek.k[k] = 1;
        AlgebraElement uj = monomial(th, ej), uk = monomial(th, ek);
        // U_j U_k = e^{2 pi i theta_jk} U_k U_j
        AlgebraElement lhs = mul(uj, uk);
        AlgebraElement rhs = scale(mul(uk, uj), std::polar(1.0, two_pi * th.th[j][k]));
        REQUIRE(distance_1(lhs, rhs) < 1e-14);
      }
  }
}

TEST_CASE("unitarity of monomials and involution laws") {
  ThetaMatrix th = ThetaMatrix::torus4(0.234);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    MultiIndex k;
    k.n = 4;
    for (int i = 0; i < 4; ++i) k.k[i] = rng.uniform_int(-6, 6);
    AlgebraElement u = monomial(th, k);
    REQUIRE(distance_1(mul(u, adjoint(u)), identity(th)) < 1e-14);
    REQUIRE(distance_1(mul(adjoint(u), u), identity(th)) < 1e-14);
  }
  AlgebraElement a = random_self_adjoint(th, 3, 5, 1.0, rng);
  AlgebraElement b = random_self_adjoint(th, 3, 5, 1.0, rng);
  MultiIndex kb;
  kb.n = 4;
  kb.k[0] = 1;
  kb.k[1] = 2;
  b.set(kb, cplx(0.3, 0.4));  // break self-adjointness
  REQUIRE(distance_1(adjoint(adjoint(b)), b) < 1e-14);
  REQUIRE(distance_1(adjoint(mul(a, b)), mul(adjoint(b), adjoint(a))) < 1e-13);
}

TEST_CASE("product matches reference and is associative") {
  for (int n : {2, 4}) {
    ThetaMatrix th = n == 2 ? ThetaMatrix::torus2(0.6180339887498949)
                            : ThetaMatrix::torus4(0.6180339887498949);
    Rng rng(11 + n);
    for (int trial = 0; trial < 5; ++trial) {
      AlgebraElement a = random_self_adjoint(th, 3, 6, 1.0, rng);
      AlgebraElement b = random_self_adjoint(th, 3, 6, 1.0, rng);
      AlgebraElement c = random_self_adjoint(th, 2, 4, 1.0, rng);
      REQUIRE(distance_1(mul(a, b), mul_ref(a, b)) < 1e-13);
      REQUIRE(distance_1(mul(mul(a, b), c), mul(a, mul(b, c))) < 1e-12);
    }
  }
}

TEST_CASE("sparse accumulator path agrees with reference") {
  // far-separated support forces the hash fallback (huge bounding box)
  ThetaMatrix th = ThetaMatrix::torus2(0.31);
  Rng rng(3);
  AlgebraElement a(th), b(th);
  for (int i = 0; i < 8; ++i) {
    a.set(mk2(rng.uniform_int(-3000, 3000), rng.uniform_int(-3000, 3000)),
          rng.cnormal());
    b.set(mk2(rng.uniform_int(-3000, 3000), rng.uniform_int(-3000, 3000)),
          rng.cnormal());
  }
  // cocycle phases reach ~1e7 radians at these exponents; the two evaluation
  // orders agree only up to the argument roundoff ~|phase| * eps
  REQUIRE(distance_1(mul(a, b), mul_ref(a, b)) < 1e-7);
}

TEST_CASE("trace is a trace and trace_pair matches it") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    AlgebraElement a = random_self_adjoint(th, 3, 5, 1.0, rng);
    AlgebraElement b = random_self_adjoint(th, 3, 5, 1.0, rng);
    REQUIRE(std::abs(trace(mul(a, b)) - trace(mul(b, a))) < 1e-14);
    REQUIRE(std::abs(trace_pair(a, b) - trace(mul(a, b))) < 1e-14);
    REQUIRE(std::abs(trace(mul(a, adjoint(a))).real() -
                     trace(mul(a, adjoint(a)))) < 1e-14);  // positivity: real
    REQUIRE(trace(mul(a, adjoint(a))).real() >= 0);
  }
}

TEST_CASE("derivations satisfy Leibniz and commute") {
  ThetaMatrix th = ThetaMatrix::torus2(0.45);
  Rng rng(9);
  for (auto ds : {DerivationScale::unit, DerivationScale::two_pi}) {
    AlgebraElement a = random_self_adjoint(th, 3, 5, 1.0, rng);
    AlgebraElement b = random_self_adjoint(th, 3, 5, 1.0, rng);
    for (int j = 0; j < 2; ++j) {
      AlgebraElement lhs = derive(mul(a, b), j, ds);
      AlgebraElement rhs = add(mul(derive(a, j, ds), b), mul(a, derive(b, j, ds)));
      REQUIRE(distance_1(lhs, rhs) < 1e-12);
    }
    REQUIRE(distance_1(derive(derive(a, 0, ds), 1, ds),
                       derive(derive(a, 1, ds), 0, ds)) < 1e-13);
    // tau . d_j = 0
    REQUIRE(std::abs(trace(derive(a, 0, ds))) < 1e-15);
  }
}

TEST_CASE("rational rotation algebra matrix oracle at theta = 3/7") {
  ThetaMatrix th = ThetaMatrix::torus2(3.0 / 7.0);
  Rng rng(2026);
  // the clock/shift pair satisfies the same commutation relation
  AlgebraElement u1 = monomial(th, mk2(1, 0)), u2 = monomial(th, mk2(0, 1));
  REQUIRE(oracle7::mat_dist(
              oracle7::matmul(oracle7::clock(), oracle7::shift()),
              oracle7::rep(mul(u1, u2))) < 1e-13);
  for (int trial = 0; trial < 200; ++trial) {
    MultiIndex ka = mk2(rng.uniform_int(-10, 10), rng.uniform_int(-10, 10));
    MultiIndex kb = mk2(rng.uniform_int(-10, 10), rng.uniform_int(-10, 10));
    AlgebraElement a = monomial(th, ka, rng.cnormal());
    AlgebraElement b = monomial(th, kb, rng.cnormal());
    double d = oracle7::mat_dist(oracle7::rep(mul(a, b)),
                                 oracle7::matmul(oracle7::rep(a), oracle7::rep(b)));
    REQUIRE(d < 1e-10);
  }
}

TEST_CASE("truncate and prune conserve total l1 mass") {
  ThetaMatrix th = ThetaMatrix::torus2(0.52);
  Rng rng(13);
  AlgebraElement a = random_self_adjoint(th, 4, 10, 1.0, rng);
  a.dropped_mass = 0.01;
  double total = one_norm(a);
  AlgebraElement t = truncate(a, 2);
  REQUIRE(one_norm(t) == Catch::Approx(total).epsilon(1e-14));
  REQUIRE(t.support_radius() <= 2);
  AlgebraElement p = prune(a, 0.05);
  REQUIRE(one_norm(p) == Catch::Approx(total).epsilon(1e-14));
  for (auto& [k, c] : p.coeffs) REQUIRE(std::abs(c) > 0.05);
}

TEST_CASE("json round trip preserves elements") {
  ThetaMatrix th = ThetaMatrix::torus4(0.77);
  Rng rng(17);
  AlgebraElement a = random_self_adjoint(th, 2, 6, 1.3, rng);
  a.dropped_mass = 3.5e-9;
  AlgebraElement b = element_from_json(to_json(a));
  REQUIRE(b.theta == a.theta);
  REQUIRE(b.dropped_mass == a.dropped_mass);
  REQUIRE(b.coeffs.size() == a.coeffs.size());
  REQUIRE(distance_1(a, b) == 0.0);
}

TEST_CASE("mismatched twist matrices are rejected") {
  AlgebraElement a(ThetaMatrix::torus2(0.3)), b(ThetaMatrix::torus2(0.4));
  REQUIRE_THROWS_AS(mul(a, b), Error);
  REQUIRE_THROWS_AS(add(a, b), Error);
  REQUIRE_THROWS_AS(trace_pair(a, b), Error);
}
