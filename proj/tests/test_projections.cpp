#include <catch2/catch_amalgamated.hpp>

#include <nctorus/projections.hpp>
#include <nctorus/random.hpp>

using namespace nct;

TEST_CASE("projection at the default angle: idempotent, self-adjoint, traced") {
  const double theta = 0.6180339887498949;
  ThetaMatrix th = ThetaMatrix::torus2(theta);
  BumpSpec bs;
  bs.theta = theta;
  AlgebraElement e = powers_rieffel(bs, th);
  REQUIRE(distance_1(mul(e, e), e) < 1e-8);
  REQUIRE(distance_1(e, adjoint(e)) < 1e-12);
  REQUIRE(std::abs(trace(e) - theta) < 1e-14);
  REQUIRE(e.dropped_mass == 0.0);
  REQUIRE(e.support_radius() <= bs.fourier_cutoff);
}

TEST_CASE("small translation angle needs and gets a wider cutoff") {
  const double theta = 0.3;
  ThetaMatrix th = ThetaMatrix::torus2(theta);
  BumpSpec bs;
  bs.theta = theta;
  bs.fourier_cutoff = 48;
  bs.tol_proj = 1e-7;
  AlgebraElement e = powers_rieffel(bs, th);
  REQUIRE(distance_1(mul(e, e), e) < 1e-7);
  REQUIRE(std::abs(trace(e) - theta) < 1e-14);
}

TEST_CASE("projection embeds into a chosen 4-torus sublattice") {
  ThetaMatrix th = ThetaMatrix::torus4(0.6180339887498949);
  double t = th.th[0][1] - std::floor(th.th[0][1]);
  BumpSpec bs;
  bs.theta = t;
  AlgebraElement e = powers_rieffel(bs, th, 0, 1);
  REQUIRE(distance_1(mul(e, e), e) < 1e-8);
  REQUIRE_FALSE(e.axis_active(2));
  REQUIRE_FALSE(e.axis_active(3));
}

TEST_CASE("angles too close to an integer are rejected") {
  ThetaMatrix th = ThetaMatrix::torus2(1e-9);
  BumpSpec bs;
  bs.theta = 1e-9;
  REQUIRE_THROWS_AS(powers_rieffel(bs, th), Error);
}

TEST_CASE("commuting family enforces the cross-product condition") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  REQUIRE_THROWS_AS(commuting_family({{1, 1, 0.4}, {1, 2, 0.1}}, th), Error);
  AlgebraElement f =
      commuting_family({{1, 2, cplx(0.3, 0.1)}, {2, 4, 0.2}}, th);
  REQUIRE(is_self_adjoint(f, 1e-14));
  // every derivative commutes with f
  for (int j = 0; j < 2; ++j) {
    AlgebraElement d = derive(f, j);
    REQUIRE(distance_1(mul(f, d), mul(d, f)) < 1e-13);
  }
}
