#include <catch2/catch_amalgamated.hpp>

#include <nctorus/golden.hpp>
#include <nctorus/perturb.hpp>
#include <nctorus/projections.hpp>
#include <nctorus/random.hpp>
#include <nctorus/serialize.hpp>

#include <fstream>

using namespace nct;

TEST_CASE("obstruction vanishes on the commuting family") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  AlgebraElement f =
      commuting_family({{1, 1, cplx(0.4, 0.2)}, {2, 2, 0.1}}, th);
  REQUIRE(std::abs(order4_obstruction(f)) < 1e-13);
  AlgebraElement g = commuting_family({{0, 1, 0.7}, {0, 2, 0.2}}, th);
  REQUIRE(std::abs(order4_obstruction(g)) < 1e-13);
}

TEST_CASE("obstruction closed form for U+U^{-1}+V+V^{-1}") {
  // tau(f^2 (d2 f)^2) = 6 u^2 and tau(f d2f f d2f) = (2 + 4 cos(2 pi theta)) u^2
  // with u the derivation unit; obstruction = 3 (A - B).
  for (double theta : {3.0 / 7.0, 0.6180339887498949, 0.123}) {
    ThetaMatrix th = ThetaMatrix::torus2(theta);
    MultiIndex u, v;
    u.n = v.n = 2;
    u.k[0] = 1;
    v.k[1] = 1;
    AlgebraElement f = add(add(monomial(th, u), monomial(th, -u)),
                           add(monomial(th, v), monomial(th, -v)));
    for (auto ds : {DerivationScale::unit, DerivationScale::two_pi}) {
      double u2 = std::norm(derivation_unit(ds));
      AlgebraElement d = derive(f, 1, ds);
      cplx A = trace(mul(mul(mul(f, f), d), d));
      cplx B = trace(mul(mul(mul(f, d), f), d));
      REQUIRE(std::abs(A - u2 * 6.0) < 1e-12);
      REQUIRE(std::abs(B - u2 * (2.0 + 4.0 * std::cos(two_pi * theta))) < 1e-12);
      REQUIRE(std::abs(order4_obstruction(f, ds) - 3.0 * (A - B)) < 1e-12);
    }
  }
}

TEST_CASE("taylor fit recovers the quartic leading behaviour") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  Rng rng(61);
  AlgebraElement f = random_self_adjoint(th, 2, 3, 1.0, rng);
  PerturbationProbe probe;
  probe.f = f;
  probe.fit_degree = 8;
  auto c = taylor_fit(probe);
  double low = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]),
                         std::abs(c[3])});
  REQUIRE(low < 1e-8);
  cplx obs = order4_obstruction(f);
  REQUIRE(std::abs(obs) > 1e-3);
  REQUIRE(std::abs(c[4].real() / obs.real() - order4_fit_constant) <
          1e-4 * order4_fit_constant);
}

TEST_CASE("degree-8 normal equations stay well conditioned") {
  ThetaMatrix th = ThetaMatrix::torus2(0.43);
  Rng rng(62);
  PerturbationProbe probe;
  probe.f = random_self_adjoint(th, 2, 3, 1.0, rng);
  probe.fit_degree = 8;
  REQUIRE_NOTHROW(taylor_fit(probe));
  PerturbationProbe bad = probe;
  bad.t_samples = {0.1, 0.2};  // too few samples for the degree
  REQUIRE_THROWS_AS(taylor_fit(bad), Error);
}

TEST_CASE("pinned ratio constant matches the data file") {
  std::ifstream in(std::string(NCT_SOURCE_DIR) + "/data/golden/order4_constant.json");
  REQUIRE(in.good());
  json j = json::parse(in);
  REQUIRE(j.at("name").get<std::string>() == "order4_fit_constant");
  REQUIRE(j.at("value").get<double>() == order4_fit_constant);
  REQUIRE(j.at("exact").get<std::string>() == "1/48");
}

TEST_CASE("fitted polynomial interpolates the trace at unseen t") {
  ThetaMatrix th = ThetaMatrix::torus2(0.6180339887498949);
  Rng rng(63);
  AlgebraElement f = random_self_adjoint(th, 2, 3, 1.0, rng);
  PerturbationProbe probe;
  probe.f = f;
  probe.fit_degree = 8;
  auto c = taylor_fit(probe);
  const double t = 0.22;  // not one of the sample points
  cplx pred = 0;
  double tp = 1;
  for (auto& ck : c) {
    pred += ck * tp;
    tp *= t;
  }
  cplx direct = omega(f, t);
  REQUIRE(std::abs(pred - direct) < 1e-6 * std::max(1e-8, std::abs(direct)));
  REQUIRE(std::abs(omega(f, 0.0)) == 0.0);
}
