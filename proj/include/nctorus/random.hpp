#pragma once

// Deterministic random corpus generation.  The normal sampler is hand-rolled
// (Box-Muller over mt19937_64) so that seeded runs produce identical bytes on
// every platform; std::normal_distribution is implementation-defined.

#include <nctorus/core.hpp>

#include <random>

namespace nct {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0,1)
    return (eng_() >> 11) * 0x1.0p-53;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + int(eng_() % std::uint64_t(hi - lo + 1));
  }
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0, u2 = 0;
    do { u1 = uniform(); } while (u1 <= 0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(two_pi * u2);
    return r * std::cos(two_pi * u2);
  }
  cplx cnormal() { return cplx(normal(), normal()); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

// Random self-adjoint element: a few Gaussian monomials inside the given box,
// symmetrized and l1-normalized.  `axes` restricts the support to a sublattice
// (empty = all axes).
inline AlgebraElement random_self_adjoint(const ThetaMatrix& t, int radius,
                                          int n_monomials, double target_norm,
                                          Rng& rng,
                                          std::vector<int> axes = {}) {
  if (axes.empty())
    for (int j = 0; j < t.n; ++j) axes.push_back(j);
  AlgebraElement a(t);
  int placed = 0, guard = 0;
  while (placed < n_monomials && guard++ < 1000) {
    MultiIndex k;
    k.n = t.n;
    for (int j : axes) k.k[j] = rng.uniform_int(-radius, radius);
    if (k.sup_norm() == 0) continue;
    a.set(k, a.coeff(k) + 0.5 * rng.cnormal());
    ++placed;
  }
  a = scale(add(a, adjoint(a)), 0.5);
  double m = a.coeff_mass();
  if (m > 0) a = scale(a, target_norm / m);
  a.dropped_mass = 0;
  return a;
}

}  // namespace nct
