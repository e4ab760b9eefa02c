#pragma once

// Smooth noncommutative torus A_Theta: finitely supported Fourier series over
// Z^n with the twisted (cocycle) product, involution, canonical derivations,
// trace, l1 norm and box truncation.  Every truncation feeds a conservative
// l1 error bound (dropped_mass) that propagates through all operations.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace nct {

using cplx = std::complex<double>;
inline constexpr double two_pi = 6.283185307179586476925286766559;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Antisymmetric real matrix of twist angles theta_{jk} (dimensionless).
struct ThetaMatrix {
  int n = 2;
  std::array<std::array<double, 4>, 4> th{};

  static ThetaMatrix torus2(double theta12) {
    ThetaMatrix t;
    t.n = 2;
    t.th[0][1] = theta12;
    t.th[1][0] = -theta12;
    return t;
  }

  // Irrational, pairwise independent angles built from one base value.
  static ThetaMatrix torus4(double base) {
    ThetaMatrix t;
    t.n = 4;
    const double v[6] = {base,     base / 2.0, base / 3.0,
                         base / 5.0, base / 7.0, base / 11.0};
    int idx = 0;
    for (int j = 0; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        t.th[j][k] = v[idx];
        t.th[k][j] = -v[idx];
        ++idx;
      }
    return t;
  }

  bool operator==(const ThetaMatrix& o) const {
    if (n != o.n) return false;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (th[j][k] != o.th[j][k]) return false;
    return true;
  }
};

// Fourier exponent of the normally ordered monomial U^k = U_1^{k1}...U_n^{kn}.
struct MultiIndex {
  int n = 2;
  std::array<int, 4> k{};

  MultiIndex() = default;
  MultiIndex(int dim, std::array<int, 4> kk) : n(dim), k(kk) {}

  bool operator<(const MultiIndex& o) const {
    for (int i = 0; i < n; ++i)
      if (k[i] != o.k[i]) return k[i] < o.k[i];
    return false;
  }
  bool operator==(const MultiIndex& o) const {
    for (int i = 0; i < n; ++i)
      if (k[i] != o.k[i]) return false;
    return true;
  }
  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex r = *this;
    for (int i = 0; i < n; ++i) r.k[i] += o.k[i];
    return r;
  }
  MultiIndex operator-() const {
    MultiIndex r = *this;
    for (int i = 0; i < n; ++i) r.k[i] = -k[i];
    return r;
  }
  int sup_norm() const {
    int m = 0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(k[i]));
    return m;
  }
  // 16 bits per axis, biased; valid for |k_i| < 32768.
  std::uint64_t pack() const {
    std::uint64_t p = 0;
    for (int i = 0; i < n; ++i)
      p |= std::uint64_t(std::uint16_t(k[i] + 32768)) << (16 * i);
    return p;
  }
  static MultiIndex unpack(int dim, std::uint64_t p) {
    MultiIndex r;
    r.n = dim;
    for (int i = 0; i < dim; ++i)
      r.k[i] = int((p >> (16 * i)) & 0xffff) - 32768;
    return r;
  }
};

// Cocycle of the normal ordering: U^a * U^b = phi(a,b) U^{a+b},
// phi(a,b) = exp(2 pi i sum_{j>k} theta_{jk} a_j b_k).
// Forced by U_j U_k = e^{2 pi i theta_{jk}} U_k U_j; unit-tested against the
// pairwise relations and a rational-angle matrix representation.
inline double cocycle_angle(const ThetaMatrix& t, const MultiIndex& a,
                            const MultiIndex& b) {
  double s = 0;
  for (int j = 1; j < t.n; ++j)
    for (int k = 0; k < j; ++k) s += t.th[j][k] * a.k[j] * b.k[k];
  return two_pi * s;
}

inline cplx cocycle(const ThetaMatrix& t, const MultiIndex& a,
                    const MultiIndex& b) {
  return std::polar(1.0, cocycle_angle(t, a, b));
}

enum class DerivationScale { unit, two_pi };

inline cplx derivation_unit(DerivationScale s) {
  return s == DerivationScale::unit ? cplx(0, 1) : cplx(0, two_pi);
}

struct AlgebraElement {
  ThetaMatrix theta;
  std::map<MultiIndex, cplx> coeffs;
  double dropped_mass = 0;  // conservative l1 bound on discarded coefficients

  AlgebraElement() = default;
  explicit AlgebraElement(const ThetaMatrix& t) : theta(t) {}

  double coeff_mass() const {
    double s = 0;
    for (auto& [k, c] : coeffs) s += std::abs(c);
    return s;
  }
  int support_radius() const {
    int r = 0;
    for (auto& [k, c] : coeffs) r = std::max(r, k.sup_norm());
    return r;
  }
  cplx coeff(const MultiIndex& k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? cplx(0) : it->second;
  }
  void set(const MultiIndex& k, cplx c) {
    if (c == cplx(0))
      coeffs.erase(k);
    else
      coeffs[k] = c;
  }
  bool axis_active(int j) const {
    for (auto& [k, c] : coeffs)
      if (k.k[j] != 0) return true;
    return false;
  }
};

inline AlgebraElement identity(const ThetaMatrix& t) {
  AlgebraElement e(t);
  e.coeffs[MultiIndex(t.n, {})] = 1.0;
  return e;
}

inline AlgebraElement monomial(const ThetaMatrix& t, const MultiIndex& k,
                               cplx c = 1.0) {
  AlgebraElement e(t);
  if (c != cplx(0)) e.coeffs[k] = c;
  return e;
}

inline AlgebraElement zero(const ThetaMatrix& t) { return AlgebraElement(t); }

inline double one_norm(const AlgebraElement& a) {
  return a.coeff_mass() + a.dropped_mass;
}

inline cplx trace(const AlgebraElement& a) {
  return a.coeff(MultiIndex(a.theta.n, {}));
}

// tau(ab) without forming the product: only exponent pairs k, -k contribute.
inline cplx trace_pair(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.theta == b.theta)) throw Error("trace_pair: mismatched theta");
  cplx s = 0;
  for (auto& [ka, ca] : a.coeffs) {
    auto it = b.coeffs.find(-ka);
    if (it != b.coeffs.end())
      s += ca * it->second * cocycle(a.theta, ka, it->first);
  }
  return s;
}

inline AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.theta == b.theta)) throw Error("add: mismatched theta");
  AlgebraElement r = a;
  for (auto& [k, c] : b.coeffs) {
    auto v = r.coeff(k) + c;
    r.set(k, v);
  }
  r.dropped_mass = a.dropped_mass + b.dropped_mass;
  return r;
}

inline AlgebraElement scale(const AlgebraElement& a, cplx s) {
  AlgebraElement r(a.theta);
  if (s == cplx(0)) return r;
  for (auto& [k, c] : a.coeffs) r.coeffs[k] = s * c;
  r.dropped_mass = a.dropped_mass * std::abs(s);
  return r;
}

inline AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) {
  return add(a, scale(b, -1.0));
}

inline AlgebraElement operator+(const AlgebraElement& a,
                                const AlgebraElement& b) {
  return add(a, b);
}
inline AlgebraElement operator-(const AlgebraElement& a,
                                const AlgebraElement& b) {
  return sub(a, b);
}
inline AlgebraElement operator*(cplx s, const AlgebraElement& a) {
  return scale(a, s);
}

inline AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.theta == b.theta)) throw Error("mul: mismatched theta");
  const int n = a.theta.n;
  AlgebraElement r(a.theta);
  const double ma = a.coeff_mass(), mb = b.coeff_mass();
  r.dropped_mass = ma * b.dropped_mass + a.dropped_mass * (mb + b.dropped_mass);
  if (a.coeffs.empty() || b.coeffs.empty()) return r;

  int alo[4] = {0, 0, 0, 0}, ahi[4] = {0, 0, 0, 0};
  int blo[4] = {0, 0, 0, 0}, bhi[4] = {0, 0, 0, 0};
  bool first = true;
  for (auto& [k, c] : a.coeffs) {
    for (int i = 0; i < n; ++i) {
      alo[i] = first ? k.k[i] : std::min(alo[i], k.k[i]);
      ahi[i] = first ? k.k[i] : std::max(ahi[i], k.k[i]);
    }
    first = false;
  }
  first = true;
  for (auto& [k, c] : b.coeffs) {
    for (int i = 0; i < n; ++i) {
      blo[i] = first ? k.k[i] : std::min(blo[i], k.k[i]);
      bhi[i] = first ? k.k[i] : std::max(bhi[i], k.k[i]);
    }
    first = false;
  }

  std::vector<MultiIndex> bk;
  std::vector<cplx> bc;
  bk.reserve(b.coeffs.size());
  bc.reserve(b.coeffs.size());
  for (auto& [k, c] : b.coeffs) {
    bk.push_back(k);
    bc.push_back(c);
  }

  // The cocycle is linear in b's exponents: phi(a,b) = prod_k exp(i w_k b_k)
  // with w_k(a) = 2 pi sum_{j>k} theta_{jk} a_j, so one phase table per axis
  // replaces a trig call per coefficient pair.  Tables are refreshed from
  // std::polar every 64 steps to bound the drift of the running product.
  std::array<std::vector<cplx>, 4> tab;
  int active[4], nact;

  int lo[4], dims[4];
  long long cells = 1;
  for (int i = 0; i < n; ++i) {
    lo[i] = alo[i] + blo[i];
    dims[i] = (ahi[i] + bhi[i]) - lo[i] + 1;
    cells *= dims[i];
  }
  const bool dense =
      cells <= (1 << 22) && cells <= 32 * (long long)(a.coeffs.size() + 1) *
                                        (long long)(b.coeffs.size() + 1);
  long long stride[4];
  std::vector<cplx> acc;
  std::unordered_map<std::uint64_t, cplx> hacc;
  if (dense) {
    stride[n - 1] = 1;
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
    acc.assign(std::size_t(cells), cplx(0));
  } else {
    hacc.reserve(a.coeffs.size() * 2 + b.coeffs.size() * 2);
  }

  for (auto& [ka, ca] : a.coeffs) {
    nact = 0;
    for (int ax = 0; ax < n; ++ax) {
      double w = 0;
      for (int j = ax + 1; j < n; ++j) w += a.theta.th[j][ax] * ka.k[j];
      if (w == 0) continue;
      w *= two_pi;
      const int D = bhi[ax] - blo[ax] + 1;
      auto& t = tab[ax];
      t.resize(D);
      cplx step = std::polar(1.0, w), cur = 0;
      for (int m = 0; m < D; ++m) {
        if (m % 64 == 0) cur = std::polar(1.0, w * (blo[ax] + m));
        t[m] = cur;
        cur *= step;
      }
      active[nact++] = ax;
    }
    if (dense) {
      long long base = 0;
      for (int i = 0; i < n; ++i) base += (ka.k[i] - lo[i]) * stride[i];
      for (std::size_t i = 0; i < bk.size(); ++i) {
        cplx ph = ca * bc[i];
        for (int q = 0; q < nact; ++q) {
          const int ax = active[q];
          ph *= tab[ax][bk[i].k[ax] - blo[ax]];
        }
        long long idx = base;
        for (int q = 0; q < n; ++q) idx += bk[i].k[q] * stride[q];
        acc[std::size_t(idx)] += ph;
      }
    } else {
      for (std::size_t i = 0; i < bk.size(); ++i) {
        cplx ph = ca * bc[i];
        for (int q = 0; q < nact; ++q) {
          const int ax = active[q];
          ph *= tab[ax][bk[i].k[ax] - blo[ax]];
        }
        hacc[(ka + bk[i]).pack()] += ph;
      }
    }
  }

  if (dense) {
    // cell order is lexicographic in the exponent, so hinted insertion at the
    // end keeps the map build linear
    MultiIndex k;
    k.n = n;
    long long idx = 0;
    int ctr[4] = {0, 0, 0, 0};
    while (idx < cells) {
      if (acc[std::size_t(idx)] != cplx(0)) {
        for (int i = 0; i < n; ++i) k.k[i] = lo[i] + ctr[i];
        r.coeffs.emplace_hint(r.coeffs.end(), k, acc[std::size_t(idx)]);
      }
      ++idx;
      for (int i = n - 1; i >= 0; --i) {
        if (++ctr[i] < dims[i]) break;
        ctr[i] = 0;
      }
    }
  } else {
    for (auto& [p, c] : hacc)
      if (c != cplx(0)) r.coeffs[MultiIndex::unpack(n, p)] = c;
  }
  return r;
}

inline AlgebraElement operator*(const AlgebraElement& a,
                                const AlgebraElement& b) {
  return mul(a, b);
}

// (U^k)* = conj(phi(k,-k)) U^{-k}: re-normal-ordering of U_n^{-kn}...U_1^{-k1}.
inline AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement r(a.theta);
  for (auto& [k, c] : a.coeffs) {
    cplx ph = std::conj(cocycle(a.theta, k, -k));
    r.coeffs[-k] = std::conj(c) * ph;
  }
  r.dropped_mass = a.dropped_mass;
  return r;
}

inline AlgebraElement derive(const AlgebraElement& a, int j,
                             DerivationScale ds = DerivationScale::unit) {
  if (j < 0 || j >= a.theta.n) throw Error("derive: axis out of range");
  const cplx u = derivation_unit(ds);
  AlgebraElement r(a.theta);
  int maxdeg = 1;
  for (auto& [k, c] : a.coeffs) {
    maxdeg = std::max(maxdeg, std::abs(k.k[j]));
    if (k.k[j] != 0) r.coeffs[k] = u * double(k.k[j]) * c;
  }
  r.dropped_mass = a.dropped_mass * std::abs(u) * maxdeg;
  return r;
}

inline AlgebraElement laplacian(const AlgebraElement& a,
                                DerivationScale ds = DerivationScale::unit) {
  AlgebraElement r(a.theta);
  for (int j = 0; j < a.theta.n; ++j) r = add(r, derive(derive(a, j, ds), j, ds));
  return r;
}

inline AlgebraElement truncate(const AlgebraElement& a, int box_radius) {
  if (box_radius < 0) throw Error("truncate: negative box");
  AlgebraElement r(a.theta);
  r.dropped_mass = a.dropped_mass;
  for (auto& [k, c] : a.coeffs) {
    if (k.sup_norm() <= box_radius)
      r.coeffs[k] = c;
    else
      r.dropped_mass += std::abs(c);
  }
  return r;
}

// Magnitude compaction: discards coefficients of modulus <= tol, charging
// their exact l1 mass to dropped_mass.  Keeps series arithmetic sparse
// without weakening the certified bound.
inline AlgebraElement prune(const AlgebraElement& a, double tol) {
  if (tol <= 0) return a;
  AlgebraElement r(a.theta);
  r.dropped_mass = a.dropped_mass;
  for (auto& [k, c] : a.coeffs) {
    if (std::abs(c) > tol)
      r.coeffs[k] = c;
    else
      r.dropped_mass += std::abs(c);
  }
  return r;
}

inline double distance_1(const AlgebraElement& a, const AlgebraElement& b) {
  return sub(a, b).coeff_mass();
}

inline bool is_self_adjoint(const AlgebraElement& a, double tol = 1e-12) {
  return distance_1(a, adjoint(a)) <= tol;
}

}  // namespace nct
