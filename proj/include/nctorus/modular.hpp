#pragma once

// The modular derivation nabla = -ad_f as a concrete linear operator on the
// coefficient space, with one- and two-variable analytic functional calculus.
//
// Two realizations share one interface:
//  * matrix mode — nabla restricted to a truncation box, eigendecomposed
//    (zheevd).  ad_f never mixes lattice components along axes where f has no
//    support, so the operator is assembled block-diagonally over those
//    "inactive" offsets; each block lives on the active-axis sublattice.
//  * finite-spectrum mode — for conformal factors s*p with p a projection the
//    spectrum is exactly {0, +s, -s} and the spectral projections are
//    quadratic polynomials in nabla, so the calculus is closed-form.
//
// Bivariate functions act as sum_{a,b} fn2(lambda_a, lambda_b) x_a y_b over
// eigencomponents; the first slot carries the eigenvalue of the left factor.
// In matrix mode this is evaluated through a Chebyshev tensor expansion of
// fn2 on the spectral interval (adaptive degree, checked on eigenvalue pairs)
// so the cost stays at O(P) algebra products instead of O(dim^2).

#include <nctorus/core.hpp>
#include <nctorus/spectral_functions.hpp>

#include <lapacke.h>

#include <algorithm>
#include <cstring>
#include <memory>

namespace nct {

inline AlgebraElement ad_apply(const AlgebraElement& f,
                               const AlgebraElement& x) {
  return sub(mul(x, f), mul(f, x));  // nabla(x) = xf - fx = -ad_f(x)
}

struct AdBlock {
  int dim = 0;
  std::vector<MultiIndex> basis;
  std::unordered_map<std::uint64_t, int> index;
  std::vector<cplx> Z;           // eigenvectors, column-major
  std::vector<double> eigvals;
  double herm_defect = 0;
};

struct AdOperator {
  AlgebraElement f;
  int box_radius = 0;
  std::vector<int> active;  // axes where f has support
  int deg_f = 0;            // max |k_j| over active axes of supp f

  bool finite_spectrum = false;
  double spec_s = 0;  // spectrum {0, +s, -s} when finite_spectrum

  mutable std::map<std::uint64_t, std::shared_ptr<AdBlock>> blocks;

  double spectral_radius_bound() const { return 2.0 * one_norm(f); }
};

inline AdOperator build_ad(const AlgebraElement& f, int box_radius) {
  if (!is_self_adjoint(f, 1e-9 + 1e-9 * one_norm(f)))
    throw Error("build_ad: f not self-adjoint");
  AdOperator op;
  op.f = f;
  op.box_radius = box_radius;
  for (int j = 0; j < f.theta.n; ++j)
    if (f.axis_active(j)) op.active.push_back(j);
  for (auto& [k, c] : f.coeffs) op.deg_f = std::max(op.deg_f, k.sup_norm());
  return op;
}

// Conformal factor s*p with p an (approximate) projection.
inline AdOperator build_ad_dilaton(const AlgebraElement& p, double s) {
  AlgebraElement f = scale(p, s);
  AdOperator op = build_ad(f, 0);
  op.finite_spectrum = true;
  op.spec_s = s;
  return op;
}

namespace detail {

inline std::uint64_t inactive_key(const AdOperator& op, const MultiIndex& k) {
  MultiIndex m = k;
  for (int a : op.active) m.k[a] = 0;
  return m.pack();
}

inline const AdBlock& block_for(const AdOperator& op, const MultiIndex& kref) {
  const std::uint64_t key = inactive_key(op, kref);
  auto it = op.blocks.find(key);
  if (it != op.blocks.end()) return *it->second;

  auto blk = std::make_shared<AdBlock>();
  const int B = op.box_radius;
  const int m = int(op.active.size());
  const int side = 2 * B + 1;
  int D = 1;
  for (int i = 0; i < m; ++i) D *= side;
  blk->dim = D;
  blk->basis.resize(D);
  MultiIndex offset = MultiIndex::unpack(op.f.theta.n, key);
  offset.n = op.f.theta.n;
  for (int idx = 0; idx < D; ++idx) {
    MultiIndex k = offset;
    int r = idx;
    for (int i = 0; i < m; ++i) {
      k.k[op.active[i]] = (r % side) - B;
      r /= side;
    }
    blk->basis[idx] = k;
    blk->index[k.pack()] = idx;
  }

  std::vector<cplx> M(std::size_t(D) * D, cplx(0));
  for (int jc = 0; jc < D; ++jc) {
    const MultiIndex& k = blk->basis[jc];
    for (auto& [mn, c] : op.f.coeffs) {
      // nabla(U^k) = U^k f - f U^k = sum_m f_m (phi(k,m) - phi(m,k)) U^{k+m}
      MultiIndex tgt = k + mn;
      auto itr = blk->index.find(tgt.pack());
      if (itr == blk->index.end()) continue;
      cplx w = c * (cocycle(op.f.theta, k, mn) - cocycle(op.f.theta, mn, k));
      M[std::size_t(itr->second) + std::size_t(D) * jc] += w;
    }
  }
  // Monomials are orthonormal for the tau inner product, so the untruncated
  // operator is Hermitian; symmetrize to absorb roundoff and record defect.
  double defect = 0;
  for (int i = 0; i < D; ++i)
    for (int j = i; j < D; ++j) {
      cplx a = M[std::size_t(i) + std::size_t(D) * j];
      cplx b = M[std::size_t(j) + std::size_t(D) * i];
      defect = std::max(defect, std::abs(a - std::conj(b)));
      cplx h = 0.5 * (a + std::conj(b));
      M[std::size_t(i) + std::size_t(D) * j] = h;
      M[std::size_t(j) + std::size_t(D) * i] = std::conj(h);
    }
  blk->herm_defect = defect;
  blk->eigvals.resize(D);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', D,
                            reinterpret_cast<lapack_complex_double*>(M.data()),
                            D, blk->eigvals.data());
  if (info != 0) throw Error("zheevd failed, info=" + std::to_string(info));
  blk->Z = std::move(M);

  op.blocks.emplace(key, blk);
  return *op.blocks[key];
}

inline void check_margin(const AdOperator& op, const AlgebraElement& x) {
  int r = 0;
  for (auto& [k, c] : x.coeffs)
    for (int a : op.active) r = std::max(r, std::abs(k.k[a]));
  if (r + op.deg_f > op.box_radius - op.deg_f)
    throw Error("modular margin violation: input radius " + std::to_string(r) +
                ", deg f " + std::to_string(op.deg_f) + ", box " +
                std::to_string(op.box_radius));
}

// Groups the coefficients of x by inactive offset.
inline std::map<std::uint64_t, std::vector<std::pair<MultiIndex, cplx>>>
group_by_offset(const AdOperator& op, const AlgebraElement& x) {
  std::map<std::uint64_t, std::vector<std::pair<MultiIndex, cplx>>> g;
  for (auto& [k, c] : x.coeffs) g[inactive_key(op, k)].push_back({k, c});
  return g;
}

}  // namespace detail

// --- finite-spectrum route ------------------------------------------------

// Components of x along the eigenvalues (-s, 0, +s) of nabla.
inline std::array<AlgebraElement, 3> dilaton_components(const AdOperator& op,
                                                        const AlgebraElement& x) {
  const double s = op.spec_s;
  AlgebraElement n1 = ad_apply(op.f, x);
  AlgebraElement n2 = ad_apply(op.f, n1);
  // P_{+s} = nabla(nabla + s)/(2 s^2), P_{-s} = nabla(nabla - s)/(2 s^2)
  AlgebraElement xp = scale(add(n2, scale(n1, s)), 1.0 / (2 * s * s));
  AlgebraElement xm = scale(sub(n2, scale(n1, s)), 1.0 / (2 * s * s));
  AlgebraElement x0 = sub(sub(x, xp), xm);
  return {xm, x0, xp};
}

// --- functional calculus ----------------------------------------------------

inline AlgebraElement apply_fn(const AdOperator& op, const SpectralFunction& fn,
                               const AlgebraElement& x) {
  if (op.active.empty()) return scale(x, fn.f(0.0));
  if (op.finite_spectrum) {
    auto [xm, x0, xp] = dilaton_components(op, x);
    const double s = op.spec_s;
    return add(add(scale(xm, fn.f(-s)), scale(x0, fn.f(0.0))),
               scale(xp, fn.f(s)));
  }
  detail::check_margin(op, x);
  AlgebraElement out(x.theta);
  double fmax = 0;
  for (auto& [key, items] : detail::group_by_offset(op, x)) {
    const AdBlock& blk = detail::block_for(op, items.front().first);
    const int D = blk.dim;
    std::vector<cplx> v(D, cplx(0));
    for (auto& [k, c] : items) v[blk.index.at(k.pack())] = c;
    // w = Z^H v, scaled by fn(lambda), then back: u = Z w
    std::vector<cplx> w(D, cplx(0));
    for (int a = 0; a < D; ++a) {
      cplx sum = 0;
      const cplx* col = &blk.Z[std::size_t(D) * a];
      for (int i = 0; i < D; ++i) sum += std::conj(col[i]) * v[i];
      double fv = fn.f(blk.eigvals[a]);
      fmax = std::max(fmax, std::abs(fv));
      w[a] = fv * sum;
    }
    std::vector<cplx> u(D, cplx(0));
    for (int a = 0; a < D; ++a) {
      const cplx* col = &blk.Z[std::size_t(D) * a];
      const cplx wa = w[a];
      if (wa == cplx(0)) continue;
      for (int i = 0; i < D; ++i) u[i] += col[i] * wa;
    }
    for (int i = 0; i < D; ++i)
      if (std::abs(u[i]) > 1e-300)
        out.set(blk.basis[i], out.coeff(blk.basis[i]) + u[i]);
  }
  out.dropped_mass = x.dropped_mass * std::max(1.0, fmax);
  return out;
}

namespace detail {

struct Cheb2 {
  double lo = -1, hi = 1;
  int P = 0;
  std::vector<double> c;  // (P+1)x(P+1), row p, col q
  double map(double s) const { return (2 * s - lo - hi) / (hi - lo); }
};

inline Cheb2 cheb_fit2(const SpectralFunction2& fn2, double lo, double hi,
                       int P) {
  Cheb2 ch;
  ch.lo = lo;
  ch.hi = hi;
  ch.P = P;
  const int N = P + 1;
  std::vector<double> xs(N), F(std::size_t(N) * N);
  for (int i = 0; i < N; ++i)
    xs[i] = std::cos(M_PI * (i + 0.5) / N);
  auto unmap = [&](double t) { return 0.5 * ((hi - lo) * t + lo + hi); };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      F[std::size_t(i) * N + j] = fn2.f(unmap(xs[i]), unmap(xs[j]));
  // DCT along each dimension
  std::vector<double> Tm(std::size_t(N) * N);
  for (int p = 0; p < N; ++p)
    for (int i = 0; i < N; ++i)
      Tm[std::size_t(p) * N + i] = std::cos(M_PI * p * (i + 0.5) / N);
  std::vector<double> G(std::size_t(N) * N, 0.0);
  for (int p = 0; p < N; ++p)
    for (int j = 0; j < N; ++j) {
      double s = 0;
      for (int i = 0; i < N; ++i) s += Tm[std::size_t(p) * N + i] * F[std::size_t(i) * N + j];
      G[std::size_t(p) * N + j] = s * 2.0 / N;
    }
  ch.c.assign(std::size_t(N) * N, 0.0);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) {
      double s = 0;
      for (int j = 0; j < N; ++j) s += Tm[std::size_t(q) * N + j] * G[std::size_t(p) * N + j];
      double coef = s * 2.0 / N;
      if (p == 0) coef *= 0.5;
      if (q == 0) coef *= 0.5;
      ch.c[std::size_t(p) * N + q] = coef;
    }
  return ch;
}

inline double cheb_eval2(const Cheb2& ch, double s, double t) {
  const int N = ch.P + 1;
  double ts = ch.map(s), tt = ch.map(t);
  std::vector<double> Ts(N), Tt(N);
  Ts[0] = 1;
  Tt[0] = 1;
  if (N > 1) {
    Ts[1] = ts;
    Tt[1] = tt;
  }
  for (int p = 2; p < N; ++p) {
    Ts[p] = 2 * ts * Ts[p - 1] - Ts[p - 2];
    Tt[p] = 2 * tt * Tt[p - 1] - Tt[p - 2];
  }
  double sum = 0;
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q) sum += ch.c[std::size_t(p) * N + q] * Ts[p] * Tt[q];
  return sum;
}

// Chebyshev transforms T_p(nabla) x for p = 0..P, per block, in eigenspace.
inline std::vector<AlgebraElement> cheb_transforms(const AdOperator& op,
                                                   const Cheb2& ch,
                                                   const AlgebraElement& x,
                                                   const std::vector<double>* mixw,
                                                   int rows) {
  // If mixw != nullptr (size rows*(P+1)), returns rows elements
  //   E_r = sum_q mixw[r][q] T_q(nabla) x;  otherwise returns T_p(nabla) x.
  const int N = ch.P + 1;
  const int R = mixw ? rows : N;
  std::vector<AlgebraElement> out(R, AlgebraElement(x.theta));
  for (auto& [key, items] : detail::group_by_offset(op, x)) {
    const AdBlock& blk = detail::block_for(op, items.front().first);
    const int D = blk.dim;
    std::vector<cplx> v(D, cplx(0));
    for (auto& [k, c] : items) v[blk.index.at(k.pack())] = c;
    std::vector<cplx> w(D);
    for (int a = 0; a < D; ++a) {
      cplx sum = 0;
      const cplx* col = &blk.Z[std::size_t(D) * a];
      for (int i = 0; i < D; ++i) sum += std::conj(col[i]) * v[i];
      w[a] = sum;
    }
    std::vector<double> T(std::size_t(N) * D);
    for (int a = 0; a < D; ++a) {
      double tl = ch.map(blk.eigvals[a]);
      T[a] = 1;
      if (N > 1) T[std::size_t(D) + a] = tl;
      for (int p = 2; p < N; ++p)
        T[std::size_t(p) * D + a] =
            2 * tl * T[std::size_t(p - 1) * D + a] - T[std::size_t(p - 2) * D + a];
    }
    for (int r = 0; r < R; ++r) {
      std::vector<cplx> wh(D);
      if (mixw) {
        for (int a = 0; a < D; ++a) {
          double coef = 0;
          for (int q = 0; q < N; ++q)
            coef += (*mixw)[std::size_t(r) * N + q] * T[std::size_t(q) * D + a];
          wh[a] = coef * w[a];
        }
      } else {
        for (int a = 0; a < D; ++a) wh[a] = T[std::size_t(r) * D + a] * w[a];
      }
      std::vector<cplx> u(D, cplx(0));
      for (int a = 0; a < D; ++a) {
        if (wh[a] == cplx(0)) continue;
        const cplx* col = &blk.Z[std::size_t(D) * a];
        for (int i = 0; i < D; ++i) u[i] += col[i] * wh[a];
      }
      for (int i = 0; i < D; ++i)
        if (std::abs(u[i]) > 1e-300)
          out[r].set(blk.basis[i], out[r].coeff(blk.basis[i]) + u[i]);
    }
  }
  return out;
}

}  // namespace detail

inline AlgebraElement apply_fn2(const AdOperator& op,
                                const SpectralFunction2& fn2,
                                const AlgebraElement& x,
                                const AlgebraElement& y) {
  if (op.active.empty()) return scale(mul(x, y), fn2.f(0.0, 0.0));
  if (op.finite_spectrum) {
    auto xc = dilaton_components(op, x);
    auto yc = dilaton_components(op, y);
    const double lam[3] = {-op.spec_s, 0.0, op.spec_s};
    AlgebraElement out(x.theta);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        out = add(out, scale(mul(xc[a], yc[b]), fn2.f(lam[a], lam[b])));
    return out;
  }
  detail::check_margin(op, x);
  detail::check_margin(op, y);

  // Overall spectral interval: eigendecompose the blocks first.
  double lo = 0, hi = 0;
  for (auto& g : {detail::group_by_offset(op, x), detail::group_by_offset(op, y)})
    for (auto& [key, items] : g) {
      const AdBlock& blk = detail::block_for(op, items.front().first);
      lo = std::min(lo, blk.eigvals.front());
      hi = std::max(hi, blk.eigvals.back());
    }
  double pad = 1e-6 + 0.01 * (hi - lo);
  lo -= pad;
  hi += pad;

  // Adaptive tensor-Chebyshev expansion, validated on actual eigenvalue pairs.
  detail::Cheb2 ch;
  double worst = 0, fmax = 0;
  for (int P = 8; P <= 96; P = P * 3 / 2) {
    ch = detail::cheb_fit2(fn2, lo, hi, P);
    worst = 0;
    fmax = 0;
    for (auto& [key, items] : detail::group_by_offset(op, x)) {
      const AdBlock& bx = detail::block_for(op, items.front().first);
      for (auto& [key2, items2] : detail::group_by_offset(op, y)) {
        const AdBlock& by = detail::block_for(op, items2.front().first);
        const int step = std::max(1, bx.dim / 40);
        const int step2 = std::max(1, by.dim / 40);
        for (int a = 0; a < bx.dim; a += step)
          for (int b = 0; b < by.dim; b += step2) {
            double ex = fn2.f(bx.eigvals[a], by.eigvals[b]);
            fmax = std::max(fmax, std::abs(ex));
            worst = std::max(worst,
                             std::abs(detail::cheb_eval2(ch, bx.eigvals[a],
                                                         by.eigvals[b]) -
                                      ex));
          }
      }
    }
    if (worst < 1e-12) break;
  }
  if (worst > 1e-10)
    throw Error("apply_fn2: kernel expansion residual " + std::to_string(worst));

  const int N = ch.P + 1;
  auto Xp = detail::cheb_transforms(op, ch, x, nullptr, 0);
  auto Yp = detail::cheb_transforms(op, ch, y, &ch.c, N);  // Y_p = sum_q c_pq T_q y
  AlgebraElement out(x.theta);
  const double nx = one_norm(x), ny = one_norm(y);
  for (int p = 0; p < N; ++p) {
    AlgebraElement a = prune(Xp[p], 1e-16 * std::max(1.0, nx));
    AlgebraElement b = prune(Yp[p], 1e-16 * std::max(1.0, ny));
    if (a.coeffs.empty() || b.coeffs.empty()) continue;
    out = add(out, mul(a, b));
  }
  // Truncation bookkeeping: mass dropped from either input can end up
  // anywhere in the result, amplified by at most the kernel sup plus the
  // expansion defect (same combination rule as mul).
  const double dx = x.dropped_mass, dy = y.dropped_mass;
  out.dropped_mass += fmax * (dx * (ny + dy) + nx * dy) +
                      worst * (nx + dx) * (ny + dy);
  return out;
}

}  // namespace nct
