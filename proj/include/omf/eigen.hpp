#pragma once

// Exact splitting of commuting Hecke actions into invariant blocks.
//
// Everything runs multi-modularly: each word-size prime q produces a full
// split of the space (dense kernel recursion for small spaces, a sparse
// minimal-polynomial tuple search for large ones), two primes must agree on
// the block structure, and every rational claim is certified afterwards
// over the integers: eigenvectors are CRT-lifted, reconstructed, and
// rechecked exactly; block charpolys are lifted with enough primes to cover
// the coefficient bound. Splitting only ever happens at integer roots, so
// conjugate irrational eigenvalues stay glued together in their blocks.

#include "omf/characters.hpp"
#include "omf/hecke.hpp"
#include "omf/linalg.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace omf {

// ---- exact characteristic polynomial ------------------------------------

// det(xI - M), ascending coefficients. Hessenberg mod enough 61-bit primes
// to cover the coefficient bound (1 + max row sum)^n, spot-checked against
// a determinant evaluation at a random point mod a fresh prime.
inline std::vector<BigInt> charpoly(const std::vector<std::vector<i64>>& m) {
  int n = static_cast<int>(m.size());
  for (auto& row : m) OMF_CHECK(static_cast<int>(row.size()) == n, "charpoly needs a square matrix");
  if (n == 0) return {BigInt(1)};
  BigInt rho = 0;
  for (auto& row : m) {
    BigInt s = 0;
    for (i64 x : row) s += (x < 0 ? -x : x);
    if (s > rho) rho = s;
  }
  BigInt bound = 1;
  for (int k = 0; k < n; ++k) bound *= rho + 1;
  std::vector<u64> primes;
  BigInt prod = 1;
  {
    i64 p = (i64(1) << 61) + 20;
    while (prod <= 2 * bound) {
      p = next_prime(p);
      primes.push_back(static_cast<u64>(p));
      prod *= p;
    }
  }
  std::vector<std::vector<u64>> cps;
  for (u64 q : primes) cps.push_back(hessenberg_charpoly(DenseMod::reduce(m, q), q));
  std::vector<BigInt> out(n + 1);
  for (int d = 0; d <= n; ++d) {
    std::vector<u64> rs(primes.size());
    for (std::size_t k = 0; k < primes.size(); ++k) rs[k] = cps[k][d];
    out[d] = crt_balanced(rs, primes);
  }
  OMF_CHECK(out[n] == 1, "charpoly is not monic");
  // verify chi(t) = det(tI - M) at a random point mod a fresh prime
  {
    u64 q = static_cast<u64>(next_prime((i64(1) << 61) + (i64(1) << 41)));
    Rng rng(0x7a5c3d1fULL ^ static_cast<u64>(n));
    u64 t = rng.below(q);
    DenseMod A(n, n, q);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        u64 v = mod_of_i64(-m[i][j], q);
        A.at(i, j) = (i == j) ? (t + v) % q : v;
      }
    u64 want = det_mod(std::move(A));
    u64 got = 0;
    for (int d = n; d >= 0; --d) {
      BigInt r = out[d] % q;
      if (r < 0) r += q;
      got = (mulmod(got, t, q) + static_cast<u64>(r)) % q;
    }
    OMF_CHECK(got == want, "charpoly failed the determinant spot check");
  }
  return out;
}

// ---- splitting options and result ----------------------------------------

struct SplitOptions {
  int charpoly_cap = 64;  // largest block dimension whose charpolys get lifted
  int dense_cutoff = 320; // above this the sparse eigenvalue-tuple search runs
  int max_runs = 10;      // total modular splits allowed
  u64 seed = 0xbeef5eedULL;
};

struct InvariantBlock {
  int dimension = 0;
  bool refined = true;                          // false: dimension known, structure not chased
  std::map<i64, Rat> eigenvalues;               // dimension 1 only
  std::vector<Rat> eigenvector;                 // dimension 1 only, exact and verified
  std::map<i64, std::vector<BigInt>> charpolys; // refined blocks within the cap
};

namespace detail {

struct ModLeaf {
  int dim = 0;
  bool refined = true;
  std::map<i64, i64> eigs;             // integer eigenvalues fixed along the split
  std::vector<u64> vec;                // dim 1: eigenvector, pivot coordinate = 1
  int pivot = -1;
  std::map<i64, std::vector<u64>> cps; // charpolys mod q for refined 1 < dim <= cap
};

struct ModSplit {
  u64 q = 0;
  std::vector<ModLeaf> leaves;
};

inline std::string split_signature(const ModSplit& s) {
  std::string sig;
  for (const ModLeaf& L : s.leaves) {
    sig += std::to_string(L.dim);
    sig += L.refined ? 'r' : 'u';
    for (auto& [p, a] : L.eigs) sig += std::to_string(p) + ":" + std::to_string(a) + ",";
    sig += ";" + std::to_string(L.pivot) + "#";
  }
  return sig;
}

inline std::vector<i64> integer_roots(const std::vector<u64>& f, i64 bound, u64 q) {
  std::vector<i64> roots;
  for (i64 a = -bound; a <= bound; ++a)
    if (eval_poly(f, mod_of_i64(a, q), q) == 0) roots.push_back(a);
  return roots;
}

inline std::vector<u64> poly_mul_linear(const std::vector<u64>& g, i64 a, u64 q) {
  std::vector<u64> h(g.size() + 1, 0);
  u64 am = mod_of_i64(a, q);
  for (std::size_t d = 0; d < g.size(); ++d) {
    h[d + 1] = (h[d + 1] + g[d]) % q;
    h[d] = (h[d] + (q - mulmod(am, g[d], q))) % q;
  }
  return h;
}

// child = basis * coeffs, one ambient column per coefficient vector
inline std::vector<std::vector<u64>> lift_columns(const std::vector<std::vector<u64>>& basis,
                                                  const std::vector<std::vector<u64>>& coeffs,
                                                  u64 q) {
  std::vector<std::vector<u64>> out;
  std::size_t n = basis.empty() ? 0 : basis[0].size();
  for (const auto& c : coeffs) {
    std::vector<u64> w(n, 0);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (!c[j]) continue;
      for (std::size_t i = 0; i < n; ++i) w[i] = (w[i] + mulmod(c[j], basis[j][i], q)) % q;
    }
    out.push_back(std::move(w));
  }
  return out;
}

inline DenseMod restrict_to(const SpanBasis& sb, const SparseModMat& A, u64 q) {
  DenseMod R(sb.k, sb.k, q);
  std::vector<u64> y;
  for (int j = 0; j < sb.k; ++j) {
    A.apply(sb.cols[j], y);
    std::vector<u64> x = sb.coords(y); // fails if the span is not invariant
    for (int i = 0; i < sb.k; ++i) R.at(i, j) = x[i];
  }
  return R;
}

struct DenseCtx {
  const std::vector<std::pair<i64, SparseModMat>>* mats = nullptr;
  u64 q = 0;
  int cap = 0;
  Rng* rng = nullptr;
  std::vector<ModLeaf>* out = nullptr;
};

// Depth-first refinement: at each prime, split a block into the kernels of
// (R - a) over the integer roots a of its charpoly (multiplicities must
// match kernel dimensions; the operators are semisimple over Q) plus the
// complementary image of prod(x - a), then move to the next prime.
inline void dense_split_rec(DenseCtx& ctx, std::vector<std::vector<u64>> basis, std::size_t pi,
                            std::map<i64, i64> eigs) {
  const u64 q = ctx.q;
  const int k = static_cast<int>(basis.size());
  if (k == 0) return;
  if (pi == ctx.mats->size()) {
    ModLeaf L;
    L.dim = k;
    L.eigs = std::move(eigs);
    if (k == 1) {
      OMF_CHECK(L.eigs.size() == ctx.mats->size(), "one-dimensional block missing an integer eigenvalue");
      std::vector<u64> v = basis[0];
      int piv = -1;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) { piv = static_cast<int>(i); break; }
      OMF_CHECK(piv >= 0, "zero eigenvector");
      u64 inv = invmod(v[piv], q);
      for (u64& x : v) x = mulmod(x, inv, q);
      L.vec = std::move(v);
      L.pivot = piv;
    } else if (k <= ctx.cap) {
      SpanBasis sb(basis, q);
      for (auto& [p, A] : *ctx.mats) L.cps[p] = hessenberg_charpoly(restrict_to(sb, A, q), q);
    }
    ctx.out->push_back(std::move(L));
    return;
  }
  const auto& [p, A] = (*ctx.mats)[pi];
  SpanBasis sb(basis, q);
  DenseMod R = restrict_to(sb, A, q);
  std::vector<u64> chi = hessenberg_charpoly(R, q);
  std::vector<i64> roots = integer_roots(chi, p + 1, q);
  std::vector<u64> cof = chi;
  std::vector<std::pair<i64, int>> mults;
  for (i64 a : roots) {
    int mult = 0;
    while (cof.size() > 1 && eval_poly(cof, mod_of_i64(a, q), q) == 0) {
      cof = deflate(cof, mod_of_i64(a, q), q);
      ++mult;
    }
    mults.emplace_back(a, mult);
  }
  const int rest_dim = static_cast<int>(cof.size()) - 1;
  for (auto& [a, mult] : mults) {
    DenseMod shifted = R;
    u64 am = mod_of_i64(a, q);
    for (int i = 0; i < k; ++i) shifted.at(i, i) = (shifted.at(i, i) + (q - am)) % q;
    std::vector<std::vector<u64>> ker = nullspace(std::move(shifted));
    OMF_CHECK(static_cast<int>(ker.size()) == mult, "eigenspace dimension disagrees with multiplicity");
    std::map<i64, i64> e2 = eigs;
    e2[p] = a;
    dense_split_rec(ctx, lift_columns(basis, ker, q), pi + 1, std::move(e2));
  }
  if (rest_dim > 0) {
    // complement = image of prod(x - a)(R): invertible there, zero on kernels
    std::vector<u64> g{1};
    for (auto& [a, mult] : mults) g = poly_mul_linear(g, a, q);
    std::vector<std::vector<u64>> rest, red;
    std::vector<int> pivs;
    int tries = 0;
    while (static_cast<int>(rest.size()) < rest_dim) {
      OMF_CHECK(++tries <= rest_dim + 16, "complement basis collection stalled");
      std::vector<u64> v(k), w(k, 0);
      for (u64& x : v) x = ctx.rng->below(q);
      for (std::size_t d = g.size(); d-- > 0;) {
        if (d + 1 < g.size()) {
          std::vector<u64> t(k, 0);
          for (int i = 0; i < k; ++i) {
            u128 acc = 0;
            for (int j = 0; j < k; ++j) acc += (u128)R.at(i, j) * w[j] % q;
            t[i] = static_cast<u64>(acc % q);
          }
          w.swap(t);
        }
        if (g[d])
          for (int i = 0; i < k; ++i) w[i] = (w[i] + mulmod(g[d], v[i], q)) % q;
      }
      std::vector<u64> rw = w;
      for (std::size_t t = 0; t < red.size(); ++t) {
        u64 c = rw[pivs[t]];
        if (!c) continue;
        for (int i = 0; i < k; ++i) rw[i] = (rw[i] + (q - mulmod(c, red[t][i], q))) % q;
      }
      int piv = -1;
      for (int i = 0; i < k; ++i)
        if (rw[i]) { piv = i; break; }
      if (piv < 0) continue;
      u64 inv = invmod(rw[piv], q);
      for (u64& x : rw) x = mulmod(x, inv, q);
      red.push_back(std::move(rw));
      pivs.push_back(piv);
      rest.push_back(std::move(w));
    }
    dense_split_rec(ctx, lift_columns(basis, rest, q), pi + 1, eigs);
  }
}

// Large spaces: ambient minimal polynomials via Wiedemann, then a pruned
// depth-first search over integer eigenvalue tuples. Applying
// g_a = mu_p/(x - a) at T_p projects onto the T_p = a eigenspace, so the
// composite over all primes lands exactly in the simultaneous eigenspace of
// a tuple; random start vectors expose every tuple with overwhelming
// probability, and each survivor is verified by direct matvecs. Whatever
// dimension remains is reported as a single unrefined block: it contains no
// rational eigensystem, since such a system would put an integer root in
// every mu_p.
inline ModSplit sparse_split_mod(const std::vector<std::pair<i64, SparseModMat>>& mats, int n,
                                 u64 q, int cap, Rng& rng) {
  std::vector<std::vector<u64>> mus;
  std::vector<std::vector<i64>> roots;
  for (auto& [p, A] : mats) {
    const SparseModMat& ref = A;
    auto apply = [&ref](const std::vector<u64>& x, std::vector<u64>& y) { ref.apply(x, y); };
    mus.push_back(wiedemann_minpoly(apply, n, q, rng));
    roots.push_back(integer_roots(mus.back(), p + 1, q));
  }

  struct TupleSpace {
    std::vector<std::vector<u64>> vecs, red;
    std::vector<int> pivs;
  };
  std::map<std::vector<i64>, TupleSpace> found;

  auto dive = [&](auto&& self, std::size_t stage, std::vector<u64> w, std::vector<i64>& tuple,
                  bool& grew) -> void {
    if (stage == mats.size()) {
      TupleSpace& ts = found[tuple];
      std::vector<u64> rw = w;
      for (std::size_t t = 0; t < ts.red.size(); ++t) {
        u64 c = rw[ts.pivs[t]];
        if (!c) continue;
        for (int i = 0; i < n; ++i) rw[i] = (rw[i] + (q - mulmod(c, ts.red[t][i], q))) % q;
      }
      int piv = -1;
      for (int i = 0; i < n; ++i)
        if (rw[i]) { piv = i; break; }
      if (piv < 0) return;
      u64 inv = invmod(rw[piv], q);
      for (u64& x : rw) x = mulmod(x, inv, q);
      ts.red.push_back(std::move(rw));
      ts.pivs.push_back(piv);
      ts.vecs.push_back(std::move(w));
      grew = true;
      return;
    }
    const SparseModMat& A = mats[stage].second;
    auto apply = [&A](const std::vector<u64>& x, std::vector<u64>& y) { A.apply(x, y); };
    for (i64 a : roots[stage]) {
      std::vector<u64> g = deflate(mus[stage], mod_of_i64(a, q), q);
      std::vector<u64> w2 = poly_apply(apply, g, w, q);
      bool zero = true;
      for (u64 x : w2)
        if (x) { zero = false; break; }
      if (zero) continue;
      tuple.push_back(a);
      self(self, stage + 1, std::move(w2), tuple, grew);
      tuple.pop_back();
    }
  };

  int passes = 0, quiet = 0;
  while (quiet < 2 || passes < 3) {
    OMF_CHECK(++passes <= n + 32, "eigenvalue tuple search stalled");
    bool grew = false;
    std::vector<u64> v(n);
    for (u64& x : v) x = rng.below(q);
    std::vector<i64> tuple;
    dive(dive, 0, std::move(v), tuple, grew);
    quiet = grew ? 0 : quiet + 1;
  }

  // verify every collected simultaneous eigenvector by direct matvecs
  for (auto& [tuple, ts] : found)
    for (const auto& w : ts.vecs)
      for (std::size_t s = 0; s < mats.size(); ++s) {
        std::vector<u64> y;
        mats[s].second.apply(w, y);
        u64 am = mod_of_i64(tuple[s], q);
        for (int i = 0; i < n; ++i)
          OMF_CHECK(y[i] == mulmod(am, w[i], q), "tuple vector failed the eigen check");
      }

  ModSplit out;
  out.q = q;
  int used = 0;
  for (auto& [tuple, ts] : found) {
    if (ts.vecs.empty()) continue;
    ModLeaf L;
    L.dim = static_cast<int>(ts.vecs.size());
    for (std::size_t s = 0; s < mats.size(); ++s) L.eigs[mats[s].first] = tuple[s];
    if (L.dim == 1) {
      std::vector<u64> v = ts.vecs[0];
      int piv = -1;
      for (int i = 0; i < n; ++i)
        if (v[i]) { piv = i; break; }
      u64 inv = invmod(v[piv], q);
      for (u64& x : v) x = mulmod(x, inv, q);
      L.vec = std::move(v);
      L.pivot = piv;
    } else if (L.dim <= cap) {
      for (std::size_t s = 0; s < mats.size(); ++s) {
        std::vector<u64> cp{1};
        for (int t = 0; t < L.dim; ++t) cp = poly_mul_linear(cp, tuple[s], q);
        L.cps[mats[s].first] = std::move(cp);
      }
    }
    used += L.dim;
    out.leaves.push_back(std::move(L));
  }
  OMF_CHECK(used <= n, "simultaneous eigenspaces overflow the space");
  if (used < n) {
    ModLeaf rest;
    rest.dim = n - used;
    rest.refined = false;
    out.leaves.push_back(std::move(rest));
  }
  return out;
}

inline ModSplit split_mod(const std::vector<HeckeMatrix>& mats, int n, u64 q,
                          const SplitOptions& opt) {
  std::vector<std::pair<i64, SparseModMat>> sp;
  for (const HeckeMatrix& m : mats) sp.emplace_back(m.p, SparseModMat::reduce(m.a, q));
  Rng rng(opt.seed ^ q);
  if (n > opt.dense_cutoff) return sparse_split_mod(sp, n, q, opt.charpoly_cap, rng);
  ModSplit out;
  out.q = q;
  DenseCtx ctx{&sp, q, opt.charpoly_cap, &rng, &out.leaves};
  std::vector<std::vector<u64>> basis(n, std::vector<u64>(n, 0));
  for (int i = 0; i < n; ++i) basis[i][i] = 1;
  dense_split_rec(ctx, std::move(basis), 0, {});
  return out;
}

inline BigInt central_binomial(int d) {
  BigInt num = 1, den = 1;
  int k = d / 2;
  for (int i = 1; i <= k; ++i) {
    num *= d - k + i;
    den *= i;
  }
  return num / den;
}

} // namespace detail

// Splits the common invariant subspaces of commuting integer matrices at
// their rational eigenvalues. Input matrices act on the same space and
// carry their Hecke prime p (used for the eigenvalue bound |a| <= p+1).
inline std::vector<InvariantBlock> split_rational(std::vector<HeckeMatrix> mats,
                                                  SplitOptions opt = {}) {
  OMF_CHECK(!mats.empty(), "split_rational needs at least one operator");
  std::sort(mats.begin(), mats.end(), [](const HeckeMatrix& a, const HeckeMatrix& b) { return a.p < b.p; });
  const int n = static_cast<int>(mats[0].a.size());
  for (std::size_t k = 0; k < mats.size(); ++k) {
    OMF_CHECK(static_cast<int>(mats[k].a.size()) == n, "operators act on different spaces");
    for (auto& row : mats[k].a) OMF_CHECK(static_cast<int>(row.size()) == n, "operator not square");
    OMF_CHECK(k == 0 || mats[k].p != mats[k - 1].p, "duplicate Hecke prime");
  }
  if (n == 0) return {};

  // commutativity: exact for small spaces, random-vector probes mod two
  // primes for large ones
  if (n <= 256) {
    for (std::size_t s = 0; s + 1 < mats.size(); ++s)
      for (std::size_t t = s + 1; t < mats.size(); ++t)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            i128 ab = 0, ba = 0;
            for (int k = 0; k < n; ++k) {
              ab += (i128)mats[s].a[i][k] * mats[t].a[k][j];
              ba += (i128)mats[t].a[i][k] * mats[s].a[k][j];
            }
            OMF_CHECK(ab == ba, "Hecke operators do not commute");
          }
  } else {
    for (u64 q : working_primes(2)) {
      Rng rng(opt.seed ^ q ^ 0xc0111deULL);
      std::vector<std::pair<i64, SparseModMat>> sp;
      for (const HeckeMatrix& m : mats) sp.emplace_back(m.p, SparseModMat::reduce(m.a, q));
      for (int probe = 0; probe < 3; ++probe) {
        std::vector<u64> v(n), x, y;
        for (u64& e : v) e = rng.below(q);
        for (std::size_t s = 0; s + 1 < sp.size(); ++s)
          for (std::size_t t = s + 1; t < sp.size(); ++t) {
            sp[s].second.apply(v, x);
            sp[t].second.apply(x, y);
            std::vector<u64> ab = y;
            sp[t].second.apply(v, x);
            sp[s].second.apply(x, y);
            OMF_CHECK(ab == y, "Hecke operators do not commute");
          }
      }
    }
  }

  std::vector<u64> pool = working_primes(static_cast<std::size_t>(opt.max_runs) + 6);
  std::size_t cursor = 0;
  int faults = 0;
  std::vector<detail::ModSplit> agreed;
  std::string sig;
  auto next_run = [&]() -> detail::ModSplit {
    for (;;) {
      OMF_CHECK(cursor < pool.size(), "split prime budget exhausted");
      u64 q = pool[cursor++];
      if (faults >= 2) return detail::split_mod(mats, n, q, opt);
      try {
        return detail::split_mod(mats, n, q, opt);
      } catch (const std::exception&) {
        ++faults;
      }
    }
  };
  {
    std::map<std::string, std::vector<detail::ModSplit>> seen;
    while (agreed.empty()) {
      detail::ModSplit s = next_run();
      std::string key = detail::split_signature(s);
      auto& v = seen[key];
      v.push_back(std::move(s));
      if (v.size() == 2) {
        agreed = std::move(v);
        sig = key;
        break;
      }
      OMF_CHECK(seen.size() <= 3, "modular splits keep disagreeing");
    }
  }
  auto ensure_runs = [&](std::size_t t) {
    OMF_CHECK(t <= static_cast<std::size_t>(opt.max_runs), "result needs more split primes than allowed");
    while (agreed.size() < t) {
      detail::ModSplit s = next_run();
      if (detail::split_signature(s) == sig) {
        agreed.push_back(std::move(s));
      } else {
        ++faults;
        OMF_CHECK(faults <= 3, "modular splits keep disagreeing");
      }
    }
  };

  const std::size_t L = agreed[0].leaves.size();

  // enough primes to cover charpoly coefficient bounds: each 61-bit prime
  // contributes 61 bits to the CRT modulus
  {
    std::size_t need = 2;
    for (const detail::ModLeaf& leaf : agreed[0].leaves) {
      if (leaf.dim <= 1 || leaf.cps.empty()) continue;
      for (auto& [p, cp] : leaf.cps) {
        BigInt bound = 2 * detail::central_binomial(leaf.dim);
        for (int k = 0; k < leaf.dim; ++k) bound *= p + 1;
        std::size_t t = static_cast<std::size_t>(msb(bound) / 61 + 1);
        if (t > need) need = t;
      }
    }
    ensure_runs(need);
  }

  // exact eigenvectors for the one-dimensional leaves
  std::vector<std::vector<Rat>> vecs(L);
  for (std::size_t li = 0; li < L; ++li) {
    if (agreed[0].leaves[li].dim != 1) continue;
    for (;;) {
      std::vector<u64> qs;
      for (auto& run : agreed) qs.push_back(run.q);
      BigInt M = 1;
      for (u64 q : qs) M *= q;
      std::vector<Rat> v(n);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        std::vector<u64> rs;
        for (auto& run : agreed) rs.push_back(run.leaves[li].vec[i]);
        BigInt x = crt_balanced(rs, qs);
        BigInt r0 = x < 0 ? x + M : x;
        BigInt num, den;
        if (!rational_reconstruct(r0, M, num, den)) {
          ok = false;
          break;
        }
        v[i] = Rat(num, den);
      }
      if (ok) {
        vecs[li] = std::move(v);
        break;
      }
      ensure_runs(agreed.size() + 1);
    }
    // certificate: clear denominators, check T_p V = a_p V over the integers
    const std::vector<Rat>& v = vecs[li];
    BigInt D = 1;
    for (const Rat& x : v) {
      BigInt d = denominator(x);
      D = D / gcd(D, d) * d;
    }
    std::vector<BigInt> V(n);
    for (int i = 0; i < n; ++i) V[i] = numerator(v[i]) * (D / denominator(v[i]));
    for (const HeckeMatrix& m : mats) {
      i64 a = agreed[0].leaves[li].eigs.at(m.p);
      for (int i = 0; i < n; ++i) {
        BigInt acc = 0;
        for (int j = 0; j < n; ++j)
          if (m.a[i][j] != 0) acc += m.a[i][j] * V[j];
        OMF_CHECK(acc == a * V[i], "eigenvector failed exact verification");
      }
    }
  }

  // lift charpolys and build the blocks
  std::vector<InvariantBlock> out;
  int sumdim = 0;
  for (std::size_t li = 0; li < L; ++li) {
    const detail::ModLeaf& leaf = agreed[0].leaves[li];
    InvariantBlock b;
    b.dimension = leaf.dim;
    b.refined = leaf.refined;
    if (leaf.dim == 1) {
      for (auto& [p, a] : leaf.eigs) b.eigenvalues[p] = Rat(a);
      b.eigenvector = std::move(vecs[li]);
    } else if (!leaf.cps.empty()) {
      for (auto& [p, cp0] : leaf.cps) {
        std::vector<BigInt> cp(leaf.dim + 1);
        std::vector<u64> qs;
        for (auto& run : agreed) qs.push_back(run.q);
        for (int d = 0; d <= leaf.dim; ++d) {
          std::vector<u64> rs;
          for (auto& run : agreed) rs.push_back(run.leaves[li].cps.at(p)[d]);
          cp[d] = crt_balanced(rs, qs);
        }
        OMF_CHECK(cp[leaf.dim] == 1, "block charpoly is not monic");
        // a lifted integer root here would mean a missed rational split
        if (!leaf.eigs.count(p))
          for (i64 a = -(p + 1); a <= p + 1; ++a) {
            BigInt val = 0;
            for (int d = leaf.dim; d >= 0; --d) val = val * a + cp[d];
            OMF_CHECK(val != 0, "missed a rational eigenvalue inside a block");
          }
        b.charpolys[p] = std::move(cp);
      }
    }
    sumdim += b.dimension;
    out.push_back(std::move(b));
  }
  OMF_CHECK(sumdim == n, "block dimensions do not sum to the space dimension");

  std::stable_sort(out.begin(), out.end(), [](const InvariantBlock& a, const InvariantBlock& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    std::vector<std::pair<i64, Rat>> ea(a.eigenvalues.begin(), a.eigenvalues.end());
    std::vector<std::pair<i64, Rat>> eb(b.eigenvalues.begin(), b.eigenvalues.end());
    return ea < eb;
  });
  return out;
}

// ---- eigensystem reporting -----------------------------------------------

struct EigenSystem {
  i64 character = 1;
  int dimension = 1;
  int field_degree = 1; // 1 for rational systems, the block dimension otherwise
  std::map<i64, Rat> eigenvalues;                     // rational systems only
  std::vector<Rat> eigenvector;                       // supported-class coordinates
  std::map<i64, std::vector<BigInt>> block_charpolys; // ascending coefficients, when lifted
  std::string space;                                  // classical home of these forms
};

namespace detail {

// Full-space split, then the Eisenstein line (the all-ones function, with
// T_p = p+1 at the trivial character) is located and removed; everything
// else is cuspidal.
inline std::vector<EigenSystem> systems_for_character(const Genus& gen, const CharacterSpace& cs,
                                                      const std::vector<HeckeMatrix>& mats,
                                                      const SplitOptions& opt) {
  std::vector<EigenSystem> out;
  const std::size_t n = cs.supported.size();
  if (n == 0) return out;
  std::vector<InvariantBlock> blocks = split_rational(mats, opt);
  const std::string label = expected_decomposition(gen.level, gen.disc, cs.r).label();

  std::optional<std::size_t> eis;
  if (cs.r == 1) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const InvariantBlock& blk = blocks[b];
      if (blk.dimension != 1) continue;
      bool ones = true;
      for (const Rat& x : blk.eigenvector)
        if (x != 1) { ones = false; break; }
      if (!ones) continue;
      for (const HeckeMatrix& m : mats)
        OMF_CHECK(blk.eigenvalues.at(m.p) == Rat(m.p + 1),
                  "constant eigenvector without the Eisenstein eigenvalues");
      OMF_CHECK(!eis, "two Eisenstein lines in one genus");
      eis = b;
    }
    OMF_CHECK(eis.has_value(), "Eisenstein line not separated; supply more primes");
  }

  int cuspdim = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (eis && b == *eis) continue;
    InvariantBlock& blk = blocks[b];
    EigenSystem e;
    e.character = cs.r;
    e.dimension = blk.dimension;
    e.field_degree = blk.dimension == 1 ? 1 : blk.dimension;
    e.eigenvalues = std::move(blk.eigenvalues);
    e.eigenvector = std::move(blk.eigenvector);
    e.block_charpolys = std::move(blk.charpolys);
    e.space = label;
    if (e.dimension == 1)
      for (auto& [p, a] : e.eigenvalues) {
        BigInt num = numerator(a);
        if (num * num > 4 * p)
          std::cerr << "note: |a_" << p << "| exceeds 2*sqrt(" << p << ") for character " << cs.r
                    << "\n";
      }
    cuspdim += e.dimension;
    out.push_back(std::move(e));
  }
  OMF_CHECK(cuspdim == static_cast<int>(n) - (cs.r == 1 ? 1 : 0),
            "cuspidal dimensions do not add up");
  return out;
}

} // namespace detail

// Character space -> Hecke matrices -> rational split -> labeled cuspidal
// systems, ordered by dimension then eigenvalue list.
inline std::vector<EigenSystem> eigen_systems(const Genus& gen, i64 r, std::vector<i64> primes,
                                              int threads = 1, SplitOptions opt = {}) {
  OMF_CHECK(!primes.empty(), "eigen_systems needs at least one prime");
  std::sort(primes.begin(), primes.end());
  for (std::size_t k = 0; k < primes.size(); ++k) {
    OMF_CHECK(k == 0 || primes[k] != primes[k - 1], "duplicate Hecke prime");
    OMF_CHECK(gen.level % primes[k] != 0, "Hecke primes must be coprime to the level");
  }
  CharacterSpace cs = supported_classes(gen, r);
  std::vector<HeckeMatrix> mats;
  for (i64 p : primes) mats.push_back(hecke_matrix(cs, p, threads));
  return detail::systems_for_character(gen, cs, mats, opt);
}

// One shared neighbor enumeration per prime serves every character.
inline std::map<i64, std::vector<EigenSystem>> all_eigen_systems(const Genus& gen,
                                                                 std::vector<i64> primes,
                                                                 int threads = 1,
                                                                 SplitOptions opt = {}) {
  OMF_CHECK(!primes.empty(), "eigen_systems needs at least one prime");
  std::sort(primes.begin(), primes.end());
  for (std::size_t k = 0; k < primes.size(); ++k) {
    OMF_CHECK(k == 0 || primes[k] != primes[k - 1], "duplicate Hecke prime");
    OMF_CHECK(gen.level % primes[k] != 0, "Hecke primes must be coprime to the level");
  }
  std::vector<std::vector<u32>> masks = stabilizer_masks(gen);
  std::vector<NeighborTable> tables;
  for (i64 p : primes) tables.push_back(build_neighbor_table(gen, p, threads));
  std::map<i64, std::vector<EigenSystem>> out;
  for (i64 r : divisors(gen.level)) {
    CharacterSpace cs = supported_classes(gen, masks, r);
    std::vector<HeckeMatrix> mats;
    for (const NeighborTable& t : tables) mats.push_back(assemble_hecke(cs, t));
    out[r] = detail::systems_for_character(gen, cs, mats, opt);
  }
  return out;
}

} // namespace omf
