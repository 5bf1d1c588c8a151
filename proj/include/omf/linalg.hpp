#pragma once

// Modular linear algebra supporting the Hecke-module splitting: dense
// Gaussian elimination and Hessenberg characteristic polynomials over
// word-size prime fields, Wiedemann minimal polynomials for sparse
// operators, and balanced CRT lifting back to the integers.

#include "omf/base.hpp"

#include <functional>
#include <vector>

namespace omf {

// Deterministic ascending ~61-bit primes, optionally avoiding divisors of
// `avoid` (so reductions of fixed integer data stay faithful).
inline std::vector<u64> working_primes(std::size_t count, const BigInt& avoid = 0) {
  std::vector<u64> out;
  i64 p = (i64(1) << 61) + 20;
  while (out.size() < count) {
    p = next_prime(p);
    if (avoid != 0 && avoid % p == 0) continue;
    out.push_back(static_cast<u64>(p));
  }
  return out;
}

inline u64 mod_of_i64(i64 x, u64 q) {
  i64 m = x % static_cast<i64>(q);
  return static_cast<u64>(m < 0 ? m + static_cast<i64>(q) : m);
}

// ---- sparse operators --------------------------------------------------

struct SparseModMat {
  int n = 0;
  u64 q = 0;
  std::vector<std::vector<std::pair<int, u64>>> rows;

  static SparseModMat reduce(const std::vector<std::vector<i64>>& m, u64 q) {
    SparseModMat s;
    s.n = static_cast<int>(m.size());
    s.q = q;
    s.rows.resize(s.n);
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j)
        if (m[i][j] != 0) s.rows[i].emplace_back(j, mod_of_i64(m[i][j], q));
    return s;
  }

  void apply(const std::vector<u64>& x, std::vector<u64>& y) const {
    y.assign(n, 0);
    for (int i = 0; i < n; ++i) {
      u128 acc = 0;
      for (auto& [j, v] : rows[i]) {
        acc += (u128)v * x[j];
        if (acc >> 126) acc %= q; // keep headroom; entries < 2^62
      }
      y[i] = static_cast<u64>(acc % q);
    }
  }
};

// ---- dense matrices mod q ----------------------------------------------

struct DenseMod {
  int rows = 0, cols = 0;
  u64 q = 0;
  std::vector<u64> a;

  DenseMod() = default;
  DenseMod(int r, int c, u64 qq) : rows(r), cols(c), q(qq), a(std::size_t(r) * c, 0) {}
  u64& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  u64 at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  static DenseMod identity(int n, u64 q) {
    DenseMod m(n, n, q);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static DenseMod reduce(const std::vector<std::vector<i64>>& v, u64 q) {
    DenseMod m(static_cast<int>(v.size()), v.empty() ? 0 : static_cast<int>(v[0].size()), q);
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = mod_of_i64(v[i][j], q);
    return m;
  }
};

inline DenseMod matmul(const DenseMod& A, const DenseMod& B) {
  OMF_CHECK(A.cols == B.rows && A.q == B.q, "matmul shape");
  DenseMod C(A.rows, B.cols, A.q);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      u64 v = A.at(i, k);
      if (!v) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = (C.at(i, j) + (u128)v * B.at(k, j) % A.q) % A.q;
    }
  return C;
}

// In-place reduced row echelon; returns pivot column indices.
inline std::vector<int> rref(DenseMod& M) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int sel = -1;
    for (int i = r; i < M.rows; ++i)
      if (M.at(i, c)) { sel = i; break; }
    if (sel < 0) continue;
    for (int j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(r, j));
    u64 inv = invmod(M.at(r, c), M.q);
    for (int j = c; j < M.cols; ++j) M.at(r, j) = mulmod(M.at(r, j), inv, M.q);
    for (int i = 0; i < M.rows; ++i) {
      if (i == r || !M.at(i, c)) continue;
      u64 f = M.at(i, c);
      for (int j = c; j < M.cols; ++j)
        M.at(i, j) = (M.at(i, j) + (M.q - mulmod(f, M.at(r, j), M.q))) % M.q;
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline u64 det_mod(DenseMod M) {
  OMF_CHECK(M.rows == M.cols, "det of non-square matrix");
  u64 q = M.q, det = 1;
  for (int c = 0; c < M.cols; ++c) {
    int sel = -1;
    for (int i = c; i < M.rows; ++i)
      if (M.at(i, c)) { sel = i; break; }
    if (sel < 0) return 0;
    if (sel != c) {
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(c, j));
      det = q - det;
    }
    det = mulmod(det, M.at(c, c), q);
    u64 inv = invmod(M.at(c, c), q);
    for (int i = c + 1; i < M.rows; ++i) {
      if (!M.at(i, c)) continue;
      u64 f = mulmod(M.at(i, c), inv, q);
      for (int j = c; j < M.cols; ++j)
        M.at(i, j) = (M.at(i, j) + (q - mulmod(f, M.at(c, j), q))) % q;
    }
  }
  return det;
}

// Kernel basis (as columns) of a square matrix.
inline std::vector<std::vector<u64>> nullspace(DenseMod M) {
  int n = M.cols;
  std::vector<int> piv = rref(M);
  std::vector<int> pivot_of_col(n, -1);
  for (std::size_t k = 0; k < piv.size(); ++k) pivot_of_col[piv[k]] = static_cast<int>(k);
  std::vector<std::vector<u64>> out;
  for (int c = 0; c < n; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    std::vector<u64> v(n, 0);
    v[c] = 1;
    for (int k = 0; k < n; ++k)
      if (pivot_of_col[k] >= 0) {
        u64 x = M.at(pivot_of_col[k], c);
        v[k] = x ? M.q - x : 0;
      }
    out.push_back(std::move(v));
  }
  return out;
}

// Coordinate solver for a fixed independent column family B: picks pivot
// rows once, inverts the k x k subblock, and answers coords(y) with an
// exact consistency check that y really lies in span(B).
struct SpanBasis {
  int n = 0, k = 0;
  u64 q = 0;
  std::vector<std::vector<u64>> cols;
  std::vector<int> pivot_rows;
  DenseMod inv;

  explicit SpanBasis(std::vector<std::vector<u64>> columns, u64 qq) {
    cols = std::move(columns);
    q = qq;
    k = static_cast<int>(cols.size());
    n = k ? static_cast<int>(cols[0].size()) : 0;
    DenseMod M(n, k, q);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) M.at(i, j) = cols[j][i];
    DenseMod R = M;
    std::vector<int> piv = rref(R);
    OMF_CHECK(static_cast<int>(piv.size()) == k, "SpanBasis: dependent columns");
    // recover pivot rows of the original matrix by re-eliminating
    pivot_rows.clear();
    DenseMod W = M;
    std::vector<bool> used(n, false);
    for (int c = 0; c < k; ++c) {
      int sel = -1;
      for (int i = 0; i < n; ++i)
        if (!used[i] && W.at(i, c)) { sel = i; break; }
      OMF_CHECK(sel >= 0, "SpanBasis: rank drop");
      used[sel] = true;
      pivot_rows.push_back(sel);
      u64 invp = invmod(W.at(sel, c), q);
      for (int i = 0; i < n; ++i) {
        if (i == sel || !W.at(i, c)) continue;
        u64 f = mulmod(W.at(i, c), invp, q);
        for (int j = c; j < k; ++j)
          W.at(i, j) = (W.at(i, j) + (q - mulmod(f, W.at(sel, j), q))) % q;
      }
    }
    DenseMod S(k, k, q);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) S.at(i, j) = M.at(pivot_rows[i], j);
    // invert S via [S | I] elimination
    DenseMod AI(k, 2 * k, q);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) AI.at(i, j) = S.at(i, j);
      AI.at(i, k + i) = 1;
    }
    std::vector<int> p2 = rref(AI);
    OMF_CHECK(static_cast<int>(p2.size()) == k && p2[k - 1] == k - 1, "SpanBasis: singular block");
    inv = DenseMod(k, k, q);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) inv.at(i, j) = AI.at(i, k + j);
  }

  std::vector<u64> coords(const std::vector<u64>& y) const {
    std::vector<u64> x(k, 0);
    for (int i = 0; i < k; ++i) {
      u128 acc = 0;
      for (int j = 0; j < k; ++j) acc += (u128)inv.at(i, j) * y[pivot_rows[j]] % q;
      x[i] = static_cast<u64>(acc % q);
    }
    for (int i = 0; i < n; ++i) {
      u128 acc = 0;
      for (int j = 0; j < k; ++j) acc += (u128)cols[j][i] * x[j] % q;
      OMF_CHECK(static_cast<u64>(acc % q) == y[i], "coords: vector left the span");
    }
    return x;
  }
};

// ---- polynomials mod q (ascending coefficients, normalized monic) ------

inline u64 eval_poly(const std::vector<u64>& f, u64 x, u64 q) {
  u64 r = 0;
  for (std::size_t k = f.size(); k-- > 0;) r = (mulmod(r, x, q) + f[k]) % q;
  return r;
}

// divide f by (x - a); remainder must vanish
inline std::vector<u64> deflate(const std::vector<u64>& f, u64 a, u64 q) {
  OMF_CHECK(f.size() >= 2, "deflate: degree too small");
  std::vector<u64> g(f.size() - 1, 0);
  u64 carry = 0;
  for (std::size_t k = f.size(); k-- > 1;) {
    carry = (mulmod(carry, a, q) + f[k]) % q;
    g[k - 1] = carry;
  }
  u64 rem = (mulmod(carry, a, q) + f[0]) % q;
  OMF_CHECK(rem == 0, "deflate: not a root");
  return g;
}

// Minimal generator of a linear recurrence (Berlekamp-Massey), monic.
inline std::vector<u64> berlekamp_massey(const std::vector<u64>& s, u64 q) {
  std::vector<u64> C{1}, B{1};
  int L = 0, m = 1;
  u64 b = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    u128 d = s[i];
    for (int k = 1; k <= L; ++k)
      d += (u128)C[k] * s[i - k] % q;
    u64 delta = static_cast<u64>(d % q);
    if (delta == 0) {
      ++m;
      continue;
    }
    std::vector<u64> T = C;
    u64 coef = mulmod(delta, invmod(b, q), q);
    if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
    for (std::size_t k = 0; k < B.size(); ++k)
      C[k + m] = (C[k + m] + (q - mulmod(coef, B[k], q))) % q;
    if (2 * L <= static_cast<int>(i)) {
      L = static_cast<int>(i) + 1 - L;
      B = T;
      b = delta;
      m = 1;
    } else {
      ++m;
    }
  }
  // connection poly C(x) = 1 + c_1 x + ... ; minimal polynomial is its
  // reversal of degree L, normalized monic
  std::vector<u64> mu(L + 1, 0);
  for (int k = 0; k <= L; ++k) mu[L - k] = k < static_cast<int>(C.size()) ? C[k] : 0;
  OMF_CHECK(mu[L] == 1, "berlekamp_massey: non-monic output");
  return mu;
}

// g(A) v by Horner, using the caller's matvec.
inline std::vector<u64> poly_apply(const std::function<void(const std::vector<u64>&, std::vector<u64>&)>& apply,
                                   const std::vector<u64>& g, const std::vector<u64>& v, u64 q) {
  std::size_t n = v.size();
  std::vector<u64> w(n, 0), t;
  for (std::size_t k = g.size(); k-- > 0;) {
    if (k + 1 < g.size()) {
      apply(w, t);
      w.swap(t);
    }
    if (g[k])
      for (std::size_t i = 0; i < n; ++i) w[i] = (w[i] + mulmod(g[k], v[i], q)) % q;
  }
  return w;
}

// Minimal polynomial of a sparse operator: Berlekamp-Massey on projected
// Krylov sequences, lcm-free variant with explicit verification mu(A)w = 0
// on fresh random vectors; retries with new projections on failure.
inline std::vector<u64> wiedemann_minpoly(
    const std::function<void(const std::vector<u64>&, std::vector<u64>&)>& apply, int n, u64 q,
    Rng& rng) {
  if (n == 0) return {1};
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<u64> u(n), v(n);
    for (auto& x : u) x = rng.below(q);
    for (auto& x : v) x = rng.below(q);
    std::vector<u64> s(2 * n);
    std::vector<u64> cur = v, nxt;
    for (int k = 0; k < 2 * n; ++k) {
      u128 acc = 0;
      for (int i = 0; i < n; ++i) acc += (u128)u[i] * cur[i] % q;
      s[k] = static_cast<u64>(acc % q);
      if (k + 1 < 2 * n) {
        apply(cur, nxt);
        cur.swap(nxt);
      }
    }
    std::vector<u64> mu = berlekamp_massey(s, q);
    bool good = true;
    for (int check = 0; check < 2 && good; ++check) {
      std::vector<u64> w(n);
      for (auto& x : w) x = rng.below(q);
      std::vector<u64> z = poly_apply(apply, mu, w, q);
      for (u64 x : z)
        if (x) { good = false; break; }
    }
    if (good) return mu;
  }
  OMF_CHECK(false, "wiedemann: no stable minimal polynomial");
  return {};
}

// Characteristic polynomial mod q via Hessenberg reduction, O(n^3).
inline std::vector<u64> hessenberg_charpoly(DenseMod M, u64 q) {
  int n = M.rows;
  OMF_CHECK(M.cols == n, "charpoly needs square input");
  for (int c = 0; c + 2 < n; ++c) {
    int sel = -1;
    for (int i = c + 1; i < n; ++i)
      if (M.at(i, c)) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != c + 1) {
      for (int j = 0; j < n; ++j) std::swap(M.at(sel, j), M.at(c + 1, j));
      for (int i = 0; i < n; ++i) std::swap(M.at(i, sel), M.at(i, c + 1));
    }
    u64 inv = invmod(M.at(c + 1, c), q);
    for (int i = c + 2; i < n; ++i) {
      if (!M.at(i, c)) continue;
      u64 f = mulmod(M.at(i, c), inv, q);
      for (int j = 0; j < n; ++j)
        M.at(i, j) = (M.at(i, j) + (q - mulmod(f, M.at(c + 1, j), q))) % q;
      for (int j = 0; j < n; ++j)
        M.at(j, c + 1) = (M.at(j, c + 1) + mulmod(f, M.at(j, i), q)) % q;
    }
  }
  // p_0 = 1; p_k = char poly of leading k x k block, expanded along last row
  std::vector<std::vector<u64>> p(n + 1);
  p[0] = {1};
  for (int k = 1; k <= n; ++k) {
    p[k].assign(k + 1, 0);
    // (x - M[k-1][k-1]) * p[k-1]
    for (int d = 0; d < k; ++d) {
      p[k][d + 1] = (p[k][d + 1] + p[k - 1][d]) % q;
      p[k][d] = (p[k][d] + (q - mulmod(M.at(k - 1, k - 1), p[k - 1][d], q))) % q;
    }
    u64 beta = 1;
    for (int m = 1; m < k; ++m) {
      beta = mulmod(beta, M.at(k - m, k - m - 1), q);
      if (!beta) break;
      u64 coef = mulmod(beta, M.at(k - m - 1, k - 1), q);
      if (!coef) continue;
      for (int d = 0; d < k - m; ++d)
        p[k][d] = (p[k][d] + (q - mulmod(coef, p[k - m - 1][d], q))) % q;
    }
  }
  return p[n];
}

// ---- CRT ---------------------------------------------------------------

// Balanced integer from residues mod distinct primes: |result| < prod/2.
inline BigInt crt_balanced(const std::vector<u64>& residues, const std::vector<u64>& primes) {
  OMF_CHECK(residues.size() == primes.size() && !residues.empty(), "crt input mismatch");
  BigInt x = residues[0] % primes[0];
  BigInt mod = primes[0];
  for (std::size_t k = 1; k < primes.size(); ++k) {
    u64 q = primes[k];
    u64 xm = static_cast<u64>(x % q);
    u64 diff = (residues[k] % q + q - xm) % q;
    u64 minv = invmod(static_cast<u64>(mod % q), q);
    x += mod * mulmod(diff, minv, q);
    mod *= q;
  }
  if (x > mod / 2) x -= mod;
  return x;
}

} // namespace omf
