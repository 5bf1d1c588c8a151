#pragma once

// Spinor norm, radical character, the +-1 characters nu_r, and the
// Atkin-Lehner multiplicity bookkeeping.
//
// For a proper isometry sigma of a definite ternary space, the spinor norm
// is the square class of 1 + tr(sigma) when tr != -1. At tr = -1 (a
// rotation by pi) sigma = tau_u tau_v with orthogonal u, v, so theta =
// Q(u)Q(v) = disc(Q) * Q(w) mod squares, where w = e + sigma(e) spans the
// rotation axis; the disc factor is what keeps the two branches consistent
// under nrd on the even Clifford algebra. Only the valuation parities at
// primes dividing the level are ever consumed downstream, so square
// classes keep an unfactored residual part.

#include "omf/forms.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace omf {

// sigma = num / den with den > 0; columns are images of basis vectors
struct Isometry {
  Mat3<i128> num;
  i128 den = 1;
};

inline void reduce_isometry(Isometry& s) {
  i128 g = s.den;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g = igcd128(g, s.num[r][c]);
  OMF_CHECK(g > 0, "reduce_isometry: zero matrix");
  s.den /= g;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) s.num[r][c] /= g;
}

// Full validation: sigma^T T0 sigma = T0 and det sigma = +1, in exact big
// arithmetic. Construction sites inside the Hecke loop satisfy this by
// construction and skip it; tests and user-facing entry points verify.
inline Isometry make_isometry(const Mat3<i64>& T0, const Mat3<i128>& num, i128 den,
                              bool verify = true) {
  OMF_CHECK(den != 0, "make_isometry: zero denominator");
  Isometry s{num, den};
  if (s.den < 0) {
    s.den = -s.den;
    s.num = -s.num;
  }
  reduce_isometry(s);
  if (verify) {
    Mat3<BigInt> nb;
    Mat3<BigInt> t0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        nb[r][c] = BigInt(to_string_i128(s.num[r][c]));
        t0[r][c] = T0[r][c];
      }
    BigInt d(to_string_i128(s.den));
    Mat3<BigInt> lhs = nb.transpose() * t0 * nb;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        OMF_CHECK(lhs[r][c] == t0[r][c] * d * d, "make_isometry: not an isometry");
    OMF_CHECK(nb.det() == d * d * d, "make_isometry: not special (det != +1)");
  }
  return s;
}

namespace detail {

inline int val_parity_i128(i128 x, i64 p) {
  OMF_CHECK(x != 0, "valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v & 1;
}

inline int val_parity_big(BigInt x, i64 p) {
  OMF_CHECK(x != 0, "valuation of zero");
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v & 1;
}

// disc(Q) * Q(w) for the first nonzero column w of (num + den I), as a
// square-class representative (the den^2 denominator is a square).
inline BigInt axis_q_value(const Mat3<i64>& T0, const Isometry& s) {
  BigInt disc = discriminant(form_of_gram(T0));
  for (int c = 0; c < 3; ++c) {
    Vec3<i128> w{s.num[0][c], s.num[1][c], s.num[2][c]};
    w[c] += s.den;
    if (w.is_zero()) continue;
    bool small = true;
    for (int r = 0; r < 3; ++r)
      if (w[r] > (i128(1) << 35) || w[r] < -(i128(1) << 35)) small = false;
    if (small) {
      i128 t = pair_in(mat_cast<i128>(T0), w, w);
      OMF_CHECK(t > 0 && t % 2 == 0, "axis value must be positive even");
      return disc * BigInt(to_string_i128(t / 2));
    }
    Vec3<BigInt> wb;
    Mat3<BigInt> t0;
    for (int r = 0; r < 3; ++r) {
      wb[r] = BigInt(to_string_i128(w[r]));
      for (int cc = 0; cc < 3; ++cc) t0[r][cc] = T0[r][cc];
    }
    BigInt t = pair_in(t0, wb, wb);
    OMF_CHECK(t > 0 && t % 2 == 0, "axis value must be positive even");
    return disc * (t / 2);
  }
  OMF_CHECK(false, "1 + sigma = 0: sigma = -I is not special");
  return BigInt(0);
}

} // namespace detail

// Square class of a nonzero rational: valuation parities at a tracked prime
// set plus an unfactored residual. rep() extracts the full squarefree
// representative by trial division and is intended for test-scale values.
struct SquareClass {
  BigInt raw;              // representative value, sign preserved
  u32 mask = 0;            // bit k: odd valuation at primes[k]
  std::vector<i64> primes; // tracked primes, ascending

  BigInt rep() const {
    OMF_CHECK(raw != 0, "square class of zero");
    BigInt x = raw < 0 ? BigInt(-raw) : raw;
    BigInt out = raw < 0 ? -1 : 1;
    for (i64 p = 2; BigInt(p) * p <= x && p < 2000000; p = static_cast<i64>(next_prime(p))) {
      int v = 0;
      while (x % p == 0) {
        x /= p;
        ++v;
      }
      if (v & 1) out *= p;
    }
    OMF_CHECK(BigInt(2000000) * 2000000 > x, "square class value too large to reduce");
    out *= x; // leftover is 1 or a prime
    return out;
  }
};

inline SquareClass square_class(const BigInt& value, const std::vector<i64>& tracked) {
  OMF_CHECK(value != 0, "square class of zero");
  SquareClass sc;
  sc.raw = value;
  sc.primes = tracked;
  for (std::size_t k = 0; k < tracked.size(); ++k)
    sc.mask |= static_cast<u32>(detail::val_parity_big(value, tracked[k])) << k;
  return sc;
}

// Valuation-parity bitmask of the spinor norm theta(sigma) over the tracked
// primes; bit k corresponds to primes[k]. This is the hot-path form.
inline u32 theta_mask(const Mat3<i64>& T0, const Isometry& s, const std::vector<i64>& primes) {
  i128 trn = s.num[0][0] + s.num[1][1] + s.num[2][2];
  u32 m = 0;
  if (trn != -s.den) {
    // theta = (den + trn)/den; parity of v_p(num) + v_p(den)
    i128 tn = s.den + trn;
    OMF_CHECK(tn > 0, "1 + trace must be positive for a definite space");
    for (std::size_t k = 0; k < primes.size(); ++k) {
      int par = detail::val_parity_i128(tn, primes[k]) ^ detail::val_parity_i128(s.den, primes[k]);
      m |= static_cast<u32>(par) << k;
    }
    return m;
  }
  BigInt q = detail::axis_q_value(T0, s);
  for (std::size_t k = 0; k < primes.size(); ++k)
    m |= static_cast<u32>(detail::val_parity_big(q, primes[k])) << k;
  return m;
}

inline SquareClass spinor_norm(const Mat3<i64>& T0, const Isometry& s,
                               const std::vector<i64>& tracked) {
  i128 trn = s.num[0][0] + s.num[1][1] + s.num[2][2];
  if (trn != -s.den) {
    BigInt n(to_string_i128(s.den + trn));
    BigInt d(to_string_i128(s.den));
    OMF_CHECK(n > 0, "1 + trace must be positive for a definite space");
    return square_class(n * d, tracked);
  }
  return square_class(detail::axis_q_value(T0, s), tracked);
}

// nu_r(sigma) = prod_{p | r} (-1)^{v_p(theta(sigma))}
inline int nu_r(const Mat3<i64>& T0, const Isometry& s, const std::vector<i64>& level_primes,
                i64 r) {
  u32 rmask = 0;
  for (std::size_t k = 0; k < level_primes.size(); ++k)
    if (r % level_primes[k] == 0) rmask |= u32(1) << k;
  u32 tm = theta_mask(T0, s, level_primes);
  return (__builtin_popcount(tm & rmask) & 1) ? -1 : 1;
}

// The sign s with U z = s z mod p on the radical generator z; U must be an
// integer isometry of gram(f) (a lattice stabilizer element).
inline int radical_character(const TernaryForm& f, const Mat3<i64>& U, i64 p) {
  Vec3<i64> z = radical_vector(f, p);
  Vec3<i64> uz = U * z;
  auto md = [&](i64 t) { i64 m = t % p; return m < 0 ? m + p : m; };
  bool plus = true, minus = true;
  for (int i = 0; i < 3; ++i) {
    if (md(uz[i] - z[i]) != 0) plus = false;
    if (md(uz[i] + z[i]) != 0) minus = false;
  }
  OMF_CHECK(plus != minus, "radical image is not +-z mod p");
  return plus ? 1 : -1;
}

// ---- Atkin-Lehner multiplicity bookkeeping ----------------------------

using SignVector = std::map<i64, int>; // p | N -> +-1

// alpha(M) for squarefree N: multiplicative with alpha(p) = 2 if p | N/D,
// 0 if p | D; alpha(1) = 1.
inline i64 alpha(i64 N, i64 D, i64 M) {
  OMF_CHECK(M > 0 && N % M == 0, "alpha: M must divide N");
  i64 out = 1;
  for (i64 p : prime_factors(M)) out *= (D % p == 0) ? 0 : 2;
  return out;
}

// The four-case refinement: for e = v_p(M) and squarefree N,
//   p | N/D, eps_p = +1 -> ceil((1+e)/2);  p | N/D, eps_p = -1 -> floor((1+e)/2)
//   p | D, e even, eps_p = +1 -> 1;        p | D otherwise -> 0.
inline i64 alpha_eps(i64 N, i64 D, i64 M, const SignVector& eps) {
  OMF_CHECK(M > 0 && N % M == 0, "alpha_eps: M must divide N");
  i64 out = 1;
  for (i64 p : prime_factors(N)) {
    auto it = eps.find(p);
    OMF_CHECK(it != eps.end() && (it->second == 1 || it->second == -1),
              "alpha_eps: sign vector must cover every p | N");
    i64 e = (M % p == 0) ? 1 : 0;
    i64 f;
    if (D % p != 0) f = (it->second == 1) ? (1 + e + 1) / 2 : (1 + e) / 2;
    else f = (e == 0 && it->second == 1) ? 1 : 0;
    out *= f;
  }
  return out;
}

// Output labeling for the character-r eigenspace: the cuspidal part matches
// the D-new subspace of level N with Atkin-Lehner signs delta * eps_r,
// where delta_p = -1 iff p | D and (eps_r)_p = -1 iff p | r.
struct DecompositionReport {
  i64 level = 0;
  i64 disc = 0;
  i64 character = 1;
  SignVector signs;                                    // w_p = -1 iff exactly one of p|D, p|r
  std::vector<std::pair<i64, i64>> old_multiplicities; // (M, copies of S2_new(M)^{signs|M})

  std::string label() const {
    std::string s = "S2^{" + std::to_string(disc) + "-new}(Gamma0(" + std::to_string(level) +
                    ")) with";
    for (auto& [p, w] : signs)
      s += " w_" + std::to_string(p) + " = " + (w > 0 ? "+1" : "-1") + ",";
    s.pop_back();
    return s;
  }
};

inline DecompositionReport expected_decomposition(i64 N, i64 D, i64 r) {
  OMF_CHECK(N % r == 0 && is_squarefree(r), "character divisor must be squarefree and divide N");
  DecompositionReport rep;
  rep.level = N;
  rep.disc = D;
  rep.character = r;
  for (i64 p : prime_factors(N)) {
    int dp = (D % p == 0) ? -1 : 1;
    int ep = (r % p == 0) ? -1 : 1;
    rep.signs[p] = dp * ep;
  }
  // divisors of N ascending
  std::vector<i64> divs{1};
  for (i64 p : prime_factors(N)) {
    std::size_t n = divs.size();
    for (std::size_t i = 0; i < n; ++i) divs.push_back(divs[i] * p);
  }
  std::sort(divs.begin(), divs.end());
  // A level-M newform block survives only if D | M (ramified primes admit no
  // oldforms in the D-new space), and then each split prime p | N/M
  // contributes the balanced factor alpha^{w_p}(p) = 1 regardless of sign.
  // Signs at p | M are pinned to signs|M, so for squarefree N every
  // multiplicity is 0 or 1: the decomposition is multiplicity-free.
  for (i64 M : divs) rep.old_multiplicities.emplace_back(M, M % D == 0 ? 1 : 0);
  return rep;
}

} // namespace omf
