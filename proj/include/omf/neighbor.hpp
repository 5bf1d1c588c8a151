#pragma once

// Kneser p-neighbors of a ternary lattice, tracked inside the quadratic
// space of a fixed seed form.
//
// A lattice is stored as num/den: columns of num are basis vectors in seed
// coordinates, scaled by 1/den, det num > 0. For an isotropic line [x] mod p
// (Q(x) = 0 mod p, x not in pL) the neighbor is
//   P = Z(v/p) + { w in L : T(v,w) = 0 mod p },
// where v lifts x to Q(v) = 0 mod p^2. There are exactly p+1 isotropic
// lines when p does not divide the half-discriminant (the conic mod p is
// smooth; for p = 2 smoothness is nondegeneracy of Q mod 2, which holds as
// the half-discriminant is odd).

#include "omf/forms.hpp"
#include "omf/reduce.hpp"

#include <vector>

namespace omf {

struct EmbeddedLattice {
  Mat3<i64> num;  // basis columns in seed coordinates, det > 0
  i64 den = 1;    // actual basis is num/den
  Mat3<i64> gram; // (num^T T0 num) / den^2
};

inline Mat3<i64> gram_in_seed(const Mat3<i64>& T0, const Mat3<i64>& num, i64 den) {
  Mat3<i128> g = mat_cast<i128>(num).transpose() * mat_cast<i128>(T0) * mat_cast<i128>(num);
  i128 d2 = i128(den) * den;
  Mat3<i64> out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      OMF_CHECK(g[r][c] % d2 == 0, "lattice not integral for the seed form");
      i128 q = g[r][c] / d2;
      OMF_CHECK(q > std::numeric_limits<i64>::min() && q < std::numeric_limits<i64>::max(),
                "gram entry overflow");
      out[r][c] = static_cast<i64>(q);
    }
  for (int r = 0; r < 3; ++r) OMF_CHECK(out[r][r] % 2 == 0, "gram diagonal must be even");
  return out;
}

inline EmbeddedLattice seed_lattice(const TernaryForm& f) {
  Mat3<i64> T0 = gram(f);
  return EmbeddedLattice{Mat3<i64>::identity(), 1, T0};
}

// Representatives of the isotropic points of Q mod p in P^2(F_p), each with
// leading nonzero coordinate 1, sorted lexicographically. Size is p+1.
inline std::vector<Vec3<i64>> isotropic_lines(const TernaryForm& f, i64 p) {
  OMF_CHECK(is_prime_u64(static_cast<u64>(p)), "isotropic_lines: p not prime");
  i128 disc = discriminant(f);
  OMF_CHECK(disc % p != 0, "isotropic_lines: p divides the discriminant");
  auto md = [&](i64 t) { i64 r = t % p; return r < 0 ? r + p : r; };
  i64 a = md(f.a), b = md(f.b), c = md(f.c), u = md(f.u), v = md(f.v), w = md(f.w);
  std::vector<Vec3<i64>> pts;
  auto quad_roots = [&](i64 A, i64 B, i64 C) {
    // roots of A z^2 + B z + C mod p, ascending
    std::vector<i64> rs;
    if (A == 0) {
      if (B != 0) rs.push_back(md(-C * static_cast<i64>(invmod(static_cast<u64>(B), static_cast<u64>(p)))));
      else if (C == 0) OMF_CHECK(false, "quad_roots: identically zero");
      return rs;
    }
    if (p == 2) {
      for (i64 z = 0; z < 2; ++z)
        if (md(A * z * z + B * z + C) == 0) rs.push_back(z);
      return rs;
    }
    u64 D = static_cast<u64>(md(B * B - 4 * A * C));
    if (D == 0) {
      u64 inv2A = invmod(static_cast<u64>(md(2 * A)), static_cast<u64>(p));
      rs.push_back(static_cast<i64>(mulmod(static_cast<u64>(md(-B)), inv2A, static_cast<u64>(p))));
      return rs;
    }
    if (legendre(D, static_cast<u64>(p)) != 1) return rs;
    u64 s = sqrt_mod(D, static_cast<u64>(p));
    u64 inv2A = invmod(static_cast<u64>(md(2 * A)), static_cast<u64>(p));
    u64 r1 = mulmod(static_cast<u64>(md(-B + static_cast<i64>(s))), inv2A, static_cast<u64>(p));
    u64 r2 = mulmod(static_cast<u64>(md(-B - static_cast<i64>(s))), inv2A, static_cast<u64>(p));
    rs.push_back(static_cast<i64>(std::min(r1, r2)));
    rs.push_back(static_cast<i64>(std::max(r1, r2)));
    return rs;
  };
  // x = (1, y, z): c z^2 + (u y + v) z + (a + w y + b y^2) = 0
  for (i64 y = 0; y < p; ++y)
    for (i64 z : quad_roots(c, md(u * y + v), md(a + w * y + b * y * y))) pts.push_back({1, y, z});
  // x = (0, 1, z): c z^2 + u z + b = 0
  for (i64 z : quad_roots(c, u, b)) pts.push_back({0, 1, z});
  // x = (0, 0, 1)
  if (c == 0) pts.push_back({0, 0, 1});
  OMF_CHECK(static_cast<i64>(pts.size()) == p + 1, "isotropic point count is not p+1");
  std::sort(pts.begin(), pts.end(), [](const Vec3<i64>& l, const Vec3<i64>& r) {
    for (int i = 0; i < 3; ++i)
      if (l[i] != r[i]) return l[i] < r[i];
    return false;
  });
  return pts;
}

// v = x mod p with Q(v) = 0 mod p^2. Odd p: v = x + p t e_i against any e_i
// with T(x, e_i) nonzero mod p. p = 2: v = x + 2 e_i with T(x, e_i) odd,
// which exists because the mod-2 radical of T carries odd Q when the
// half-discriminant is odd.
inline Vec3<i64> lift_isotropic(const TernaryForm& f, const Vec3<i64>& x, i64 p) {
  Mat3<i64> G = gram(f);
  i128 q = evaluate(f, x);
  OMF_CHECK(q % p == 0, "lift_isotropic: x not isotropic");
  if (p == 2) {
    if (q % 4 == 0) return x;
    for (int i = 0; i < 3; ++i) {
      i64 pair = G[i][0] * x[0] + G[i][1] * x[1] + G[i][2] * x[2];
      if (pair % 2 != 0) {
        Vec3<i64> v = x;
        v[i] += 2;
        OMF_CHECK(evaluate(f, v) % 4 == 0, "lift_isotropic: mod 4 lift failed");
        return v;
      }
    }
    OMF_CHECK(false, "lift_isotropic: isotropic vector in the mod-2 radical");
  }
  if (q % (i128(p) * p) == 0) return x;
  for (int i = 0; i < 3; ++i) {
    i64 pair = G[i][0] * x[0] + G[i][1] * x[1] + G[i][2] * x[2];
    if (pair % p != 0) {
      i64 qring = static_cast<i64>((q / p) % p); // q = Q(x), p | q
      i64 pm = ((pair % p) + p) % p;
      i64 t = static_cast<i64>(mulmod(static_cast<u64>(((-qring) % p + p) % p),
                                      invmod(static_cast<u64>(pm), static_cast<u64>(p)),
                                      static_cast<u64>(p)));
      Vec3<i64> v = x;
      v[i] += p * t;
      OMF_CHECK(evaluate(f, v) % (i128(p) * p) == 0, "lift_isotropic: mod p^2 lift failed");
      return v;
    }
  }
  OMF_CHECK(false, "lift_isotropic: x in the radical mod p");
  return x; // unreachable
}

// The p-neighbor of L at the isotropic line [x] (coordinates in L's own
// basis). Result carries the canonically reduced gram, with the reduction
// witness folded into the embedded basis.
inline EmbeddedLattice neighbor_at(const Mat3<i64>& T0, const EmbeddedLattice& L,
                                   const Vec3<i64>& x, i64 p) {
  TernaryForm g = form_of_gram(L.gram);
  Vec3<i64> v = lift_isotropic(g, x, p);
  // functional w -> T(v, w) mod p in L coordinates
  Vec3<i64> c;
  for (int i = 0; i < 3; ++i) {
    i64 t = L.gram[i][0] * v[0] + L.gram[i][1] * v[1] + L.gram[i][2] * v[2];
    c[i] = ((t % p) + p) % p;
  }
  int piv = -1;
  for (int i = 0; i < 3 && piv < 0; ++i)
    if (c[i] != 0) piv = i;
  OMF_CHECK(piv >= 0, "neighbor_at: T(v,.) vanishes mod p");
  u64 cinv = invmod(static_cast<u64>(c[piv]), static_cast<u64>(p));
  // integral generators of p * P in L coordinates: v, p^2 e_piv,
  // p (e_j - t_j e_piv) for the non-pivot j
  std::vector<Vec3<i128>> cols;
  cols.push_back(vec_cast<i128>(v));
  {
    Vec3<i128> e{0, 0, 0};
    e[piv] = i128(p) * p;
    cols.push_back(e);
  }
  for (int j = 0; j < 3; ++j) {
    if (j == piv) continue;
    i64 tj = static_cast<i64>(mulmod(static_cast<u64>(c[j]), cinv, static_cast<u64>(p)));
    Vec3<i128> e{0, 0, 0};
    e[j] = p;
    e[piv] = -i128(p) * tj;
    cols.push_back(e);
  }
  Mat3<i128> H = hnf_columns(cols);
  OMF_CHECK(H.det() == i128(p) * p * p, "neighbor_at: wrong index");
  // gram of P directly in L coordinates: H^T G_L H / p^2; seed coordinates
  // never enter, so entry growth is bounded by p^4 |G_L|
  Mat3<i128> gw = H.transpose() * mat_cast<i128>(L.gram) * H;
  i128 p2 = i128(p) * p;
  Mat3<i64> gp;
  for (int r = 0; r < 3; ++r)
    for (int cc = 0; cc < 3; ++cc) {
      OMF_CHECK(gw[r][cc] % p2 == 0, "neighbor_at: gram not divisible by p^2");
      i128 q = gw[r][cc] / p2;
      OMF_CHECK(q > std::numeric_limits<i64>::min() && q < std::numeric_limits<i64>::max(),
                "neighbor_at: gram overflow");
      gp[r][cc] = static_cast<i64>(q);
    }
  Reduction red = canonical_reduce(gp);
  Mat3<i128> numw = mat_cast<i128>(L.num) * H * mat_cast<i128>(red.basis);
  i128 den = i128(L.den) * p;
  i128 cont = den;
  for (int r = 0; r < 3; ++r)
    for (int cc = 0; cc < 3; ++cc) cont = igcd128(cont, numw[r][cc]);
  Mat3<i64> num;
  for (int r = 0; r < 3; ++r)
    for (int cc = 0; cc < 3; ++cc) {
      i128 q = numw[r][cc] / cont;
      OMF_CHECK(q > std::numeric_limits<i64>::min() && q < std::numeric_limits<i64>::max(),
                "neighbor_at: basis overflow");
      num[r][cc] = static_cast<i64>(q);
    }
  den /= cont;
  OMF_CHECK(den <= std::numeric_limits<i64>::max(), "neighbor_at: denominator overflow");
  // det num = den^3 > 0 by induction: the step multiplies by det H = p^3,
  // det red.basis = 1, and the content division by g^3
  return EmbeddedLattice{num, static_cast<i64>(den), red.gram};
}

// All p+1 neighbors, in the deterministic order of isotropic_lines.
inline std::vector<EmbeddedLattice> neighbors(const Mat3<i64>& T0, const EmbeddedLattice& L,
                                              i64 p) {
  TernaryForm g = form_of_gram(L.gram);
  std::vector<EmbeddedLattice> out;
  for (const Vec3<i64>& x : isotropic_lines(g, p)) out.push_back(neighbor_at(T0, L, x, p));
  return out;
}

} // namespace omf
