#pragma once

// Canonical reduction of positive definite ternary Grams, with exact
// unimodular witnesses.
//
// The canonical representative of a GL3(Z)-orbit is the lexicographic
// minimum of the key (T11, T22, T33, T12, T13, T23) over all unimodular
// bases. The minimum's diagonal is the triple of successive minima (in rank
// 3 a Minkowski-reduced basis attains them), so an exhaustive search over
// short vectors below the largest current diagonal entry is complete. A
// greedy descent runs first so the enumeration stays tiny; correctness never
// depends on the descent, only the bound does. No floating point anywhere:
// enumeration boxes come from x_i^2 <= bound * adj(G)_ii / det(G).

#include "omf/forms.hpp"

#include <optional>
#include <vector>

namespace omf {

struct Reduction {
  Mat3<i64> gram;  // canonical Gram C
  Mat3<i64> basis; // U with U^T G U = C, det U = +1
};

namespace detail {

using Key6 = std::array<i64, 6>;

inline i128 floordiv128(i128 x, i128 y) {
  OMF_CHECK(y > 0, "floordiv128: y <= 0");
  i128 q = x / y;
  if (x % y != 0 && x < 0) --q;
  return q;
}

inline i128 nearest_div(i128 num, i128 den) {
  // nearest integer to num/den, den > 0
  return floordiv128(2 * num + den, 2 * den);
}

inline i128 norm_in(const Mat3<i128>& G, const Vec3<i128>& x) { return pair_in(G, x, x); }

struct Short {
  i64 norm;
  Vec3<i64> v;
  Vec3<i128> Gv; // pairing column, T(v, y) = Gv . y
};

// All nonzero vectors with T(v,v) <= bound, one representative per {v,-v}
// (first nonzero coordinate positive), sorted by (norm, coordinates).
inline std::vector<Short> short_vectors(const Mat3<i64>& G, i64 bound) {
  Mat3<i128> Gw = mat_cast<i128>(G);
  Mat3<i128> adj = Gw.adjugate();
  i128 det = Gw.det();
  OMF_CHECK(det > 0, "short_vectors: G not positive definite");
  i64 box[3];
  for (int i = 0; i < 3; ++i) {
    OMF_CHECK(adj[i][i] > 0, "short_vectors: adjugate diagonal not positive");
    box[i] = static_cast<i64>(isqrt128((i128(bound) * adj[i][i]) / det));
  }
  std::vector<Short> out;
  for (i64 x0 = 0; x0 <= box[0]; ++x0) {
    i64 lo1 = (x0 == 0) ? 0 : -box[1];
    for (i64 x1 = lo1; x1 <= box[1]; ++x1) {
      i64 lo2 = (x0 == 0 && x1 == 0) ? 1 : -box[2];
      for (i64 x2 = lo2; x2 <= box[2]; ++x2) {
        Vec3<i128> x{x0, x1, x2};
        i128 n = norm_in(Gw, x);
        if (n <= 0 || n > bound) continue;
        out.push_back(Short{static_cast<i64>(n), Vec3<i64>{x0, x1, x2}, Gw * x});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Short& a, const Short& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    for (int i = 0; i < 3; ++i)
      if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
    return false;
  });
  OMF_CHECK(!out.empty(), "short_vectors: empty (bound below minimum?)");
  return out;
}

// Greedy descent: column shears and +-1 pair moves until no single move
// shrinks a diagonal entry, then diagonal sorted ascending. Preserves
// U^T G0 U = G.
inline void descend(Mat3<i128>& G, Mat3<i64>& U) {
  auto shear = [&](int i, int j, i128 t) {
    // e_j <- e_j + t e_i
    for (int r = 0; r < 3; ++r) U[r][j] += static_cast<i64>(t) * U[r][i];
    for (int r = 0; r < 3; ++r) G[r][j] += t * G[r][i];
    for (int r = 0; r < 3; ++r) G[j][r] += t * G[i][r];
  };
  auto sort_diag = [&]() {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < 2; ++i)
        if (G[i][i] > G[i + 1][i + 1]) {
          for (int r = 0; r < 3; ++r) std::swap(U[r][i], U[r][i + 1]);
          for (int r = 0; r < 3; ++r) std::swap(G[r][i], G[r][i + 1]);
          for (int r = 0; r < 3; ++r) std::swap(G[i][r], G[i + 1][r]);
        }
  };
  bool changed = true;
  int guard = 0;
  while (changed) {
    OMF_CHECK(++guard < 100000, "descent failed to terminate");
    changed = false;
    sort_diag();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        i128 t = -nearest_div(G[i][j], G[i][i]);
        if (t == 0) continue;
        i128 nn = G[j][j] + 2 * t * G[i][j] + t * t * G[i][i];
        if (nn < G[j][j]) {
          shear(i, j, t);
          changed = true;
        }
      }
    // +-1 combination moves on each basis vector
    for (int k = 0; k < 3 && !changed; ++k) {
      int i = (k + 1) % 3, j = (k + 2) % 3;
      for (int s = -1; s <= 1 && !changed; ++s)
        for (int t = -1; t <= 1 && !changed; ++t) {
          if (s == 0 && t == 0) continue;
          i128 nn = G[k][k] + i128(s) * s * G[i][i] + i128(t) * t * G[j][j] + 2 * s * G[i][k] +
                    2 * t * G[j][k] + 2 * i128(s) * t * G[i][j];
          if (nn < G[k][k]) {
            shear(i, k, s);
            shear(j, k, t);
            changed = true;
          }
        }
    }
  }
  sort_diag();
}

inline i128 gcd3(i128 a, i128 b, i128 c) { return igcd128(igcd128(a, b), c); }

// x with a.x = gcd(a)
inline Vec3<i128> extgcd3(const Vec3<i128>& a) {
  auto ext2 = [](i128 p, i128 q) {
    i128 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (q != 0) {
      i128 t = p / q;
      i128 r = p - t * q; p = q; q = r;
      i128 nx = x0 - t * x1; x0 = x1; x1 = nx;
      i128 ny = y0 - t * y1; y0 = y1; y1 = ny;
    }
    return std::array<i128, 3>{p, x0, y0}; // p = gcd (sign of input), p = x0*orig_p + y0*orig_q
  };
  auto [g01, s, t] = ext2(a[0], a[1]);
  auto [g, x, y] = ext2(g01, a[2]);
  Vec3<i128> r{x * s, x * t, y};
  if (g < 0) r = -r;
  return r;
}

// All v3 = base + a v1 + b v2 with 0 < T(v3,v3) <= cap. The emit callback
// returns the new inclusive cap, so the b-ranges tighten as better
// completions are found; the skewed case (tiny n1, n2, huge completion norm)
// stays linear in sqrt(cap/n1) instead of enumerating a full ellipse.
template <class F>
inline void enumerate_affine(const Mat3<i128>& G, const Vec3<i128>& base, const Vec3<i128>& v1,
                             const Vec3<i128>& v2, i128 n1, i128 n2, i128 T12, i128 cap, F&& emit) {
  i128 q0 = norm_in(G, base);
  Vec3<i128> Gb = G * base;
  i128 Tb1 = dot(Gb, v1), Tb2 = dot(Gb, v2);
  i128 A = n1 * n2 - T12 * T12;
  OMF_CHECK(A > 0, "enumerate_affine: degenerate pair");
  i128 beta = 2 * T12 * Tb2 - 2 * n2 * Tb1;
  i128 gamma = Tb2 * Tb2 - n2 * q0 + n2 * cap;
  i128 disc = beta * beta + 4 * A * gamma;
  if (disc < 0) return;
  i128 s = isqrt128(disc);
  i128 a_lo = floordiv128(beta - s, 2 * A) - 1;
  i128 a_hi = floordiv128(beta + s, 2 * A) + 1;
  for (i128 a = a_lo; a <= a_hi; ++a) {
    i128 Ba = Tb2 + a * T12;
    i128 Ca = q0 + 2 * a * Tb1 + a * a * n1 - cap;
    i128 Db = Ba * Ba - n2 * Ca;
    if (Db < 0) continue;
    i128 sb = isqrt128(Db);
    i128 b_lo = floordiv128(-Ba - sb, n2) - 1;
    i128 b_hi = floordiv128(-Ba + sb, n2) + 1;
    for (i128 b = b_lo; b <= b_hi; ++b) {
      Vec3<i128> x = base + v1 * a + v2 * b;
      i128 n = norm_in(G, x);
      if (n <= 0 || n > cap) continue;
      i128 nc = emit(x, n);
      OMF_CHECK(nc <= cap, "enumerate_affine: cap may only shrink");
      cap = nc;
    }
  }
}

} // namespace detail

// Exhaustive canonical minimum over the GL3(Z)-orbit of G0.
inline Reduction canonical_reduce(const Mat3<i64>& G0) {
  using namespace detail;
  Mat3<i128> G = mat_cast<i128>(G0);
  OMF_CHECK(G.det() > 0 && G0[0][0] > 0, "canonical_reduce: not positive definite");
  Mat3<i64> U = Mat3<i64>::identity();
  descend(G, U);
  Mat3<i64> Gd = mat_cast<i64>(G); // descent keeps entries small enough for i64
  // The first two canonical diagonal entries are the first two successive
  // minima, and m2 <= Gd[1][1] (two independent descended vectors reach it),
  // so this bound covers every v1, v2 candidate; v3 is found affinely.
  i64 bound = Gd[1][1];
  std::vector<Short> S = short_vectors(Gd, bound);
  Mat3<i128> Gw = mat_cast<i128>(Gd);

  i64 m1 = S.front().norm;
  bool found = false;
  Key6 best{};
  Mat3<i64> bestV{};

  for (const Short& s1 : S) {
    if (s1.norm != m1) break;
    for (int sg1 = 1; sg1 >= -1; sg1 -= 2) {
      Vec3<i128> v1 = vec_cast<i128>(s1.v) * i128(sg1);
      Vec3<i128> Gv1 = s1.Gv * i128(sg1);
      for (const Short& s2 : S) {
        if (found && s2.norm > best[1]) break;
        for (int sg2 = 1; sg2 >= -1; sg2 -= 2) {
          Vec3<i128> v2 = vec_cast<i128>(s2.v) * i128(sg2);
          Vec3<i128> cr = cross(v1, v2);
          if (gcd3(cr[0], cr[1], cr[2]) != 1) continue; // not extendable to a basis
          i128 T12 = dot(Gv1, v2);
          Vec3<i128> Gv2 = s2.Gv * i128(sg2);
          Vec3<i128> x0 = extgcd3(cr);
          for (int delta = 1; delta >= -1; delta -= 2) {
            Vec3<i128> base = x0 * i128(delta);
            // shrink base modulo v1, v2
            {
              i128 det2 = i128(s1.norm) * s2.norm - T12 * T12;
              Vec3<i128> Gb = Gw * base;
              i128 tb1 = dot(Gb, v1), tb2 = dot(Gb, v2);
              i128 r1 = nearest_div(tb1 * s2.norm - tb2 * T12, det2);
              i128 r2 = nearest_div(tb2 * s1.norm - tb1 * T12, det2);
              base = base - v1 * r1 - v2 * r2;
            }
            // best[2] caps the search only when the key prefix (m1, n2) ties
            // the incumbent; a strictly smaller prefix must be explored with
            // a fresh cap (any completion wins, base itself bounds min T33).
            i128 cap = (found && s2.norm == best[1]) ? i128(best[2]) : norm_in(Gw, base);
            enumerate_affine(Gw, base, v1, v2, s1.norm, s2.norm, T12, cap,
                             [&](const Vec3<i128>& v3, i128 n3) -> i128 {
                               Key6 key{m1, s2.norm, static_cast<i64>(n3),
                                        static_cast<i64>(T12), static_cast<i64>(dot(Gv1, v3)),
                                        static_cast<i64>(dot(Gv2, v3))};
                               if (!found || key < best) {
                                 found = true;
                                 best = key;
                                 for (int r = 0; r < 3; ++r) {
                                   bestV[r][0] = static_cast<i64>(v1[r]);
                                   bestV[r][1] = static_cast<i64>(v2[r]);
                                   bestV[r][2] = static_cast<i64>(v3[r]);
                                 }
                               }
                               // keys tie into T12.. at equal T33, so the cap
                               // stays inclusive at the incumbent's T33
                               return i128(best[2]);
                             });
          }
        }
      }
    }
  }
  OMF_CHECK(found, "canonical_reduce: no basis found");

  Mat3<i64> W = U * bestV; // total witness against the original G0
  if (W.det() == -1) W = -W; // -I fixes orientation without touching the Gram
  Mat3<i64> C;
  C[0][0] = best[0]; C[1][1] = best[1]; C[2][2] = best[2];
  C[0][1] = C[1][0] = best[3];
  C[0][2] = C[2][0] = best[4];
  C[1][2] = C[2][1] = best[5];
  Mat3<i128> chk = mat_cast<i128>(W).transpose() * mat_cast<i128>(G0) * mat_cast<i128>(W);
  OMF_CHECK(chk == mat_cast<i128>(C), "canonical_reduce: witness check failed");
  OMF_CHECK(W.det() == 1, "canonical_reduce: witness not special");
  return Reduction{C, W};
}

inline TernaryForm canonical_form(const TernaryForm& f) {
  return form_of_gram(canonical_reduce(gram(f)).gram);
}

// Full orthogonal group O(L): all U with U^T G U = G. Unimodularity is
// automatic (det U = +-1 forced by det G != 0).
inline std::vector<Mat3<i64>> automorphisms(const Mat3<i64>& G) {
  using namespace detail;
  i64 bound = std::max({G[0][0], G[1][1], G[2][2]});
  std::vector<Short> S = short_vectors(G, bound);
  Mat3<i128> Gw = mat_cast<i128>(G);
  std::vector<Mat3<i64>> out;
  for (const Short& s1 : S) {
    if (s1.norm != G[0][0]) continue;
    for (int g1 = 1; g1 >= -1; g1 -= 2) {
      Vec3<i128> v1 = vec_cast<i128>(s1.v) * i128(g1);
      Vec3<i128> Gv1 = s1.Gv * i128(g1);
      for (const Short& s2 : S) {
        if (s2.norm != G[1][1]) continue;
        for (int g2 = 1; g2 >= -1; g2 -= 2) {
          Vec3<i128> v2 = vec_cast<i128>(s2.v) * i128(g2);
          if (dot(Gv1, v2) != G[0][1]) continue;
          Vec3<i128> Gv2 = s2.Gv * i128(g2);
          for (const Short& s3 : S) {
            if (s3.norm != G[2][2]) continue;
            for (int g3 = 1; g3 >= -1; g3 -= 2) {
              Vec3<i128> v3 = vec_cast<i128>(s3.v) * i128(g3);
              if (dot(Gv1, v3) != G[0][2]) continue;
              if (dot(Gv2, v3) != G[1][2]) continue;
              Mat3<i64> Uc;
              for (int r = 0; r < 3; ++r) {
                Uc[r][0] = static_cast<i64>(v1[r]);
                Uc[r][1] = static_cast<i64>(v2[r]);
                Uc[r][2] = static_cast<i64>(v3[r]);
              }
              i64 d = Uc.det();
              OMF_CHECK(d == 1 || d == -1, "automorphism not unimodular");
              out.push_back(Uc);
            }
          }
        }
      }
    }
  }
  OMF_CHECK(out.size() % 2 == 0 && out.size() >= 2 && out.size() <= 48,
            "automorphism group size out of range");
  return out;
}

inline std::vector<Mat3<i64>> proper_automorphisms(const Mat3<i64>& G) {
  std::vector<Mat3<i64>> all = automorphisms(G);
  std::vector<Mat3<i64>> so;
  for (const auto& m : all)
    if (m.det() == 1) so.push_back(m);
  OMF_CHECK(2 * so.size() == all.size(), "#O != 2 #SO");
  return so;
}

// witness U with U^T G1 U = G2, if the forms are equivalent
inline std::optional<Mat3<i64>> isometry(const Mat3<i64>& G1, const Mat3<i64>& G2) {
  Reduction r1 = canonical_reduce(G1);
  Reduction r2 = canonical_reduce(G2);
  if (!(r1.gram == r2.gram)) return std::nullopt;
  // U = U1 * U2^{-1}; det U2 = +1 so the adjugate is the inverse
  Mat3<i64> U = r1.basis * r2.basis.adjugate();
  Mat3<i128> chk = mat_cast<i128>(U).transpose() * mat_cast<i128>(G1) * mat_cast<i128>(U);
  OMF_CHECK(chk == mat_cast<i128>(G2), "isometry: witness check failed");
  return U;
}

} // namespace omf
