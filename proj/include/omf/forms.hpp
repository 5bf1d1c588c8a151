#pragma once

// Integral ternary quadratic forms.
//
//   Q(x,y,z) = a x^2 + b y^2 + c z^2 + u yz + v xz + w xy
//
// The Gram matrix stored everywhere is the POLARIZATION T(x,y) = Q(x+y) -
// Q(x) - Q(y), i.e. diagonal entries are doubled:
//
//   T = [ 2a  w   v ]
//       [ w   2b  u ]
//       [ v   u   2c ]
//
// and the half-discriminant is det(T)/2 = 4abc + uvw - a u^2 - b v^2 - c w^2,
// the invariant called the form's discriminant throughout this library.

#include "omf/mat3.hpp"

#include <optional>

namespace omf {

struct TernaryForm {
  i64 a = 0, b = 0, c = 0, u = 0, v = 0, w = 0;
  bool operator==(const TernaryForm&) const = default;
};

inline Mat3<i64> gram(const TernaryForm& f) {
  Mat3<i64> t;
  t[0][0] = 2 * f.a; t[0][1] = f.w;     t[0][2] = f.v;
  t[1][0] = f.w;     t[1][1] = 2 * f.b; t[1][2] = f.u;
  t[2][0] = f.v;     t[2][1] = f.u;     t[2][2] = 2 * f.c;
  return t;
}

// inverse of gram(): requires even diagonal
inline TernaryForm form_of_gram(const Mat3<i64>& t) {
  OMF_CHECK(t[0][1] == t[1][0] && t[0][2] == t[2][0] && t[1][2] == t[2][1], "gram not symmetric");
  OMF_CHECK(t[0][0] % 2 == 0 && t[1][1] % 2 == 0 && t[2][2] % 2 == 0, "gram diagonal not even");
  return {t[0][0] / 2, t[1][1] / 2, t[2][2] / 2, t[1][2], t[0][2], t[0][1]};
}

inline i64 discriminant(const TernaryForm& f) {
  i128 d = i128(4) * f.a * f.b * f.c + i128(f.u) * f.v * f.w - i128(f.a) * f.u * f.u -
           i128(f.b) * f.v * f.v - i128(f.c) * f.w * f.w;
  OMF_CHECK(d > INT64_MIN && d < INT64_MAX, "discriminant overflows 64 bits");
  return static_cast<i64>(d);
}

inline i64 evaluate(const TernaryForm& f, const Vec3<i64>& p) {
  i128 q = i128(f.a) * p[0] * p[0] + i128(f.b) * p[1] * p[1] + i128(f.c) * p[2] * p[2] +
           i128(f.u) * p[1] * p[2] + i128(f.v) * p[0] * p[2] + i128(f.w) * p[0] * p[1];
  OMF_CHECK(q > INT64_MIN && q < INT64_MAX, "form value overflows 64 bits");
  return static_cast<i64>(q);
}

inline bool is_positive_definite(const TernaryForm& f) {
  if (f.a <= 0) return false;
  Mat3<i64> t = gram(f);
  i128 m2 = i128(t[0][0]) * t[1][1] - i128(t[0][1]) * t[0][1];
  if (m2 <= 0) return false;
  Mat3<i128> T = mat_cast<i128>(t);
  return T.det() > 0;
}

// f composed with the column substitution x -> U x: Gram becomes U^T T U
inline TernaryForm transform(const TernaryForm& f, const Mat3<i64>& U) {
  Mat3<i128> T = mat_cast<i128>(gram(f));
  Mat3<i128> Ub = mat_cast<i128>(U);
  Mat3<i128> R = Ub.transpose() * T * Ub;
  Mat3<i64> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      OMF_CHECK(R[i][j] > INT64_MIN && R[i][j] < INT64_MAX, "transformed gram overflows");
      out[i][j] = static_cast<i64>(R[i][j]);
    }
  return form_of_gram(out);
}

// Generator of the one-dimensional radical of T mod p (p odd, p || disc),
// normalized so its first nonzero coordinate is 1 mod p.
inline Vec3<i64> radical_vector(const TernaryForm& f, i64 p) {
  OMF_CHECK(p > 2 && is_prime_u64(static_cast<u64>(p)), "radical_vector: p must be an odd prime");
  i64 d = discriminant(f);
  OMF_CHECK(d % p == 0 && (d / p) % p != 0, "radical_vector: p must exactly divide disc");
  Mat3<i128> T = mat_cast<i128>(gram(f));
  Mat3<i128> A = T.adjugate(); // columns of adj(T) span ker(T) mod p when rank drops to 2
  for (int j = 0; j < 3; ++j) {
    Vec3<i64> z;
    bool nonzero = false;
    for (int i = 0; i < 3; ++i) {
      i64 e = static_cast<i64>(A[i][j] % p);
      if (e < 0) e += p;
      z[i] = e;
      nonzero |= (e != 0);
    }
    if (!nonzero) continue;
    int lead = 0;
    while (z[lead] == 0) ++lead;
    u64 inv = invmod(static_cast<u64>(z[lead]), static_cast<u64>(p));
    for (int i = 0; i < 3; ++i) z[i] = static_cast<i64>(mulmod(static_cast<u64>(z[i]), inv, static_cast<u64>(p)));
    // radical vectors are isotropic automatically at odd p; assert anyway
    OMF_CHECK(evaluate(f, z) % p == 0, "radical vector not isotropic");
    return z;
  }
  throw internal_error("radical_vector: adjugate vanished mod p (rank < 2?)");
}

enum class SplitType { Split, Inert };

// Local invariant at p || disc: Split iff the binary complement of the
// radical is isotropic mod p, i.e. -disc(complement) is a nonzero square.
inline SplitType local_split_type(const TernaryForm& f, i64 p) {
  if (p == 2) throw std::invalid_argument("local_split_type: p = 2 not admitted (odd level only)");
  if (!is_prime_u64(static_cast<u64>(p))) throw std::invalid_argument("local_split_type: p not prime");
  i64 d = discriminant(f);
  if (d % p != 0 || (d / p) % p == 0)
    throw std::invalid_argument("local_split_type: p must divide disc exactly once");
  Vec3<i64> z = radical_vector(f, p);
  int lead = 0;
  while (z[lead] == 0) ++lead;
  // the two standard basis vectors other than `lead` complete z to a basis;
  // the quotient form lives on their span and is nondegenerate mod p
  int s = (lead == 0) ? 1 : 0;
  int t = (lead == 2) ? 1 : 2;
  Mat3<i64> T = gram(f);
  i128 det2 = i128(T[s][s]) * T[t][t] - i128(T[s][t]) * T[s][t];
  i64 m = static_cast<i64>(((-det2) % p + p) % p);
  OMF_CHECK(m != 0, "binary complement degenerate mod p");
  return legendre(m, p) == 1 ? SplitType::Split : SplitType::Inert;
}

} // namespace omf
