#pragma once

// Seed lattice construction for a given level N and discriminant D.
//
// Searches Minkowski-style boxes a <= b <= c, |w| <= a, |v| <= a, |u| <= b
// with c forced by the discriminant equation
//   c (4ab - w^2) = N - uvw + a u^2 + b v^2,
// then filters by the local splitting at every p | N. Any hit is a valid
// seed: for fixed (N, D) all local data is pinned (odd p by the splitting,
// p = 2 and the infinite place by the product formula), so there is only
// one genus a hit could land in.

#include "omf/forms.hpp"
#include "omf/genus.hpp"

namespace omf {

inline TernaryForm find_seed(i64 N, i64 D) {
  if (!(N > 0 && N % 2 == 1 && is_squarefree(N))) throw std::invalid_argument("level must be odd and squarefree");
  if (!(D > 1 && N % D == 0)) throw std::invalid_argument("discriminant must divide the level");
  if (prime_factors(D).size() % 2 != 1)
    throw std::invalid_argument("discriminant needs an odd number of prime factors");
  std::vector<i64> np = prime_factors(N);
  auto matches = [&](const TernaryForm& f) {
    if (!is_positive_definite(f)) return false;
    for (i64 p : np)
      if (local_split_type(f, p) != ((D % p == 0) ? SplitType::Inert : SplitType::Split)) return false;
    return true;
  };
  for (i64 a = 1; a <= 16; ++a) {
    // c >= b forces 2ab(b-a) <= N within the box (num <= N + ab^2 + 2a^2 b,
    // b*den >= 3ab^2), so larger b cannot yield candidates
    for (i64 b = a; 2 * a * b * (b - a) <= N; ++b) {
      for (i64 w = 0; w <= a; ++w) {
        i64 den = 4 * a * b - w * w;
        if (den <= 0) continue;
        for (i64 v = -a; v <= a; ++v) {
          for (i64 u = -b; u <= b; ++u) {
            i128 num = i128(N) - i128(u) * v * w + i128(a) * u * u + i128(b) * v * v;
            if (num <= 0 || num % den != 0) continue;
            i128 c = num / den;
            if (c < b || c > std::numeric_limits<i64>::max()) continue;
            TernaryForm f{a, b, static_cast<i64>(c), u, v, w};
            if (discriminant(f) != i128(N)) continue; // paranoia: equation implies this
            if (matches(f)) return f;
          }
        }
      }
    }
  }
  throw std::invalid_argument("no seed lattice found in the search box");
}

// Convenience: builder plus genus in one call.
inline Genus build_genus(i64 N, i64 D, i64 neighbor_start) {
  return build_genus(N, D, find_seed(N, D), neighbor_start);
}

inline Genus build_genus(i64 N, i64 D) { return build_genus(N, D, find_seed(N, D)); }

} // namespace omf
