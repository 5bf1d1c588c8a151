#pragma once

// Genus enumeration by neighbor BFS with an exact mass certificate.
//
// For odd squarefree N and D | N with an odd number of prime factors there
// is a single genus of positive ternary lattices with half-discriminant N
// whose local splitting is Inert exactly at p | D. Its mass is
//   (1/12) * prod_{p | D} (p-1) * prod_{p | N/D} (p+1) / 2^(omega(N)+1),
// so a neighbor BFS can certify completeness: classes are collected until
// the weighted count sum 1/#O(L) reaches the mass exactly. If one neighbor
// prime fails to connect the graph, the BFS retries with further primes
// over the classes already found; overshooting the mass is impossible.

#include "omf/neighbor.hpp"
#include "omf/reduce.hpp"

#include <map>
#include <vector>

namespace omf {

struct GenusClass {
  EmbeddedLattice lat;             // lat.gram is the canonical class key
  std::vector<Mat3<i64>> rotations; // proper automorphisms SO(gram)
  i64 aut_order = 0;               // #O(gram) = 2 * rotations.size()
};

struct Genus {
  i64 level = 0; // N, the half-discriminant
  i64 disc = 0;  // D, the product of the Inert primes
  TernaryForm seed{};
  Mat3<i64> T0{}; // gram(seed); all classes embed in its quadratic space
  std::vector<GenusClass> classes;
};

inline Rat eichler_mass(i64 N, i64 D) {
  OMF_CHECK(N > 0 && N % 2 == 1 && is_squarefree(N), "mass: N must be odd squarefree");
  OMF_CHECK(D > 1 && N % D == 0, "mass: D must divide N");
  std::vector<i64> np = prime_factors(N);
  std::vector<i64> dp = prime_factors(D);
  OMF_CHECK(dp.size() % 2 == 1, "mass: D needs an odd number of prime factors");
  Rat m(1, 12);
  for (i64 p : np) m *= (D % p == 0) ? Rat(p - 1) : Rat(p + 1);
  m /= Rat(i64(1) << (np.size() + 1));
  return m;
}

// Checks that f has half-discriminant N and the local splitting prescribed
// by D; throws std::invalid_argument otherwise.
inline void validate_seed(i64 N, i64 D, const TernaryForm& f) {
  if (!(N > 0 && N % 2 == 1 && is_squarefree(N))) throw std::invalid_argument("level must be odd and squarefree");
  if (!(D > 1 && N % D == 0)) throw std::invalid_argument("discriminant must divide the level");
  if (prime_factors(D).size() % 2 != 1)
    throw std::invalid_argument("discriminant needs an odd number of prime factors");
  if (!is_positive_definite(f)) throw std::invalid_argument("form is not positive definite");
  if (discriminant(f) != i128(N)) throw std::invalid_argument("form has the wrong discriminant");
  for (i64 p : prime_factors(N)) {
    SplitType want = (D % p == 0) ? SplitType::Inert : SplitType::Split;
    if (local_split_type(f, p) != want) throw std::invalid_argument("form has the wrong local splitting");
  }
}

namespace detail {

using GramKey = std::array<i64, 6>;

inline GramKey gram_key(const Mat3<i64>& g) {
  return GramKey{g[0][0], g[1][1], g[2][2], g[0][1], g[0][2], g[1][2]};
}

} // namespace detail

// BFS over p-neighbors until the mass certificate closes. Classes are
// returned sorted by their canonical gram key, so the numbering depends
// only on (N, D), not on the BFS schedule.
inline Genus build_genus(i64 N, i64 D, const TernaryForm& seed, i64 neighbor_start = 2) {
  validate_seed(N, D, seed);
  OMF_CHECK(neighbor_start >= 2, "neighbor prime must be at least 2");
  Genus G;
  G.level = N;
  G.disc = D;
  G.seed = seed;
  G.T0 = gram(seed);

  Rat target = eichler_mass(N, D);
  Rat found = 0;
  std::map<detail::GramKey, int> seen;
  auto add = [&](EmbeddedLattice&& L) {
    detail::GramKey k = detail::gram_key(L.gram);
    if (seen.count(k)) return;
    GenusClass cls;
    cls.rotations = proper_automorphisms(L.gram);
    cls.aut_order = 2 * static_cast<i64>(cls.rotations.size());
    cls.lat = std::move(L);
    found += Rat(1, cls.aut_order);
    seen.emplace(k, static_cast<int>(G.classes.size()));
    G.classes.push_back(std::move(cls));
  };

  {
    Reduction r0 = canonical_reduce(G.T0);
    add(EmbeddedLattice{r0.basis, 1, r0.gram});
  }

  i64 q = neighbor_start;
  while (found != target) {
    while (N % q == 0) q = next_prime(q);
    OMF_CHECK(q < neighbor_start + 100, "genus BFS failed to close the mass certificate");
    // scan-as-you-grow pass: neighbors at q of every class known so far
    for (std::size_t i = 0; i < G.classes.size() && found != target; ++i)
      for (EmbeddedLattice& nb : neighbors(G.T0, G.classes[i].lat, q)) {
        add(std::move(nb));
        if (found == target) break;
      }
    OMF_CHECK(found <= target, "genus mass exceeded: calibration bug");
    q = next_prime(q); // only reached when the q-graph did not close the mass
  }
  std::sort(G.classes.begin(), G.classes.end(), [](const GenusClass& a, const GenusClass& b) {
    return detail::gram_key(a.lat.gram) < detail::gram_key(b.lat.gram);
  });
  return G;
}

} // namespace omf
