#pragma once

// Hecke operators T_p on the character spaces M(SO(Lambda), nu_r).
//
// The expensive part, enumerating p-neighbors of every class representative
// and reducing them, is independent of the character: each neighbor yields
// an arrow (source class, target class, theta parity mask), and a Hecke
// matrix for any r is a cheap re-signing of the same arrow table.

#include "omf/characters.hpp"
#include "omf/genus.hpp"
#include "omf/neighbor.hpp"
#include "omf/parallel.hpp"

#include <optional>
#include <set>

namespace omf {

struct NeighborArrow {
  int source = 0;
  int target = 0;
  u32 mask = 0; // theta parity mask of the witness isometry, bit k <-> k-th prime of N
};

struct NeighborTable {
  i64 p = 0;
  std::vector<NeighborArrow> arrows; // (p+1) per source, source-major, neighbor order
};

// Distinct spinor-norm masks of each class's proper automorphism group.
// Computed once per genus; consumed by every supported_classes call.
inline std::vector<std::vector<u32>> stabilizer_masks(const Genus& gen) {
  std::vector<i64> ps = prime_factors(gen.level);
  std::vector<std::vector<u32>> out(gen.classes.size());
  for (std::size_t c = 0; c < gen.classes.size(); ++c) {
    std::set<u32> seen;
    for (const Mat3<i64>& rot : gen.classes[c].rotations) {
      Isometry s{mat_cast<i128>(rot), 1};
      seen.insert(theta_mask(gen.classes[c].lat.gram, s, ps));
    }
    out[c].assign(seen.begin(), seen.end());
  }
  return out;
}

struct CharacterSpace {
  const Genus* gen = nullptr;
  i64 r = 1;
  u32 rmask = 0;
  std::vector<int> supported;  // class indices carrying the character, ascending
  std::vector<int> pos;        // class index -> slot in supported, or -1
  std::vector<i64> aut_orders; // #O per supported class; Petersson weight is 1/#O
};

inline u32 character_mask(i64 N, i64 r) {
  OMF_CHECK(r > 0 && N % r == 0 && is_squarefree(r), "character must be a squarefree divisor");
  std::vector<i64> ps = prime_factors(N);
  u32 m = 0;
  for (std::size_t k = 0; k < ps.size(); ++k)
    if (r % ps[k] == 0) m |= u32(1) << k;
  return m;
}

// A class supports nu_r iff the character is trivial on its stabilizer,
// i.e. every stabilizer theta mask meets the r-mask evenly.
inline CharacterSpace supported_classes(const Genus& gen,
                                        const std::vector<std::vector<u32>>& stab_masks, i64 r) {
  CharacterSpace cs;
  cs.gen = &gen;
  cs.r = r;
  cs.rmask = character_mask(gen.level, r);
  cs.pos.assign(gen.classes.size(), -1);
  for (std::size_t c = 0; c < gen.classes.size(); ++c) {
    bool ok = true;
    for (u32 m : stab_masks[c])
      if (__builtin_popcount(m & cs.rmask) & 1) ok = false;
    if (!ok) continue;
    cs.pos[c] = static_cast<int>(cs.supported.size());
    cs.supported.push_back(static_cast<int>(c));
    cs.aut_orders.push_back(gen.classes[c].aut_order);
  }
  return cs;
}

inline CharacterSpace supported_classes(const Genus& gen, i64 r) {
  return supported_classes(gen, stabilizer_masks(gen), r);
}

// One pass of p-neighbor enumeration over all class representatives. For a
// neighbor Pi of rep i reducing to class j, the witness sigma = B_Pi B_j^-1
// maps rep j onto Pi; both bases carry the same canonical Gram, so
// sigma^T T0 sigma = T0 holds by construction, and det sigma = +1 since
// every embedded basis has det(num) = den^3 > 0.
inline NeighborTable build_neighbor_table(const Genus& gen, i64 p, int threads = 1) {
  OMF_CHECK(gen.level % p != 0, "neighbor prime must not divide the level");
  std::vector<i64> ps = prime_factors(gen.level);

  std::map<std::array<i64, 6>, int> index;
  for (std::size_t c = 0; c < gen.classes.size(); ++c)
    index[detail::gram_key(gen.classes[c].lat.gram)] = static_cast<int>(c);

  NeighborTable table;
  table.p = p;
  std::size_t n = gen.classes.size();
  std::vector<std::vector<NeighborArrow>> rows(n);
  parallel_for(n, threads, [&](std::size_t c) {
    const EmbeddedLattice& L = gen.classes[c].lat;
    std::vector<EmbeddedLattice> nbrs = neighbors(gen.T0, L, p);
    rows[c].reserve(nbrs.size());
    for (const EmbeddedLattice& nb : nbrs) {
      auto it = index.find(detail::gram_key(nb.gram));
      OMF_CHECK(it != index.end(), "neighbor escaped the genus");
      const EmbeddedLattice& Lj = gen.classes[it->second].lat;
      Isometry s;
      s.num = mat_cast<i128>(nb.num) * mat_cast<i128>(Lj.num).adjugate();
      s.den = i128(nb.den) * Lj.den * Lj.den;
      reduce_isometry(s);
      rows[c].push_back({static_cast<int>(c), it->second, theta_mask(gen.T0, s, ps)});
    }
  });
  for (auto& row : rows)
    table.arrows.insert(table.arrows.end(), row.begin(), row.end());
  return table;
}

struct HeckeMatrix {
  i64 p = 0;
  i64 r = 1;
  std::vector<std::vector<i64>> a; // a[i][j] indexed by supported-class slots
};

// entry[i][j] = sum of nu_r(sigma) over p-neighbors of rep i in class j;
// arrows touching unsupported classes contribute nothing (the function
// space vanishes there).
inline HeckeMatrix assemble_hecke(const CharacterSpace& cs, const NeighborTable& table) {
  std::size_t s = cs.supported.size();
  HeckeMatrix m;
  m.p = table.p;
  m.r = cs.r;
  m.a.assign(s, std::vector<i64>(s, 0));
  for (const NeighborArrow& ar : table.arrows) {
    int i = cs.pos[ar.source], j = cs.pos[ar.target];
    if (i < 0 || j < 0) continue;
    m.a[i][j] += (__builtin_popcount(ar.mask & cs.rmask) & 1) ? -1 : 1;
  }
  return m;
}

inline HeckeMatrix hecke_matrix(const CharacterSpace& cs, i64 p, int threads = 1) {
  return assemble_hecke(cs, build_neighbor_table(*cs.gen, p, threads));
}

// r = 1 only: the all-ones function, with T_p e = (p+1) e.
inline std::optional<std::vector<i64>> eisenstein_vector(const CharacterSpace& cs) {
  if (cs.r != 1) return std::nullopt;
  return std::vector<i64>(cs.supported.size(), 1);
}

// Cuspidal complement of the Eisenstein line under <f,g> = sum f_j g_j / #O_j.
// Basis columns v_t = #O_t e_t - #O_0 e_0 (t >= 1) are orthogonal to the
// all-ones vector; matrices are rewritten in this basis exactly. For r != 1
// the whole space is cuspidal and the projection is the identity.
struct CuspSpace {
  std::vector<std::vector<Rat>> basis;              // columns, each of length #supported
  std::vector<std::vector<std::vector<Rat>>> mats;  // one square matrix per input
};

inline CuspSpace cusp_projection(const CharacterSpace& cs,
                                 const std::vector<HeckeMatrix>& mats) {
  std::size_t n = cs.supported.size();
  CuspSpace out;
  if (cs.r != 1) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Rat> e(n, Rat(0));
      e[j] = 1;
      out.basis.push_back(e);
    }
    for (const HeckeMatrix& m : mats) {
      std::vector<std::vector<Rat>> q(n, std::vector<Rat>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = m.a[i][j];
      out.mats.push_back(std::move(q));
    }
    return out;
  }
  OMF_CHECK(n >= 1, "empty character space");
  std::size_t d = n - 1;
  for (std::size_t t = 1; t < n; ++t) {
    std::vector<Rat> v(n, Rat(0));
    v[t] = cs.aut_orders[t];
    v[0] = -cs.aut_orders[0];
    out.basis.push_back(std::move(v));
  }
  // Coordinates of w in the frame (ones, v_1, .., v_d): w_j = c_0 + c_j o_j
  // for j >= 1 and w_0 = c_0 - o_0 sum c_j, which solves to
  // c_0 = (w_0 + o_0 sum_j w_j/o_j) / (1 + o_0 sum_j 1/o_j).
  Rat S(0);
  for (std::size_t j = 1; j < n; ++j) S += Rat(1, cs.aut_orders[j]);
  Rat denom = Rat(1) + Rat(cs.aut_orders[0]) * S;
  for (const HeckeMatrix& m : mats) {
    std::vector<std::vector<Rat>> q(d, std::vector<Rat>(d));
    for (std::size_t t = 0; t < d; ++t) {
      std::vector<Rat> w(n, Rat(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i] += Rat(m.a[i][j]) * out.basis[t][j];
      Rat c0 = w[0];
      for (std::size_t j = 1; j < n; ++j) c0 += Rat(cs.aut_orders[0]) * w[j] / cs.aut_orders[j];
      c0 /= denom;
      OMF_CHECK(c0 == 0, "Hecke image of a cusp vector left the cusp space");
      for (std::size_t ss = 1; ss < n; ++ss) q[ss - 1][t] = (w[ss] - c0) / cs.aut_orders[ss];
    }
    out.mats.push_back(std::move(q));
  }
  return out;
}

inline std::size_t cusp_dimension(const CharacterSpace& cs) {
  std::size_t n = cs.supported.size();
  return cs.r == 1 ? (n ? n - 1 : 0) : n;
}

} // namespace omf
