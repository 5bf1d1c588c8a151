#include "omf/hecke.hpp"

#include "omf/builder.hpp"
#include "util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace omf;

namespace {

// exact product over i64 entries; dimensions here keep i128 safe
std::vector<std::vector<i128>> prod(const std::vector<std::vector<i64>>& A,
                                    const std::vector<std::vector<i64>>& B) {
  std::size_t n = A.size();
  std::vector<std::vector<i128>> C(n, std::vector<i128>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) C[i][j] += i128(A[i][k]) * B[k][j];
  return C;
}

} // namespace

TEST_CASE("level 11 trivial-character Hecke matrices", "[hecke]") {
  Genus g = build_genus(11, 11);
  CharacterSpace cs = supported_classes(g, 1);
  CHECK(hecke_matrix(cs, 2).a == std::vector<std::vector<i64>>{{1, 2}, {3, 0}});
  CHECK(hecke_matrix(cs, 3).a == std::vector<std::vector<i64>>{{2, 2}, {3, 1}});
  CHECK(hecke_matrix(cs, 5).a == std::vector<std::vector<i64>>{{4, 2}, {3, 3}});
}

TEST_CASE("trivial-character rows sum to p+1", "[hecke]") {
  for (auto [N, D] : omf_test::corpus()) {
    Genus g = build_genus(N, D);
    CharacterSpace cs = supported_classes(g, 1);
    for (i64 p : {2, 3, 5, 7}) {
      if (N % p == 0) continue;
      HeckeMatrix m = hecke_matrix(cs, p);
      for (const auto& row : m.a) {
        i64 s = 0;
        for (i64 x : row) s += x;
        CHECK(s == p + 1);
      }
    }
  }
}

TEST_CASE("Hecke operators commute on every character space", "[hecke]") {
  for (i64 N : {11, 105, 231}) {
    Genus g = build_genus(N, N);
    auto masks = stabilizer_masks(g);
    for (i64 r : divisors(N)) {
      CharacterSpace cs = supported_classes(g, masks, r);
      if (cs.supported.empty()) continue;
      HeckeMatrix a = hecke_matrix(cs, 2);
      HeckeMatrix b = hecke_matrix(cs, 13);
      CHECK(prod(a.a, b.a) == prod(b.a, a.a));
    }
  }
}

TEST_CASE("Hecke matrices are self-adjoint for the Petersson pairing", "[hecke]") {
  // M[i][j] / #O_i = M[j][i] / #O_j, cleared of denominators
  for (auto [N, D] : omf_test::corpus()) {
    Genus g = build_genus(N, D);
    auto masks = stabilizer_masks(g);
    for (i64 r : divisors(N)) {
      CharacterSpace cs = supported_classes(g, masks, r);
      if (cs.supported.empty()) continue;
      HeckeMatrix m = hecke_matrix(cs, N % 2 ? 2 : 3);
      std::size_t n = cs.supported.size();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          CHECK(i128(m.a[i][j]) * cs.aut_orders[j] == i128(m.a[j][i]) * cs.aut_orders[i]);
    }
  }
}

TEST_CASE("the all-ones vector is Eisenstein at the trivial character", "[hecke]") {
  for (auto [N, D] : omf_test::corpus()) {
    Genus g = build_genus(N, D);
    CharacterSpace cs = supported_classes(g, 1);
    auto e = eisenstein_vector(cs);
    REQUIRE(e.has_value());
    for (i64 p : {2, 3, 5}) {
      if (N % p == 0) continue;
      HeckeMatrix m = hecke_matrix(cs, p);
      for (const auto& row : m.a) {
        i64 s = 0;
        for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * (*e)[j];
        CHECK(s == (p + 1));
      }
    }
  }
  CHECK_FALSE(eisenstein_vector(supported_classes(build_genus(105, 105), 3)).has_value());
}

TEST_CASE("one neighbor table serves all characters at once", "[hecke]") {
  Genus g = build_genus(105, 105);
  auto masks = stabilizer_masks(g);
  NeighborTable table = build_neighbor_table(g, 2);
  CHECK(table.arrows.size() == g.classes.size() * 3); // (p+1) arrows per class
  for (i64 r : divisors(105)) {
    CharacterSpace cs = supported_classes(g, masks, r);
    CHECK(assemble_hecke(cs, table).a == hecke_matrix(cs, 2).a);
  }
}

TEST_CASE("cusp projection removes the Eisenstein line exactly", "[hecke]") {
  Genus g = build_genus(11, 11);
  CharacterSpace cs = supported_classes(g, 1);
  std::vector<HeckeMatrix> mats{hecke_matrix(cs, 2), hecke_matrix(cs, 3), hecke_matrix(cs, 5)};
  CuspSpace cusp = cusp_projection(cs, mats);
  REQUIRE(cusp.mats.size() == 3);
  REQUIRE(cusp.mats[0].size() == 1); // dim 2 minus the Eisenstein line
  CHECK(cusp.mats[0][0][0] == Rat(-2));
  CHECK(cusp.mats[1][0][0] == Rat(-1));
  CHECK(cusp.mats[2][0][0] == Rat(1));
}

TEST_CASE("neighbor primes dividing the level are rejected", "[hecke]") {
  Genus g = build_genus(11, 11);
  CHECK_THROWS_AS(build_neighbor_table(g, 11), internal_error);
}
