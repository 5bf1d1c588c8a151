#include "omf/neighbor.hpp"

#include "omf/builder.hpp"
#include "util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace omf;

TEST_CASE("a form of odd level has p+1 isotropic lines mod every good prime", "[neighbor]") {
  for (auto [N, D] : omf_test::corpus()) {
    TernaryForm f = find_seed(N, D);
    for (i64 p : {2, 3, 5, 7}) {
      if (N % p == 0) continue;
      auto lines = isotropic_lines(f, p);
      CHECK(lines.size() == static_cast<std::size_t>(p + 1));
      for (const Vec3<i64>& x : lines) {
        CHECK_FALSE(x.is_zero());
        CHECK(evaluate(f, x) % p == 0);
      }
    }
  }
}

TEST_CASE("isotropic lifts are isotropic mod p squared", "[neighbor]") {
  TernaryForm f = find_seed(11, 11);
  for (i64 p : {2, 3, 5, 7, 13}) {
    for (const Vec3<i64>& x : isotropic_lines(f, p)) {
      Vec3<i64> y = lift_isotropic(f, x, p);
      CHECK(evaluate(f, y) % (p * p) == 0);
      for (int i = 0; i < 3; ++i) CHECK((y[i] - x[i]) % p == 0); // same line mod p
    }
  }
}

TEST_CASE("neighbors stay in the genus: integral, definite, same discriminant", "[neighbor]") {
  for (auto [N, D] : omf_test::corpus()) {
    TernaryForm f = find_seed(N, D);
    Mat3<i64> T0 = gram(f);
    EmbeddedLattice L = seed_lattice(f);
    for (i64 p : {2, 3}) {
      if (N % p == 0) continue;
      auto nbs = neighbors(T0, L, p);
      REQUIRE(nbs.size() == static_cast<std::size_t>(p + 1));
      for (const EmbeddedLattice& nb : nbs) {
        CHECK(gram_in_seed(T0, nb.num, nb.den) == nb.gram);
        TernaryForm g = form_of_gram(nb.gram);
        CHECK(discriminant(g) == N);
        CHECK(is_positive_definite(g));
      }
    }
  }
}

TEST_CASE("the p-neighbor step at an isotropic index-p sublattice is deterministic", "[neighbor]") {
  TernaryForm f = find_seed(11, 11);
  Mat3<i64> T0 = gram(f);
  EmbeddedLattice L = seed_lattice(f);
  auto lines = isotropic_lines(f, 3);
  for (const Vec3<i64>& x : lines) {
    EmbeddedLattice a = neighbor_at(T0, L, x, 3);
    EmbeddedLattice b = neighbor_at(T0, L, x, 3);
    CHECK(a.num == b.num);
    CHECK(a.den == b.den);
    CHECK(a.gram == b.gram);
  }
}

TEST_CASE("iterating neighbors reaches the other level 11 class", "[neighbor]") {
  TernaryForm f = find_seed(11, 11);
  Mat3<i64> T0 = gram(f);
  auto nbs = neighbors(T0, seed_lattice(f), 2);
  TernaryForm other = canonical_form(TernaryForm{1, 1, 4, 0, -1, -1});
  bool seen = false;
  for (const EmbeddedLattice& nb : nbs) seen |= (form_of_gram(nb.gram) == other);
  CHECK(seen);
}
