#include "omf/genus.hpp"

#include "omf/builder.hpp"
#include "util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace omf;

TEST_CASE("Eichler mass fixtures", "[genus]") {
  CHECK(eichler_mass(11, 11) == Rat(5, 24));
  // mass is multiplicative in the local factors: sanity on a 3-prime level
  Rat m = eichler_mass(105, 105);
  CHECK(m > 0);
  CHECK_THROWS(eichler_mass(15, 15));  // even number of ramified primes
  CHECK_THROWS(eichler_mass(12, 3));   // even level
  CHECK_THROWS(eichler_mass(45, 45));  // not squarefree
}

TEST_CASE("the level 11 genus: two classes, mass 5/24, orders 8 and 12", "[genus]") {
  Genus g = build_genus(11, 11);
  REQUIRE(g.classes.size() == 2);
  std::vector<i64> orders{g.classes[0].aut_order, g.classes[1].aut_order};
  std::sort(orders.begin(), orders.end());
  CHECK(orders == std::vector<i64>{8, 12});
  Rat mass = 0;
  for (const GenusClass& c : g.classes) mass += Rat(1, c.aut_order);
  CHECK(mass == Rat(5, 24));
}

TEST_CASE("genus classes are canonical, embedded, pairwise non-isometric", "[genus]") {
  for (auto [N, D] : std::vector<std::pair<i64, i64>>{{11, 11}, {105, 105}, {105, 3}}) {
    Genus g = build_genus(N, D);
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
      const GenusClass& c = g.classes[i];
      CHECK(gram_in_seed(g.T0, c.lat.num, c.lat.den) == c.lat.gram);
      CHECK(canonical_reduce(c.lat.gram).gram == c.lat.gram);
      CHECK(c.aut_order == 2 * static_cast<i64>(c.rotations.size()));
      for (const Mat3<i64>& U : c.rotations) {
        CHECK(U.det() == 1);
        CHECK(U.transpose() * c.lat.gram * U == c.lat.gram);
      }
      for (std::size_t j = i + 1; j < g.classes.size(); ++j)
        CHECK_FALSE(isometry(g.classes[i].lat.gram, g.classes[j].lat.gram).has_value());
    }
  }
}

TEST_CASE("the class set does not depend on the neighbor prime", "[genus]") {
  TernaryForm seed = find_seed(11, 11);
  Genus a = build_genus(11, 11, seed, 2);
  Genus b = build_genus(11, 11, seed, 3);
  REQUIRE(a.classes.size() == b.classes.size());
  for (std::size_t i = 0; i < a.classes.size(); ++i)
    CHECK(a.classes[i].lat.gram == b.classes[i].lat.gram);
}

TEST_CASE("seed validation rejects mismatched data", "[genus]") {
  TernaryForm f = find_seed(11, 11);
  CHECK_THROWS_AS(validate_seed(12, 3, f), std::invalid_argument);
  CHECK_THROWS_AS(validate_seed(11, 1, f), std::invalid_argument);
  CHECK_THROWS_AS(validate_seed(33, 11, f), std::invalid_argument); // wrong disc
  CHECK_THROWS_AS(validate_seed(11, 11, TernaryForm{1, 1, -1, 0, 0, 0}), std::invalid_argument);
  // right disc, wrong ramification pattern
  TernaryForm g = find_seed(105, 105);
  CHECK_THROWS_AS(validate_seed(105, 3, g), std::invalid_argument);
  CHECK_NOTHROW(validate_seed(105, 105, g));
}

TEST_CASE("every genus in a small sweep closes its mass certificate", "[genus]") {
  // build_genus only terminates when sum 1/#O equals the Eichler mass
  for (i64 N = 3; N <= 99; N += 2) {
    if (!is_squarefree(N)) continue;
    for (i64 D : divisors(N)) {
      if (D == 1 || prime_factors(D).size() % 2 == 0) continue;
      Genus g = build_genus(N, D);
      Rat mass = 0;
      for (const GenusClass& c : g.classes) mass += Rat(1, c.aut_order);
      CHECK(mass == eichler_mass(N, D));
      CHECK(!g.classes.empty());
    }
  }
}
