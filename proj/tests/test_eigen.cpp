#include "omf/eigen.hpp"

#include "omf/builder.hpp"
#include "omf/hecke.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace omf;

namespace {

HeckeMatrix diag(i64 p, std::vector<i64> d) {
  HeckeMatrix m;
  m.p = p;
  std::size_t n = d.size();
  m.a.assign(n, std::vector<i64>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m.a[i][i] = d[i];
  return m;
}

std::vector<BigInt> big(std::vector<i64> v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("integer characteristic polynomials via multi-modular lifting", "[eigen]") {
  CHECK(charpoly({{1, 2}, {3, 0}}) == big({-6, -1, 1}));
  CHECK(charpoly({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}) ==
        big({1, -4, 6, -4, 1}));
  CHECK(charpoly({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}) == big({0, 0, 0, 1}));
  // large entries force several working primes
  std::vector<BigInt> want{-BigInt(1000000007) * 1000000007 - 4, BigInt(0), BigInt(1)};
  CHECK(charpoly({{1000000007, 2}, {2, -1000000007}}) == want);
}

TEST_CASE("splitting a commuting diagonal pair yields the coordinate lines", "[eigen]") {
  // eigenvalues stay inside the weight-2 window |a| <= p+1 the splitter scans
  std::vector<HeckeMatrix> mats{diag(2, {1, 1, 2, 3}), diag(3, {4, -4, 0, 2})};
  auto blocks = split_rational(mats);
  REQUIRE(blocks.size() == 4);
  std::vector<std::pair<Rat, Rat>> eigs;
  for (const InvariantBlock& b : blocks) {
    CHECK(b.dimension == 1);
    CHECK(b.refined);
    eigs.emplace_back(b.eigenvalues.at(2), b.eigenvalues.at(3));
    // the eigenvector genuinely lies in both eigenspaces
    int hot = -1;
    for (int i = 0; i < 4; ++i)
      if (b.eigenvector[i] != 0) {
        CHECK(hot == -1);
        hot = i;
      }
    REQUIRE(hot >= 0);
    CHECK(Rat(mats[0].a[hot][hot]) == b.eigenvalues.at(2));
    CHECK(Rat(mats[1].a[hot][hot]) == b.eigenvalues.at(3));
  }
  std::sort(eigs.begin(), eigs.end());
  CHECK(eigs == std::vector<std::pair<Rat, Rat>>{{1, -4}, {1, 4}, {2, 0}, {3, 2}});
}

TEST_CASE("an irrational block stays whole and reports its charpoly", "[eigen]") {
  HeckeMatrix comp;
  comp.p = 2;
  comp.a = {{0, 2}, {1, 0}}; // x^2 - 2
  auto blocks = split_rational({comp});
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].dimension == 2);
  CHECK(blocks[0].refined); // structure fully chased: certified irrational
  CHECK(blocks[0].charpolys.at(2) == big({-2, 0, 1}));
}

TEST_CASE("the level 11 space splits into the cusp form and the Eisenstein line", "[eigen]") {
  Genus g = build_genus(11, 11);
  CharacterSpace cs = supported_classes(g, 1);
  std::vector<HeckeMatrix> mats{hecke_matrix(cs, 2), hecke_matrix(cs, 3), hecke_matrix(cs, 5)};
  auto blocks = split_rational(mats);
  REQUIRE(blocks.size() == 2);
  std::vector<std::vector<Rat>> found;
  for (const InvariantBlock& b : blocks) {
    REQUIRE(b.dimension == 1);
    found.push_back({b.eigenvalues.at(2), b.eigenvalues.at(3), b.eigenvalues.at(5)});
    // exact certificate: T_p v = a_p v in rational arithmetic
    for (const HeckeMatrix& m : mats)
      for (std::size_t i = 0; i < 2; ++i) {
        Rat acc = 0;
        for (std::size_t j = 0; j < 2; ++j) acc += Rat(m.a[i][j]) * b.eigenvector[j];
        CHECK(acc == b.eigenvalues.at(m.p) * b.eigenvector[i]);
      }
  }
  std::sort(found.begin(), found.end());
  CHECK(found[0] == std::vector<Rat>{-2, -1, 1}); // the weight 2 newform
  CHECK(found[1] == std::vector<Rat>{3, 4, 6});   // Eisenstein: p + 1
}

TEST_CASE("eigen_systems reports the cuspidal systems with space labels", "[eigen]") {
  Genus g = build_genus(11, 11);
  auto systems = eigen_systems(g, 1, {2, 3, 5});
  REQUIRE(systems.size() == 1);
  const EigenSystem& e = systems[0];
  CHECK(e.character == 1);
  CHECK(e.dimension == 1);
  CHECK(e.field_degree == 1);
  CHECK(e.eigenvalues.at(2) == Rat(-2));
  CHECK(e.eigenvalues.at(3) == Rat(-1));
  CHECK(e.eigenvalues.at(5) == Rat(1));
  CHECK(e.space == "S2^{11-new}(Gamma0(11)) with w_11 = -1");
  CHECK(eigen_systems(g, 11, {2, 3, 5}).empty()); // no class supports r = 11

  auto all = all_eigen_systems(g, {2, 3, 5});
  REQUIRE(all.size() == 2);
  CHECK(all.at(1).size() == 1);
  CHECK(all.at(11).empty());
  CHECK(all.at(1)[0].eigenvalues == e.eigenvalues);
}

TEST_CASE("large diagonal operators take the sparse path", "[eigen]") {
  std::vector<i64> d(400);
  d[0] = 2;
  for (std::size_t i = 1; i < d.size(); ++i) d[i] = static_cast<i64>(i % 2);
  auto blocks = split_rational({diag(2, d)});
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].dimension == 1);
  CHECK(blocks[0].eigenvalues.at(2) == Rat(2));
  CHECK(blocks[0].eigenvector[0] == Rat(1));
  CHECK(blocks[1].dimension == 199);
  CHECK(blocks[2].dimension == 200);
}

TEST_CASE("the sparse path leaves irrational pieces as one unrefined block", "[eigen]") {
  // block diagonal: companion of x^2 - 2, then alternating 0/1 diagonal
  std::size_t n = 330;
  HeckeMatrix m;
  m.p = 2;
  m.a.assign(n, std::vector<i64>(n, 0));
  m.a[0][1] = 2;
  m.a[1][0] = 1;
  for (std::size_t i = 2; i < n; ++i) m.a[i][i] = static_cast<i64>(i % 2);
  auto blocks = split_rational({m});
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].dimension == 2);
  CHECK_FALSE(blocks[0].refined);
  CHECK(blocks[1].dimension == 164);
  CHECK(blocks[2].dimension == 164);
  i64 total = 0;
  for (const InvariantBlock& b : blocks) total += b.dimension;
  CHECK(total == static_cast<i64>(n));
}
