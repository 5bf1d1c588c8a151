#include "omf/linalg.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace omf;

TEST_CASE("working primes are distinct 61-bit primes avoiding a given modulus", "[linalg]") {
  auto ps = working_primes(6);
  CHECK(ps.size() == 6);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(is_prime_u64(ps[i]));
    CHECK(ps[i] > (u64(1) << 61));
    for (std::size_t j = i + 1; j < ps.size(); ++j) CHECK(ps[i] != ps[j]);
  }
  auto avoided = working_primes(3, BigInt(ps[0]));
  for (u64 q : avoided) CHECK(q != ps[0]);
}

TEST_CASE("sparse and dense mod-q products agree", "[linalg]") {
  std::vector<std::vector<i64>> A{{1, -2, 0}, {0, 5, 7}, {-3, 0, 11}};
  u64 q = working_primes(1)[0];
  SparseModMat S = SparseModMat::reduce(A, q);
  DenseMod D = DenseMod::reduce(A, q);
  std::vector<u64> x{4, 9, 2}, ys(3), yd(3);
  S.apply(x, ys);
  for (int i = 0; i < 3; ++i) {
    u64 acc = 0;
    for (int j = 0; j < 3; ++j) acc = (acc + mulmod(D.at(i, j), x[j], q)) % q;
    yd[i] = acc;
  }
  CHECK(ys == yd);
}

TEST_CASE("row reduction exposes rank and nullspace", "[linalg]") {
  u64 q = working_primes(1)[0];
  // rank 2: third row is the sum of the first two
  std::vector<std::vector<i64>> A{{1, 2, 3}, {0, 1, 4}, {1, 3, 7}};
  DenseMod D = DenseMod::reduce(A, q);
  auto pivots = rref(D);
  CHECK(pivots.size() == 2);
  auto ker = nullspace(DenseMod::reduce(A, q));
  REQUIRE(ker.size() == 1);
  for (int i = 0; i < 3; ++i) {
    u64 acc = 0;
    for (int j = 0; j < 3; ++j) acc = (acc + mulmod(mod_of_i64(A[i][j], q), ker[0][j], q)) % q;
    CHECK(acc == 0);
  }
}

TEST_CASE("determinant matches the charpoly constant term", "[linalg]") {
  u64 q = working_primes(1)[0];
  std::vector<std::vector<i64>> A{{2, 1, 0}, {1, 3, -1}, {0, -1, 4}};
  DenseMod D = DenseMod::reduce(A, q);
  auto cp = hessenberg_charpoly(DenseMod::reduce(A, q), q);
  REQUIRE(cp.size() == 4);
  CHECK(cp[3] == 1); // monic, ascending coefficients
  u64 det = det_mod(D);
  // det = (-1)^n * cp[0]
  CHECK(det == (q - cp[0]) % q);
  // integer oracle: det = 2*(12-1) - 1*(4-0) = 18
  CHECK(det == 18);
}

TEST_CASE("Hessenberg charpoly on closed-form fixtures", "[linalg]") {
  u64 q = working_primes(1)[0];
  auto cp = hessenberg_charpoly(DenseMod::reduce({{1, 2}, {3, 0}}, q), q);
  // x^2 - x - 6
  CHECK(cp == std::vector<u64>{q - 6, q - 1, 1});
  // companion matrix of (x^2-2)(x^2-3) = x^4 - 5x^2 + 6
  std::vector<std::vector<i64>> comp{{0, 0, 0, -6}, {1, 0, 0, 0}, {0, 1, 0, 5}, {0, 0, 1, 0}};
  cp = hessenberg_charpoly(DenseMod::reduce(comp, q), q);
  CHECK(cp == std::vector<u64>{6, 0, q - 5, 0, 1});
}

TEST_CASE("Berlekamp-Massey recovers a linear recurrence", "[linalg]") {
  u64 q = working_primes(1)[0];
  std::vector<u64> fib{0, 1};
  for (int i = 2; i < 12; ++i) fib.push_back((fib[i - 1] + fib[i - 2]) % q);
  auto mu = berlekamp_massey(fib, q);
  // minimal connection: x^2 - x - 1
  CHECK(mu == std::vector<u64>{q - 1, q - 1, 1});
}

TEST_CASE("Wiedemann finds the minimal polynomial of a sparse operator", "[linalg]") {
  u64 q = working_primes(1)[0];
  std::vector<std::vector<i64>> A{{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 3}};
  SparseModMat S = SparseModMat::reduce(A, q);
  Rng rng(99);
  auto apply = [&](const std::vector<u64>& x, std::vector<u64>& y) { S.apply(x, y); };
  auto mu = wiedemann_minpoly(apply, 4, q, rng);
  // (x-1)(x-2)(x-3), degree 3 despite the repeated eigenvalue
  REQUIRE(mu.size() == 4);
  for (u64 root : {1, 2, 3}) CHECK(eval_poly(mu, root, q) == 0);
  auto quot = deflate(mu, 2, q);
  CHECK(eval_poly(quot, 2, q) != 0);
}

TEST_CASE("span basis solves coordinates and rejects outside vectors", "[linalg]") {
  u64 q = working_primes(1)[0];
  std::vector<std::vector<u64>> cols{{1, 0, 2}, {0, 1, 3}};
  SpanBasis B(cols, q);
  CHECK(B.k == 2);
  std::vector<u64> y(3);
  for (int i = 0; i < 3; ++i) y[i] = (5 * cols[0][i] + 7 * cols[1][i]) % q;
  auto c = B.coords(y);
  CHECK(c == std::vector<u64>{5, 7});
  std::vector<u64> out{0, 0, 1}; // not in the span
  CHECK_THROWS_AS(B.coords(out), internal_error);
}

TEST_CASE("balanced CRT reconstructs small signed integers", "[linalg]") {
  auto ps = working_primes(2);
  i64 value = -17;
  std::vector<u64> res;
  for (u64 q : ps) res.push_back(mod_of_i64(value, q));
  CHECK(crt_balanced(res, ps) == BigInt(-17));
  std::vector<u64> res2;
  for (u64 q : ps) res2.push_back(mod_of_i64(123456789, q));
  CHECK(crt_balanced(res2, ps) == BigInt(123456789));
}

TEST_CASE("polynomial evaluation of an operator matches explicit expansion", "[linalg]") {
  u64 q = working_primes(1)[0];
  std::vector<std::vector<i64>> A{{1, 1}, {0, 2}};
  SparseModMat S = SparseModMat::reduce(A, q);
  auto apply = [&](const std::vector<u64>& x, std::vector<u64>& y) { S.apply(x, y); };
  // g(A) v with g = x^2 - 3x + 2 = (x-1)(x-2) kills everything
  std::vector<u64> g{2, q - 3, 1};
  std::vector<u64> v{5, 9};
  auto w = poly_apply(apply, g, v, q);
  CHECK(w == std::vector<u64>{0, 0});
}
