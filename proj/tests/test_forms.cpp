#include "omf/forms.hpp"

#include "util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace omf;

TEST_CASE("gram matrix has doubled diagonal and the cross terms off it", "[forms]") {
  TernaryForm f{1, 1, 3, 0, 1, 0}; // x^2 + y^2 + 3z^2 + xz
  Mat3<i64> t = gram(f);
  CHECK(t[0][0] == 2);
  CHECK(t[1][1] == 2);
  CHECK(t[2][2] == 6);
  CHECK(t[0][2] == 1);
  CHECK(t[2][0] == 1);
  CHECK(t[0][1] == 0);
  CHECK(form_of_gram(t) == f);
}

TEST_CASE("discriminant is half the Gram determinant", "[forms]") {
  CHECK(discriminant(TernaryForm{1, 1, 3, 0, 1, 0}) == 11);
  // x^2 + 187 y^2 + 1467 z^2 - 187 yz: the five-prime worked level
  CHECK(discriminant(TernaryForm{1, 187, 1467, -187, 0, 0}) == 1062347);
  CHECK(discriminant(TernaryForm{1, 1, 1, 0, 0, 0}) == 4);
}

TEST_CASE("evaluate agrees with the Gram pairing", "[forms]") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    TernaryForm f = omf_test::random_positive_form(rng);
    Mat3<i64> t = gram(f);
    Vec3<i64> x{static_cast<i64>(rng.below(9)) - 4, static_cast<i64>(rng.below(9)) - 4,
                static_cast<i64>(rng.below(9)) - 4};
    CHECK(2 * evaluate(f, x) == pair_in(t, x, x));
  }
}

TEST_CASE("transform composes Grams and preserves the discriminant", "[forms]") {
  Rng rng(11);
  TernaryForm f{1, 1, 3, 0, 1, 0};
  for (int it = 0; it < 100; ++it) {
    Mat3<i64> U = omf_test::random_unimodular(rng);
    TernaryForm g = transform(f, U);
    CHECK(gram(g) == U.transpose() * gram(f) * U);
    CHECK(discriminant(g) == 11);
    CHECK(is_positive_definite(g));
  }
}

TEST_CASE("positive definiteness matches the leading-minor criterion", "[forms]") {
  CHECK(is_positive_definite(TernaryForm{1, 1, 3, 0, 1, 0}));
  CHECK_FALSE(is_positive_definite(TernaryForm{1, 1, -1, 0, 0, 0}));
  CHECK_FALSE(is_positive_definite(TernaryForm{0, 1, 1, 0, 0, 0}));
  CHECK_FALSE(is_positive_definite(TernaryForm{1, 1, 1, 4, 0, 0})); // 4yz dominates
}

TEST_CASE("radical vector spans the kernel of the Gram matrix mod an inert prime", "[forms]") {
  TernaryForm f{1, 1, 3, 0, 1, 0};
  i64 p = 11;
  Vec3<i64> z = radical_vector(f, p);
  CHECK_FALSE((z[0] % p == 0 && z[1] % p == 0 && z[2] % p == 0));
  Vec3<i64> tz = gram(f) * z;
  for (int i = 0; i < 3; ++i) CHECK(tz[i] % p == 0);
}

TEST_CASE("local split type is a class invariant", "[forms]") {
  TernaryForm f{1, 1, 3, 0, 1, 0}; // disc 11, inert at 11 by construction
  CHECK(local_split_type(f, 11) == SplitType::Inert);
  Rng rng(13);
  for (int it = 0; it < 40; ++it) {
    TernaryForm g = transform(f, omf_test::random_unimodular(rng));
    CHECK(local_split_type(g, 11) == SplitType::Inert);
    Vec3<i64> z = radical_vector(g, 11);
    Vec3<i64> tz = gram(g) * z;
    for (int i = 0; i < 3; ++i) CHECK(tz[i] % 11 == 0);
  }
  CHECK_THROWS_AS(local_split_type(f, 3), std::invalid_argument);
}
