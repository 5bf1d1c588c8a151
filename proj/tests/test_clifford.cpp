#include "omf/clifford.hpp"

#include "util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace omf;

namespace {

Quat<i128> random_quat(Rng& rng) {
  Quat<i128> x;
  for (int i = 0; i < 4; ++i) x[i] = static_cast<i64>(rng.below(9)) - 4;
  return x;
}

} // namespace

TEST_CASE("even Clifford multiplication is associative and unital", "[clifford]") {
  Rng rng(31);
  for (int it = 0; it < 30; ++it) {
    TernaryForm f = omf_test::random_positive_form(rng);
    Quat<i128> one{1, 0, 0, 0};
    Quat<i128> x = random_quat(rng), y = random_quat(rng), z = random_quat(rng);
    CHECK(qmul(f, one, x) == x);
    CHECK(qmul(f, x, one) == x);
    CHECK(qmul(f, qmul(f, x, y), z) == qmul(f, x, qmul(f, y, z)));
  }
}

TEST_CASE("reduced norm is multiplicative and trace-compatible", "[clifford]") {
  Rng rng(32);
  for (int it = 0; it < 30; ++it) {
    TernaryForm f = omf_test::random_positive_form(rng);
    Quat<i128> x = random_quat(rng), y = random_quat(rng);
    CHECK(reduced_norm(f, qmul(f, x, y)) == reduced_norm(f, x) * reduced_norm(f, y));
    // x satisfies x^2 - trd(x) x + nrd(x) = 0
    Quat<i128> sq = qmul(f, x, x);
    i128 tr = reduced_trace(f, x);
    i128 nr = reduced_norm(f, x);
    Quat<i128> want{tr * x[0] - nr, tr * x[1], tr * x[2], tr * x[3]};
    CHECK(sq == want);
  }
}

TEST_CASE("exterior form inverts the even Clifford construction", "[clifford]") {
  Rng rng(33);
  for (int it = 0; it < 100; ++it) {
    TernaryForm f = omf_test::random_positive_form(rng);
    QuaternionOrder O = even_clifford(f);
    CHECK(exterior_form(O) == f);
    CHECK(reduced_discriminant(O) == i128(discriminant(f)));
  }
}

TEST_CASE("the level 11 order has reduced discriminant 11", "[clifford]") {
  QuaternionOrder O = even_clifford(TernaryForm{1, 1, 3, 0, 1, 0});
  CHECK(reduced_discriminant(O) == 11);
}
