#pragma once

// Shared test fixtures: deterministic random matrices and forms, and a small
// corpus of (level, disc) pairs covering split and inert primes.

#include "omf/base.hpp"
#include "omf/forms.hpp"
#include "omf/mat3.hpp"

#include <utility>
#include <vector>

namespace omf_test {

using omf::i64;
using omf::Mat3;
using omf::Rng;
using omf::TernaryForm;

// product of row shears and signed swaps; det is +-1
inline Mat3<i64> random_unimodular(Rng& rng, int steps = 8) {
  Mat3<i64> U = Mat3<i64>::identity();
  for (int s = 0; s < steps; ++s) {
    int i = static_cast<int>(rng.below(3));
    int j = static_cast<int>(rng.below(3));
    if (i == j) {
      int k = (j + 1) % 3;
      for (int c = 0; c < 3; ++c) std::swap(U[j][c], U[k][c]);
      for (int c = 0; c < 3; ++c) U[j][c] = -U[j][c];
      continue;
    }
    i64 m = static_cast<i64>(rng.below(7)) - 3;
    for (int c = 0; c < 3; ++c) U[i][c] += m * U[j][c];
  }
  return U;
}

inline TernaryForm random_positive_form(Rng& rng) {
  for (;;) {
    TernaryForm f;
    f.a = 1 + static_cast<i64>(rng.below(9));
    f.b = 1 + static_cast<i64>(rng.below(9));
    f.c = 1 + static_cast<i64>(rng.below(9));
    f.u = static_cast<i64>(rng.below(7)) - 3;
    f.v = static_cast<i64>(rng.below(7)) - 3;
    f.w = static_cast<i64>(rng.below(7)) - 3;
    if (omf::is_positive_definite(f)) return f;
  }
}

// levels with one to three primes, both D = N and proper divisors
inline std::vector<std::pair<i64, i64>> corpus() {
  return {{11, 11}, {13, 13}, {23, 23},  {37, 37},   {15, 3},    {15, 5},
          {33, 11}, {35, 7},  {105, 105}, {105, 3},  {165, 165}, {231, 231}};
}

} // namespace omf_test
