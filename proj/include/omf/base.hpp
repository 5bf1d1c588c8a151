#pragma once

// Exact integer utilities shared by every module: wide integers, modular
// arithmetic, small-prime machinery, and rational reconstruction.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace omf {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i128 = __int128;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Breach of an internal invariant (never a user-input problem).
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

#define OMF_CHECK(cond, msg) \
  do { \
    if (!(cond)) throw ::omf::internal_error(std::string("invariant: ") + (msg)); \
  } while (0)

inline i64 igcd(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { i64 t = a % b; a = b; b = t; }
  return a;
}

inline i128 igcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { i128 t = a % b; a = b; b = t; }
  return a;
}

// floor(sqrt(n)) for n >= 0.
inline i64 isqrt(i64 n) {
  OMF_CHECK(n >= 0, "isqrt of negative");
  if (n < 2) return n;
  i64 x = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (x > 0 && x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

inline i128 isqrt128(i128 n) {
  OMF_CHECK(n >= 0, "isqrt of negative");
  if (n < 2) return n;
  i128 x = static_cast<i128>(std::sqrt(static_cast<double>(n)));
  while (x > 0 && x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 m) {
  // extended Euclid; m need not be prime but gcd(a, m) must be 1
  i64 t = 0, nt = 1;
  i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
  while (nr) {
    i64 q = r / nr;
    i64 tmp = t - q * nt; t = nt; nt = tmp;
    tmp = r - q * nr; r = nr; nr = tmp;
  }
  OMF_CHECK(r == 1, "invmod of non-unit");
  if (t < 0) t += static_cast<i64>(m);
  return static_cast<u64>(t);
}

// deterministic Miller-Rabin, exact for all u64
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { comp = false; break; }
    }
    if (comp) return false;
  }
  return true;
}

inline i64 next_prime(i64 n) {
  i64 p = n + 1;
  while (!is_prime_u64(static_cast<u64>(p))) ++p;
  return p;
}

// ascending prime factors, one entry per prime (requires squarefree input
// elsewhere to mean multiplicity one; this just deduplicates)
inline std::vector<i64> prime_factors(i64 n) {
  OMF_CHECK(n > 0, "prime_factors of non-positive");
  std::vector<i64> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// all positive divisors, ascending
inline std::vector<i64> divisors(i64 n) {
  OMF_CHECK(n > 0, "divisors of non-positive");
  std::vector<i64> out;
  for (i64 d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_squarefree(i64 n) {
  if (n <= 0) return false;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % (p * p) == 0) return false;
    while (n % p == 0) n /= p;
  }
  return true;
}

inline int valuation(i64 n, i64 p) {
  OMF_CHECK(n != 0, "valuation of zero");
  int v = 0;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

inline int valuation_big(BigInt n, const BigInt& p) {
  OMF_CHECK(n != 0, "valuation of zero");
  if (n < 0) n = -n;
  int v = 0;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

// Legendre symbol (a|p) for odd prime p: returns -1, 0, or 1.
inline int legendre(i64 a, i64 p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  u64 r = powmod(static_cast<u64>(a), static_cast<u64>((p - 1) / 2), static_cast<u64>(p));
  return r == 1 ? 1 : -1;
}

// Tonelli-Shanks: x with x^2 = a mod p (odd prime p, (a|p) = 1).
inline u64 sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  OMF_CHECK(powmod(a, (p - 1) / 2, p) == 1, "sqrt_mod of non-residue");
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) { q >>= 1; ++s; }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = static_cast<u64>(s);
  u64 c = powmod(z, q, p);
  u64 t = powmod(a, q, p);
  u64 r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 t2 = t;
    u64 i = 0;
    while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
    u64 b = powmod(c, 1ull << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

// Rational reconstruction (Wang): given r mod m find n/d with
// |n|, d <= sqrt(m/2), d > 0, n = r*d mod m. Returns false if none.
inline bool rational_reconstruct(const BigInt& r0, const BigInt& m, BigInt& num, BigInt& den) {
  BigInt half = m / 2;
  BigInt bound = sqrt(half);
  BigInt a = m, b = r0 % m;
  if (b < 0) b += m;
  BigInt x0 = 0, x1 = 1;
  while (b > bound) {
    BigInt q = a / b;
    BigInt t = a - q * b; a = b; b = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
  }
  if (abs(x1) > bound || x1 == 0) return false;
  num = (x1 < 0) ? -b : b;
  den = abs(x1);
  BigInt g = gcd(abs(num), den);
  if (g > 1) return false; // not in lowest terms -> reconstruction unreliable
  return true;
}

// splitmix64: deterministic pseudo-random stream for randomized-but-
// reproducible algorithms (Wiedemann projections, property-test sampling)
struct Rng {
  u64 state;
  explicit Rng(u64 seed) : state(seed) {}
  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  u64 below(u64 n) { return next() % n; }
  // uniform in [lo, hi] inclusive
  i64 range(i64 lo, i64 hi) { return lo + static_cast<i64>(next() % static_cast<u64>(hi - lo + 1)); }
};

inline std::string to_string_i128(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 x = neg ? static_cast<u128>(-v) : static_cast<u128>(v);
  std::string s;
  while (x) { s.push_back(char('0' + int(x % 10))); x /= 10; }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

} // namespace omf
