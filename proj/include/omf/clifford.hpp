#pragma once

// Even Clifford algebra of a ternary quadratic form, as a quaternion ring
// with basis 1, i, j, k over the integers.
//
// For f = (a,b,c,u,v,w) the generators are i = e2 e3, j = e3 e1, k = e1 e2
// inside the full Clifford algebra of f, which forces
//   i^2 = u i - bc,   j^2 = v j - ac,   k^2 = w k - ab,
//   ij = c(w - k),    jk = a(u - i),    ki = b(v - j),
//   ji = v i + u j + c k - uv,
//   kj = a i + w j + v k - vw,
//   ik = w i + b j + u k - uw.
// The reduced discriminant of this order equals the half-discriminant of f,
// and the form is recovered from the order by the exterior quadratic map
// psi(x ^ y) = -det[coords(1); x; y; xy] on (O/Z) ^ (O/Z).

#include "omf/forms.hpp"

#include <array>

namespace omf {

template <class T>
using Quat = std::array<T, 4>; // x0 + x1 i + x2 j + x3 k

struct QuaternionOrder {
  TernaryForm form; // structure constants are read off the form
};

inline QuaternionOrder even_clifford(const TernaryForm& f) { return QuaternionOrder{f}; }

template <class T>
inline Quat<T> qmul(const TernaryForm& f, const Quat<T>& x, const Quat<T>& y) {
  const T a = T(f.a), b = T(f.b), c = T(f.c), u = T(f.u), v = T(f.v), w = T(f.w);
  // table[s][t] = product of basis vectors i_{s+1} * i_{t+1}, s,t in {0,1,2}
  const Quat<T> table[3][3] = {
      {{-b * c, u, T(0), T(0)}, {c * w, T(0), T(0), -c}, {-u * w, w, b, u}},
      {{-u * v, v, u, c}, {-a * c, T(0), v, T(0)}, {a * u, -a, T(0), T(0)}},
      {{b * v, T(0), -b, T(0)}, {-v * w, a, w, v}, {-a * b, T(0), T(0), w}}};
  Quat<T> r{x[0] * y[0], T(0), T(0), T(0)};
  for (int s = 0; s < 3; ++s) {
    r[s + 1] += x[0] * y[s + 1] + x[s + 1] * y[0];
    for (int t = 0; t < 3; ++t) {
      T m = x[s + 1] * y[t + 1];
      for (int d = 0; d < 4; ++d) r[d] += m * table[s][t][d];
    }
  }
  return r;
}

template <class T>
inline T reduced_trace(const TernaryForm& f, const Quat<T>& x) {
  return T(2) * x[0] + T(f.u) * x[1] + T(f.v) * x[2] + T(f.w) * x[3];
}

template <class T>
inline Quat<T> conjugate(const TernaryForm& f, const Quat<T>& x) {
  return Quat<T>{reduced_trace(f, x) - x[0], -x[1], -x[2], -x[3]};
}

template <class T>
inline T reduced_norm(const TernaryForm& f, const Quat<T>& x) {
  Quat<T> p = qmul(f, x, conjugate(f, x));
  OMF_CHECK(p[1] == T(0) && p[2] == T(0) && p[3] == T(0), "reduced norm not scalar");
  return p[0];
}

// det of the 4x4 trace pairing trd(b_s b_t); equals -(reduced discriminant)^2
inline i128 trace_pairing_det(const TernaryForm& f) {
  Quat<i128> basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  i128 M[4][4];
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) M[s][t] = reduced_trace(f, qmul(f, basis[s], basis[t]));
  // 4x4 determinant by cofactor expansion
  auto det3 = [](i128 m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  i128 d = 0;
  for (int c0 = 0; c0 < 4; ++c0) {
    i128 sub[3][3];
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c1 = 0; c1 < 4; ++c1) {
        if (c1 == c0) continue;
        sub[r - 1][cc++] = M[r][c1];
      }
    }
    i128 term = M[0][c0] * det3(sub);
    d += (c0 % 2 == 0) ? term : -term;
  }
  return d;
}

inline i128 reduced_discriminant(const QuaternionOrder& O) {
  i128 d = trace_pairing_det(O.form);
  OMF_CHECK(d < 0, "trace pairing determinant must be negative");
  i128 r = isqrt128(-d);
  OMF_CHECK(r * r == -d, "trace pairing determinant not minus a square");
  return r;
}

namespace detail {

// psi(x ^ y) = -det of rows coords(1), coords(x), coords(y), coords(xy);
// invariant under x -> x + s, y -> y + t for scalars s, t.
inline i128 psi(const TernaryForm& f, const Quat<i128>& x, const Quat<i128>& y) {
  Quat<i128> xy = qmul(f, x, y);
  i128 m[3][3];
  for (int c = 0; c < 3; ++c) {
    m[0][c] = x[c + 1];
    m[1][c] = y[c + 1];
    m[2][c] = xy[c + 1];
  }
  // expanding the 4x4 along the first row (1,0,0,0) leaves the minor in
  // coordinates 1..3 of the other rows
  i128 d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return -d3;
}

} // namespace detail

// Recovers the ternary form from the order: quadratic map on wedges with
// basis (j^k, k^i, i^j).
inline TernaryForm exterior_form(const QuaternionOrder& O) {
  using detail::psi;
  const TernaryForm& f = O.form;
  Quat<i128> qi{0, 1, 0, 0}, qj{0, 0, 1, 0}, qk{0, 0, 0, 1};
  auto sub = [](const Quat<i128>& p, const Quat<i128>& q) {
    return Quat<i128>{p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]};
  };
  i128 a = psi(f, qj, qk);
  i128 b = psi(f, qk, qi);
  i128 c = psi(f, qi, qj);
  i128 u = psi(f, qi, sub(qj, qk)) - b - c; // wedge (0,1,1)
  i128 v = psi(f, qj, sub(qk, qi)) - a - c; // wedge (1,0,1)
  i128 w = psi(f, qk, sub(qi, qj)) - a - b; // wedge (1,1,0)
  return TernaryForm{static_cast<i64>(a), static_cast<i64>(b), static_cast<i64>(c),
                     static_cast<i64>(u), static_cast<i64>(v), static_cast<i64>(w)};
}

} // namespace omf
