#pragma once

// Fixed-size 3x3 exact linear algebra: the coordinate layer every lattice
// operation sits on. Conventions: vectors are columns, bases are matrices
// whose COLUMNS are basis vectors, Grams transform as B^T G B.

#include "omf/base.hpp"

namespace omf {

template <class T>
struct Vec3 {
  T v[3]{};
  T& operator[](int i) { return v[i]; }
  const T& operator[](int i) const { return v[i]; }
  bool operator==(const Vec3&) const = default;
  Vec3 operator+(const Vec3& o) const { return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}; }
  Vec3 operator-(const Vec3& o) const { return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}; }
  Vec3 operator-() const { return {-v[0], -v[1], -v[2]}; }
  Vec3 operator*(const T& s) const { return {v[0] * s, v[1] * s, v[2] * s}; }
  bool is_zero() const { return v[0] == 0 && v[1] == 0 && v[2] == 0; }
};

template <class T>
struct Mat3 {
  T a[3][3]{};
  T* operator[](int i) { return a[i]; }
  const T* operator[](int i) const { return a[i]; }
  bool operator==(const Mat3&) const = default;

  static Mat3 identity() {
    Mat3 m;
    m.a[0][0] = m.a[1][1] = m.a[2][2] = 1;
    return m;
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s = a[i][0] * o.a[0][j];
        s += a[i][1] * o.a[1][j];
        s += a[i][2] * o.a[2][j];
        r.a[i][j] = s;
      }
    return r;
  }

  Vec3<T> operator*(const Vec3<T>& x) const {
    Vec3<T> r;
    for (int i = 0; i < 3; ++i) r[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
    return r;
  }

  Mat3 operator-() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = -a[i][j];
    return r;
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = a[j][i];
    return r;
  }

  T det() const {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  // adjugate: adj(M) * M = det(M) * I
  Mat3 adjugate() const {
    Mat3 r;
    r.a[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    r.a[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
    r.a[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
    r.a[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    r.a[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
    r.a[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
    r.a[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    r.a[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
    r.a[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return r;
  }

  T trace() const { return a[0][0] + a[1][1] + a[2][2]; }

  Vec3<T> col(int j) const { return {a[0][j], a[1][j], a[2][j]}; }
  void set_col(int j, const Vec3<T>& x) {
    a[0][j] = x[0];
    a[1][j] = x[1];
    a[2][j] = x[2];
  }
};

template <class To, class From>
inline Mat3<To> mat_cast(const Mat3<From>& m) {
  Mat3<To> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = static_cast<To>(m[i][j]);
  return r;
}

template <class To, class From>
inline Vec3<To> vec_cast(const Vec3<From>& v) {
  return {static_cast<To>(v[0]), static_cast<To>(v[1]), static_cast<To>(v[2])};
}

inline Vec3<i128> cross(const Vec3<i128>& a, const Vec3<i128>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
inline T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// value of the symmetric Gram pairing x^T G y
template <class T>
inline T pair_in(const Mat3<T>& G, const Vec3<T>& x, const Vec3<T>& y) {
  T s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += x[i] * G[i][j] * y[j];
  return s;
}

inline i128 absval(i128 x) { return x < 0 ? -x : x; }

// Column-style Hermite form of a full-rank 3xK generator matrix: returns a
// 3x3 basis of the generated lattice (integer column operations only).
inline Mat3<i128> hnf_columns(std::vector<Vec3<i128>> cols) {
  Mat3<i128> H;
  int pivot_col = 0;
  for (int row = 0; row < 3 && pivot_col < 3; ++row) {
    // gcd-eliminate all columns beyond pivot_col at this row
    while (true) {
      int best = -1;
      for (size_t c = pivot_col; c < cols.size(); ++c) {
        if (cols[c][row] != 0 && (best < 0 || absval(cols[c][row]) < absval(cols[best][row])))
          best = static_cast<int>(c);
      }
      if (best < 0) break; // row identically zero beyond pivot
      std::swap(cols[pivot_col], cols[best]);
      bool done = true;
      for (size_t c = pivot_col + 1; c < cols.size(); ++c) {
        if (cols[c][row] == 0) continue;
        i128 q = cols[c][row] / cols[pivot_col][row];
        cols[c] = cols[c] - cols[pivot_col] * q;
        if (cols[c][row] != 0) done = false;
      }
      if (done) break;
    }
    if (static_cast<size_t>(pivot_col) < cols.size() && cols[pivot_col][row] != 0) {
      if (cols[pivot_col][row] < 0) cols[pivot_col] = -cols[pivot_col];
      ++pivot_col;
    }
  }
  OMF_CHECK(pivot_col == 3, "hnf_columns: generators not full rank");
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) H[i][j] = cols[j][i];
  return H;
}

// Smith normal form diagonal (d1 | d2 | d3) of an integer 3x3 matrix.
inline std::array<i128, 3> snf_diagonal(Mat3<i128> m) {
  std::array<i128, 3> d{0, 0, 0};
  for (int t = 0; t < 3; ++t) {
    while (true) {
      int bi = -1, bj = -1;
      for (int i = t; i < 3; ++i)
        for (int j = t; j < 3; ++j)
          if (m[i][j] != 0 && (bi < 0 || absval(m[i][j]) < absval(m[bi][bj]))) { bi = i; bj = j; }
      if (bi < 0) break;
      // move pivot to (t,t)
      for (int j = 0; j < 3; ++j) std::swap(m[bi][j], m[t][j]);
      for (int i = 0; i < 3; ++i) std::swap(m[i][bj], m[i][t]);
      bool clean = true;
      for (int i = t + 1; i < 3; ++i)
        if (m[i][t] != 0) {
          i128 q = m[i][t] / m[t][t];
          for (int j = t; j < 3; ++j) m[i][j] -= q * m[t][j];
          if (m[i][t] != 0) clean = false;
        }
      for (int j = t + 1; j < 3; ++j)
        if (m[t][j] != 0) {
          i128 q = m[t][j] / m[t][t];
          for (int i = t; i < 3; ++i) m[i][j] -= q * m[i][t];
          if (m[t][j] != 0) clean = false;
        }
      if (clean) break;
    }
    d[t] = absval(m[t][t]);
  }
  // enforce divisibility chain
  for (int pass = 0; pass < 3; ++pass)
    for (int i = 0; i + 1 < 3; ++i)
      if (d[i] != 0 && d[i + 1] % d[i] != 0) {
        i128 g = igcd128(d[i], d[i + 1]);
        i128 l = d[i] / g * d[i + 1];
        d[i] = g;
        d[i + 1] = l;
      }
  return d;
}

} // namespace omf
