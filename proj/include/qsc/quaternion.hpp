#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <iosfwd>

#include "qsc/errors.hpp"

namespace qsc {

using cplx = std::complex<double>;

/// Real quaternion a + b*i1 + c*i2 + d*i3.
///
/// The basis obeys i1^2 = i2^2 = i3^2 = -1 and i3 = i1*i2 = -i2*i1 (cyclically),
/// so multiplication is associative but not commutative.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
  constexpr explicit Quaternion(double real) : a(real) {}

  static constexpr Quaternion unit() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i1() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion i2() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion i3() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr bool is_real() const { return b == 0.0 && c == 0.0 && d == 0.0; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    a *= s; b *= s; c *= s; d *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion x, const Quaternion& y) { return x += y; }
constexpr Quaternion operator-(Quaternion x, const Quaternion& y) { return x -= y; }
constexpr Quaternion operator-(const Quaternion& x) { return {-x.a, -x.b, -x.c, -x.d}; }
constexpr Quaternion operator*(Quaternion x, double s) { return x *= s; }
constexpr Quaternion operator*(double s, Quaternion x) { return x *= s; }

/// Hamilton product.
constexpr Quaternion multiply(const Quaternion& x, const Quaternion& y) {
  return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
          x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
          x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
          x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

constexpr Quaternion operator*(const Quaternion& x, const Quaternion& y) { return multiply(x, y); }

constexpr Quaternion conjugate(const Quaternion& x) { return {x.a, -x.b, -x.c, -x.d}; }

constexpr double norm_squared(const Quaternion& x) {
  return x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d;
}

inline double norm(const Quaternion& x) { return std::sqrt(norm_squared(x)); }

std::ostream& operator<<(std::ostream& os, const Quaternion& x);

/// Dense 2x2 complex matrix, row-major: m[0]=(1,1), m[1]=(1,2), m[2]=(2,1), m[3]=(2,2).
struct Complex2x2 {
  std::array<cplx, 4> m{};

  constexpr Complex2x2() = default;
  constexpr Complex2x2(cplx m11, cplx m12, cplx m21, cplx m22) : m{m11, m12, m21, m22} {}

  static constexpr Complex2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Complex2x2 scalar(cplx t) { return {t, 0.0, 0.0, t}; }

  constexpr cplx& operator()(int r, int c) { return m[2 * r + c]; }
  constexpr const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

  cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
  Complex2x2 adjoint() const {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
  }
  Complex2x2 conj() const {
    return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
  }
  Complex2x2 transpose() const { return {m[0], m[2], m[1], m[3]}; }

  /// Largest entrywise modulus.
  double max_abs() const;
  double frobenius() const;

  friend bool operator==(const Complex2x2&, const Complex2x2&) = default;
};

Complex2x2 operator+(const Complex2x2& x, const Complex2x2& y);
Complex2x2 operator-(const Complex2x2& x, const Complex2x2& y);
Complex2x2 operator*(const Complex2x2& x, const Complex2x2& y);
Complex2x2 operator*(cplx s, const Complex2x2& x);

std::ostream& operator<<(std::ostream& os, const Complex2x2& x);

/// [[a+bi, c+di], [-c+di, a-bi]]; a ring isomorphism onto its image.
Complex2x2 to_complex(const Quaternion& x);

/// Deviation of m from the [[l, w], [-conj(w), conj(l)]] shape.
double quaternion_shape_residual(const Complex2x2& m);

inline constexpr double kDefaultShapeTolerance = 1e-9;

/// Left inverse of to_complex. Throws ShapeError when the shape residual exceeds tol.
Quaternion from_complex(const Complex2x2& m, double tol = kDefaultShapeTolerance);

}  // namespace qsc
