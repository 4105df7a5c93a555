#include "qsc/quaternion.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace qsc {

std::ostream& operator<<(std::ostream& os, const Quaternion& x) {
  return os << '(' << x.a << ", " << x.b << ", " << x.c << ", " << x.d << ')';
}

double Complex2x2::max_abs() const {
  double r = 0.0;
  for (const auto& v : m) r = std::max(r, std::abs(v));
  return r;
}

double Complex2x2::frobenius() const {
  double s = 0.0;
  for (const auto& v : m) s += std::norm(v);
  return std::sqrt(s);
}

Complex2x2 operator+(const Complex2x2& x, const Complex2x2& y) {
  return {x.m[0] + y.m[0], x.m[1] + y.m[1], x.m[2] + y.m[2], x.m[3] + y.m[3]};
}

Complex2x2 operator-(const Complex2x2& x, const Complex2x2& y) {
  return {x.m[0] - y.m[0], x.m[1] - y.m[1], x.m[2] - y.m[2], x.m[3] - y.m[3]};
}

Complex2x2 operator*(const Complex2x2& x, const Complex2x2& y) {
  return {x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
          x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]};
}

Complex2x2 operator*(cplx s, const Complex2x2& x) {
  return {s * x.m[0], s * x.m[1], s * x.m[2], s * x.m[3]};
}

std::ostream& operator<<(std::ostream& os, const Complex2x2& x) {
  return os << "[[" << x.m[0] << ", " << x.m[1] << "], [" << x.m[2] << ", " << x.m[3] << "]]";
}

Complex2x2 to_complex(const Quaternion& x) {
  return {cplx(x.a, x.b), cplx(x.c, x.d), cplx(-x.c, x.d), cplx(x.a, -x.b)};
}

double quaternion_shape_residual(const Complex2x2& m) {
  return std::max(std::abs(m.m[0] - std::conj(m.m[3])), std::abs(m.m[1] + std::conj(m.m[2])));
}

Quaternion from_complex(const Complex2x2& m, double tol) {
  const double res = quaternion_shape_residual(m);
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "matrix " << m << " is not quaternion-shaped (residual " << res << ", tol " << tol << ")";
    throw ShapeError(msg.str());
  }
  // Average the redundant entries; exact for images of to_complex.
  const cplx lambda = 0.5 * (m.m[0] + std::conj(m.m[3]));
  const cplx omega = 0.5 * (m.m[1] - std::conj(m.m[2]));
  return {lambda.real(), lambda.imag(), omega.real(), omega.imag()};
}

}  // namespace qsc
