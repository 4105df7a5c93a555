#pragma once

// Independent reference computations used by the tests. None of these share
// code with the library kernels they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qsc/dense.hpp"
#include "qsc/quaternion.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Number of eigenvalues of the Hermitian matrix a strictly below sigma, by
/// Sylvester inertia of the unpivoted LDL^* factorization of a - sigma I.
inline std::size_t count_below(const qsc::CMatrix& a, double sigma) {
  const std::size_t n = a.rows();
  std::vector<cplx> m(a.data().begin(), a.data().end());
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] -= sigma;
  std::size_t neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double d = m[k * n + k].real();
    if (d == 0.0) d = -1e-300;  // nudge an exact zero pivot; sigma is generic in tests
    if (d < 0.0) ++neg;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = m[i * n + k] / d;
      for (std::size_t j = k + 1; j <= i; ++j) m[i * n + j] -= l * std::conj(m[j * n + k]);
    }
  }
  return neg;
}

/// All eigenvalues of a Hermitian matrix by inertia bisection, ascending.
inline std::vector<double> bisection_eigenvalues(const qsc::CMatrix& a, double tol = 1e-12) {
  const std::size_t n = a.rows();
  double r = 0.0;  // Gershgorin radius
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(a(i, j));
    r = std::max(r, s);
  }
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lo = -r - 1.0, hi = r + 1.0;  // count_below(lo) <= k < count_below(hi)
    while (hi - lo > tol * std::max(1.0, r)) {
      const double mid = 0.5 * (lo + hi);
      (count_below(a, mid) > k ? hi : lo) = mid;
    }
    out[k] = 0.5 * (lo + hi);
  }
  return out;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double a, double b, double fa, double fm, double fb, double whole, double eps, int d) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(a, m, fa, flm, fm, left, eps / 2, d - 1) + rec(m, b, fm, frm, fb, right, eps / 2, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// Semicircle density written out independently of the library.
inline double wigner_density(double x) { return std::abs(x) >= 2.0 ? 0.0 : std::sqrt(4.0 - x * x) / (2.0 * M_PI); }

/// Dense complex inverse by LU with partial pivoting (column-oriented, unlike
/// the library's row-wise Gauss-Jordan).
inline qsc::CMatrix lu_inverse(const qsc::CMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<cplx> lu(a.data().begin(), a.data().end());
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu[i * n + k]) > std::abs(lu[p * n + k])) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
      std::swap(piv[k], piv[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      lu[i * n + k] /= lu[k * n + k];
      for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= lu[i * n + k] * lu[k * n + j];
    }
  }
  qsc::CMatrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = piv[i] == c ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu[i * n + j] * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu[i * n + j] * x[j];
      x[i] /= lu[i * n + i];
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = x[i];
  }
  return inv;
}

/// Naive triple-loop product.
inline qsc::CMatrix multiply(const qsc::CMatrix& x, const qsc::CMatrix& y) {
  qsc::CMatrix out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) s += x(i, k) * y(k, j);
      out(i, j) = s;
    }
  return out;
}

inline qsc::CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  qsc::CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = {g(rng), g(rng)};
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline qsc::CMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  qsc::CMatrix m(n, n);
  for (auto& v : m.data()) v = {g(rng), g(rng)};
  return m;
}

inline qsc::Quaternion random_quaternion(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng), g(rng), g(rng)};
}

/// Brute-force Levy distance between two distribution functions: smallest
/// eps on a fine grid for which the band condition holds at every grid x.
inline double levy_grid(const std::function<double(double)>& f, const std::function<double(double)>& g, double lo,
                        double hi, std::size_t grid, double step) {
  for (double eps = 0.0; eps <= 1.0; eps += step) {
    bool ok = true;
    for (std::size_t i = 0; i <= grid && ok; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid);
      ok = g(x - eps) - eps <= f(x) + 1e-15 && f(x) <= g(x + eps) + eps + 1e-15;
    }
    if (ok) return eps;
  }
  return 1.0;
}

}  // namespace oracle
