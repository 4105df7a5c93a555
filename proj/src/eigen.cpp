#include "qsc/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsc {

Tridiagonal householder_tridiagonalize(CMatrix a) {
  const std::size_t n = a.rows();
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  if (n == 0) return t;

  std::vector<cplx> u(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // trailing size
    const std::size_t base = k + 1;

    double xnorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = a(base + i, k);
      xnorm2 += std::norm(u[i]);
    }
    t.diag[k] = a(k, k).real();
    const double xnorm = std::sqrt(xnorm2);
    t.offdiag[k] = xnorm;

    double tail2 = xnorm2 - std::norm(u[0]);
    if (xnorm == 0.0 || tail2 == 0.0) continue;  // already reduced (phase handled by |.|)

    const double x0abs = std::abs(u[0]);
    const cplx phase = x0abs > 0.0 ? u[0] / x0abs : cplx(1.0, 0.0);
    u[0] += phase * xnorm;
    const double beta = 1.0 / (xnorm2 + xnorm * x0abs);  // 2 / (u^* u)

    // p = beta * B * u using the lower triangle of B.
    std::fill_n(p.begin(), m, cplx{});
    for (std::size_t i = 0; i < m; ++i) {
      const cplx* row = &a(base + i, base);
      const cplx ui = u[i];
      cplx s{};
      for (std::size_t j = 0; j < i; ++j) {
        s += row[j] * u[j];
        p[j] += std::conj(row[j]) * ui;
      }
      p[i] += s + row[i].real() * ui;
    }
    cplx upk{};
    for (std::size_t i = 0; i < m; ++i) {
      p[i] *= beta;
      upk += std::conj(u[i]) * p[i];
    }
    const double kappa = 0.5 * beta * upk.real();
    for (std::size_t i = 0; i < m; ++i) p[i] -= kappa * u[i];  // p now holds q

    // B -= u q^* + q u^*, lower triangle only.
    for (std::size_t i = 0; i < m; ++i) {
      cplx* row = &a(base + i, base);
      const cplx ui = u[i];
      const cplx qi = p[i];
      for (std::size_t j = 0; j <= i; ++j) row[j] -= ui * std::conj(p[j]) + qi * std::conj(u[j]);
    }
  }

  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2).real();
    t.offdiag[n - 2] = std::abs(a(n - 1, n - 2));
  }
  t.diag[n - 1] = a(n - 1, n - 1).real();
  return t;
}

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
  auto& d = t.diag;
  const int n = static_cast<int>(d.size());
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60 * n) throw Error("tridiagonal_eigenvalues: QL iteration did not converge");

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool deflated = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> hermitian_eigenvalues_dense(const CMatrix& a) {
  if (!a.square()) throw ShapeError("hermitian_eigenvalues_dense: matrix is not square");
  return tridiagonal_eigenvalues(householder_tridiagonalize(a));
}

std::vector<std::vector<double>> eigenvalues_batch(std::span<const CMatrix> mats, Exec exec) {
  std::vector<std::vector<double>> out(mats.size());
  const auto count = static_cast<std::ptrdiff_t>(mats.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = hermitian_eigenvalues_dense(mats[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = hermitian_eigenvalues_dense(mats[i]);
  }
  return out;
}

}  // namespace qsc
