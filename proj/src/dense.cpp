#include "qsc/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "qsc/eigen.hpp"

namespace qsc {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double r = 0.0;
  for (const auto& v : data_) r = std::max(r, std::abs(v));
  return r;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

CMatrix CMatrix::slice(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
  CMatrix s(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
  return s;
}

void CMatrix::paste(std::size_t r0, std::size_t c0, const CMatrix& src) {
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  CMatrix r = x;
  auto rd = r.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] += yd[i];
  return r;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  CMatrix r = x;
  auto rd = r.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < rd.size(); ++i) rd[i] -= yd[i];
  return r;
}

CMatrix operator*(cplx s, const CMatrix& x) {
  CMatrix r = x;
  for (auto& v : r.data()) v *= s;
  return r;
}

double max_abs_diff(const CMatrix& x, const CMatrix& y) {
  double r = 0.0;
  auto xd = x.data();
  auto yd = y.data();
  for (std::size_t i = 0; i < xd.size(); ++i) r = std::max(r, std::abs(xd[i] - yd[i]));
  return r;
}

double hermitian_residual(const CMatrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

namespace kernels {

namespace {

void matmul_row(const CMatrix& x, const CMatrix& y, CMatrix& out, std::size_t i) {
  auto orow = out.row(i);
  for (std::size_t k = 0; k < x.cols(); ++k) {
    const cplx xik = x(i, k);
    if (xik == cplx{}) continue;
    auto yrow = y.row(k);
    for (std::size_t j = 0; j < yrow.size(); ++j) orow[j] += xik * yrow[j];
  }
}

// Subtract f * row k from row i (all columns), then set the pivot column.
void eliminate_row(CMatrix& a, std::size_t i, std::size_t k) {
  auto ri = a.row(i);
  auto rk = a.row(k);
  const cplx f = ri[k];
  if (f == cplx{}) return;
  ri[k] = 0.0;
  for (std::size_t j = 0; j < ri.size(); ++j) ri[j] -= f * rk[j];
}

}  // namespace

CMatrix matmul(const CMatrix& x, const CMatrix& y, Exec exec) {
  if (x.cols() != y.rows()) throw ShapeError("matmul: inner dimensions differ");
  CMatrix out(x.rows(), y.cols());
  const auto rows = static_cast<std::ptrdiff_t>(x.rows());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) matmul_row(x, y, out, static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < rows; ++i) matmul_row(x, y, out, static_cast<std::size_t>(i));
  }
  return out;
}

CMatrix invert(const CMatrix& m, Exec exec) {
  if (!m.square()) throw ShapeError("invert: matrix is not square");
  const std::size_t n = m.rows();
  CMatrix a = m;
  std::vector<std::size_t> perm(n);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      std::ostringstream msg;
      msg << "invert: zero pivot in column " << k << " of " << n;
      throw SingularError(msg.str());
    }
    perm[k] = p;
    if (p != k) {
      auto rk = a.row(k);
      auto rp = a.row(p);
      std::swap_ranges(rk.begin(), rk.end(), rp.begin());
    }
    const cplx inv_pivot = 1.0 / a(k, k);
    a(k, k) = 1.0;
    for (auto& v : a.row(k)) v *= inv_pivot;

    const auto rows = static_cast<std::ptrdiff_t>(n);
    const auto kk = static_cast<std::ptrdiff_t>(k);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < rows; ++i)
        if (i != kk) eliminate_row(a, static_cast<std::size_t>(i), k);
    } else {
      for (std::ptrdiff_t i = 0; i < rows; ++i)
        if (i != kk) eliminate_row(a, static_cast<std::size_t>(i), k);
    }
  }

  // Undo the row interchanges as column interchanges, last first.
  for (std::size_t k = n; k-- > 0;) {
    if (perm[k] == k) continue;
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, perm[k]));
  }
  return a;
}

CMatrix shift_diagonal(const CMatrix& m, cplx z) {
  CMatrix r = m;
  for (std::size_t i = 0; i < std::min(r.rows(), r.cols()); ++i) r(i, i) -= z;
  return r;
}

}  // namespace kernels

double smallest_singular_value(const CMatrix& m) {
  const CMatrix gram = kernels::matmul(m.adjoint(), m, Exec::serial);
  const auto eig = hermitian_eigenvalues_dense(gram);
  return eig.empty() ? 0.0 : std::sqrt(std::max(0.0, eig.front()));
}

double spectral_norm(const CMatrix& m) {
  const CMatrix gram = kernels::matmul(m.adjoint(), m, Exec::serial);
  const auto eig = hermitian_eigenvalues_dense(gram);
  return eig.empty() ? 0.0 : std::sqrt(std::max(0.0, eig.back()));
}

}  // namespace qsc
