#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qsc/errors.hpp"

namespace qsc {

using cplx = std::complex<double>;

/// Which variant of a data-parallel kernel to run. `serial` is the reference
/// implementation kept for testing; `parallel` distributes independent rows
/// (or trials) over OpenMP threads and produces bitwise-identical results.
enum class Exec { serial, parallel };

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  CMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  double frobenius() const;

  /// Copy of rows [r0, r0+nr) x cols [c0, c0+nc).
  CMatrix slice(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;
  void paste(std::size_t r0, std::size_t c0, const CMatrix& src);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator-(const CMatrix& x, const CMatrix& y);
CMatrix operator*(cplx s, const CMatrix& x);

/// Largest |x_ij - y_ij|.
double max_abs_diff(const CMatrix& x, const CMatrix& y);

/// Largest |m_ij - conj(m_ji)|.
double hermitian_residual(const CMatrix& m);

namespace kernels {

CMatrix matmul(const CMatrix& x, const CMatrix& y, Exec exec = Exec::parallel);

/// Gauss-Jordan inversion with partial pivoting. Throws SingularError on a
/// zero or non-finite pivot.
CMatrix invert(const CMatrix& m, Exec exec = Exec::parallel);

/// m - z*I.
CMatrix shift_diagonal(const CMatrix& m, cplx z);

}  // namespace kernels

/// Singular values extremes via the eigenvalues of m^* m.
double smallest_singular_value(const CMatrix& m);
double spectral_norm(const CMatrix& m);

}  // namespace qsc
