#pragma once

#include <span>
#include <vector>

#include "qsc/dense.hpp"

namespace qsc {

/// Real symmetric tridiagonal matrix: diag[0..n), offdiag[0..n-1) couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

/// Unitary reduction of a Hermitian matrix to real symmetric tridiagonal form.
///
/// Complex Householder reflectors annihilate each column below the subdiagonal;
/// the resulting complex subdiagonal entries are then rotated to their moduli
/// by a diagonal phase similarity, which leaves the spectrum unchanged. Only
/// the lower triangle of `a` is read.
Tridiagonal householder_tridiagonalize(CMatrix a);

/// Eigenvalues of a symmetric tridiagonal matrix by implicitly shifted QL
/// iteration (Wilkinson-type shift), ascending.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

/// Ascending eigenvalues of a Hermitian matrix. No Hermitian check.
std::vector<double> hermitian_eigenvalues_dense(const CMatrix& a);

/// Independent eigensolves of many matrices; each solve is sequential.
std::vector<std::vector<double>> eigenvalues_batch(std::span<const CMatrix> mats,
                                                   Exec exec = Exec::parallel);

}  // namespace qsc
