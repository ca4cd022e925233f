#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "elaa/errors.hpp"

namespace elaa {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Counts abstract multiply-accumulate operations. One complex multiply (or
// divide) together with the accumulating add counts as one unit; standalone
// additions and copies are free. Routines that accept a MacCounter* charge
// it only when non-null, so preprocessing can reuse the same code uncharged.
struct MacCounter {
  std::uint64_t macs = 0;
  void charge(std::uint64_t n) { macs += n; }
};

// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<cplx>& entries() { return data_; }
  const std::vector<cplx>& entries() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// y = A x. Charges rows*cols.
CVector matvec(const CMatrix& a, const CVector& x, MacCounter* mac = nullptr);

// x^H y (conjugation on the first argument). Charges n.
cplx inner(const CVector& x, const CVector& y, MacCounter* mac = nullptr);

double vec_norm(const CVector& x);
double fro_norm(const CMatrix& a);

CMatrix conj_transpose(const CMatrix& a);
CMatrix matmul(const CMatrix& a, const CMatrix& b);

// H^H H; result is Hermitian with a real diagonal by construction.
CMatrix gram(const CMatrix& h);

bool is_hermitian(const CMatrix& a, double rel_tol = 1e-10);

// (A + A^H) / 2 with the diagonal imaginary parts dropped.
CMatrix hermitian_part(const CMatrix& a);

// Lower-triangular L with real positive diagonal such that L L^H
// reconstructs the Hermitian part of a. The input must be Hermitian within
// a relative Frobenius tolerance of 1e-10 (ShapeError otherwise); it is
// symmetrized before factoring. Throws NotPositiveDefinite when a pivot is
// not strictly positive.
CMatrix hermitian_cholesky(const CMatrix& a);

// Solve L y = b for lower-triangular L. Row i costs i multiplies plus one
// divide, N(N+1)/2 in total. Zero diagonal throws SingularTriangular.
CVector forward_substitute(const CMatrix& lower, const CVector& b,
                           MacCounter* mac = nullptr);

// Solve U y = b for upper-triangular U. Same cost and error contract as
// forward_substitute.
CVector back_substitute(const CMatrix& upper, const CVector& b,
                        MacCounter* mac = nullptr);

// Cholesky solve of A x = b for Hermitian positive definite A.
CVector solve_hermitian(const CMatrix& a, const CVector& b);

// Explicit inverse via Cholesky, symmetrized on output.
CMatrix invert_hermitian(const CMatrix& a);

// Vector helpers. These are free in the accounting model: the solver
// iterations charge scalar*vector work explicitly where a method's cost
// model includes it.
CVector vec_add(const CVector& x, const CVector& y);
CVector vec_sub(const CVector& x, const CVector& y);
CVector scaled(const CVector& x, cplx alpha);
void axpy(cplx alpha, const CVector& x, CVector& y);  // y += alpha * x

bool all_finite(const CVector& x);
bool all_finite(const CMatrix& a);

}  // namespace elaa
