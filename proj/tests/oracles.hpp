// Reference implementations for tests. Deliberately written as plain loops
// or textbook algorithms that share no code with the library paths they
// check.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "elaa/linalg.hpp"
#include "elaa/rng.hpp"

namespace oracle {

using elaa::CMatrix;
using elaa::CVector;
using elaa::cplx;

inline CVector scalar_matvec(const CMatrix& a, const CVector& x) {
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline cplx scalar_inner(const CVector& x, const CVector& y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline CMatrix scalar_gram(const CMatrix& h) {
  CMatrix a(h.cols(), h.cols());
  for (std::size_t i = 0; i < h.cols(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) {
      cplx s = 0.0;
      for (std::size_t m = 0; m < h.rows(); ++m) s += std::conj(h(m, i)) * h(m, j);
      a(i, j) = s;
    }
  return a;
}

// Gaussian elimination with partial pivoting; independent of the library's
// Cholesky/substitution route.
inline CVector lu_solve(CMatrix a, CVector b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  CVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = b[ii];
    for (std::size_t c = ii + 1; c < n; ++c) s -= a(ii, c) * x[c];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

inline CMatrix lu_inverse(const CMatrix& a) {
  const std::size_t n = a.rows();
  CMatrix inv(n, n);
  CVector e(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const CVector x = lu_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    e[j] = 0.0;
  }
  return inv;
}

inline CMatrix random_matrix(elaa::Rng& rng, std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (cplx& v : m.entries()) v = rng.complex_gaussian();
  return m;
}

inline CVector random_vector(elaa::Rng& rng, std::size_t n) {
  CVector v(n);
  for (cplx& x : v) x = rng.complex_gaussian();
  return v;
}

// Modified Gram-Schmidt on a random matrix.
inline CMatrix random_unitary(elaa::Rng& rng, std::size_t n) {
  CMatrix q = random_matrix(rng, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

// Q diag(eigs) Q^H for a random unitary Q: Hermitian with a chosen spectrum.
inline CMatrix hermitian_with_spectrum(elaa::Rng& rng,
                                       const std::vector<double>& eigs) {
  const std::size_t n = eigs.size();
  const CMatrix q = random_unitary(rng, n);
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += q(i, k) * eigs[k] * std::conj(q(j, k));
      a(i, j) = s;
    }
  // force exact Hermitian symmetry
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
  }
  return a;
}

// Evenly log-spaced values between lo and hi.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    v[i] = lo * std::pow(hi / lo, f);
  }
  return v;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

inline double max_abs_diff(const CVector& a, const CVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace oracle
