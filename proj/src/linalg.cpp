#include "elaa/linalg.hpp"

#include <cmath>
#include <string>

namespace elaa {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": matrix is " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     ", expected square");
  }
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix eye(n, n);
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

CVector matvec(const CMatrix& a, const CVector& x, MacCounter* mac) {
  require_same_size(a.cols(), x.size(), "matvec");
  CVector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * x[c];
    y[r] = acc;
  }
  if (mac) mac->charge(static_cast<std::uint64_t>(a.rows()) * a.cols());
  return y;
}

cplx inner(const CVector& x, const CVector& y, MacCounter* mac) {
  require_same_size(x.size(), y.size(), "inner");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  if (mac) mac->charge(x.size());
  return acc;
}

double vec_norm(const CVector& x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += std::norm(v);
  return std::sqrt(acc);
}

double fro_norm(const CMatrix& a) {
  double acc = 0.0;
  for (const cplx& v : a.entries()) acc += std::norm(v);
  return std::sqrt(acc);
}

CMatrix conj_transpose(const CMatrix& a) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = std::conj(a(r, c));
  return t;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  require_same_size(a.cols(), b.rows(), "matmul");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix gram(const CMatrix& h) {
  const std::size_t n = h.cols();
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t m = 0; m < h.rows(); ++m)
        acc += std::conj(h(m, i)) * h(m, j);
      if (i == j) {
        a(i, i) = acc.real();
      } else {
        a(i, j) = acc;
        a(j, i) = std::conj(acc);
      }
    }
  }
  return a;
}

bool is_hermitian(const CMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  double diff = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      diff += std::norm(a(r, c) - std::conj(a(c, r)));
  const double scale = fro_norm(a);
  if (scale == 0.0) return true;
  return std::sqrt(diff) <= rel_tol * scale;
}

CMatrix hermitian_part(const CMatrix& a) {
  require_square(a, "hermitian_part");
  CMatrix h(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      h(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
    h(r, r) = h(r, r).real();
  }
  return h;
}

CMatrix hermitian_cholesky(const CMatrix& a) {
  require_square(a, "hermitian_cholesky");
  if (!is_hermitian(a)) {
    throw ShapeError("hermitian_cholesky: matrix is not Hermitian within tolerance");
  }
  const CMatrix h = hermitian_part(a);
  const std::size_t n = h.rows();
  CMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) {
      throw NotPositiveDefinite("hermitian_cholesky: pivot " + std::to_string(j) +
                                " is " + std::to_string(d));
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx acc = h(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

CVector forward_substitute(const CMatrix& lower, const CVector& b,
                           MacCounter* mac) {
  require_square(lower, "forward_substitute");
  require_same_size(lower.rows(), b.size(), "forward_substitute");
  const std::size_t n = b.size();
  CVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = b[i];
    for (std::size_t k = 0; k < i; ++k) acc -= lower(i, k) * y[k];
    const cplx d = lower(i, i);
    if (d == cplx{}) {
      throw SingularTriangular("forward_substitute: zero diagonal at row " +
                               std::to_string(i));
    }
    y[i] = acc / d;
  }
  if (mac) mac->charge(n * (n + 1) / 2);
  return y;
}

CVector back_substitute(const CMatrix& upper, const CVector& b,
                        MacCounter* mac) {
  require_square(upper, "back_substitute");
  require_same_size(upper.rows(), b.size(), "back_substitute");
  const std::size_t n = b.size();
  CVector y(n);
  for (std::size_t ii = n; ii-- > 0;) {
    cplx acc = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= upper(ii, k) * y[k];
    const cplx d = upper(ii, ii);
    if (d == cplx{}) {
      throw SingularTriangular("back_substitute: zero diagonal at row " +
                               std::to_string(ii));
    }
    y[ii] = acc / d;
  }
  if (mac) mac->charge(n * (n + 1) / 2);
  return y;
}

CVector solve_hermitian(const CMatrix& a, const CVector& b) {
  const CMatrix l = hermitian_cholesky(a);
  const CVector y = forward_substitute(l, b);
  return back_substitute(conj_transpose(l), y);
}

CMatrix invert_hermitian(const CMatrix& a) {
  const CMatrix l = hermitian_cholesky(a);
  const CMatrix lh = conj_transpose(l);
  const std::size_t n = a.rows();
  CMatrix inv(n, n);
  CVector e(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const CVector y = forward_substitute(l, e);
    const CVector x = back_substitute(lh, y);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    e[j] = 0.0;
  }
  return hermitian_part(inv);
}

CVector vec_add(const CVector& x, const CVector& y) {
  require_same_size(x.size(), y.size(), "vec_add");
  CVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

CVector vec_sub(const CVector& x, const CVector& y) {
  require_same_size(x.size(), y.size(), "vec_sub");
  CVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

CVector scaled(const CVector& x, cplx alpha) {
  CVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = alpha * x[i];
  return z;
}

void axpy(cplx alpha, const CVector& x, CVector& y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(const CVector& x) {
  for (const cplx& v : x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

bool all_finite(const CMatrix& a) {
  for (const cplx& v : a.entries())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace elaa
