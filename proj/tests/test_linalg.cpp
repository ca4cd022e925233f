#include "elaa/linalg.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace elaa;

TEST_SUITE_BEGIN("linalg");

TEST_CASE("matvec identity and permutation") {
  CMatrix eye = CMatrix::identity(3);
  CVector x = {{1.0, 2.0}, {0.0, 0.0}, {0.0, -1.0}};
  CVector y = matvec(eye, x);
  CHECK(oracle::max_abs_diff(x, y) == 0.0);

  CMatrix perm(2, 2);
  perm(0, 1) = 1.0;
  perm(1, 0) = 1.0;
  CVector ab = {{3.0, 1.0}, {-2.0, 0.5}};
  CVector ba = matvec(perm, ab);
  CHECK(ba[0] == ab[1]);
  CHECK(ba[1] == ab[0]);
}

TEST_CASE("matvec matches a scalar loop and distributes over addition") {
  Rng rng(42);
  const CMatrix a = oracle::random_matrix(rng, 5, 4);
  const CVector x = oracle::random_vector(rng, 4);
  const CVector y = oracle::random_vector(rng, 4);

  CHECK(oracle::max_abs_diff(matvec(a, x), oracle::scalar_matvec(a, x)) == 0.0);

  const CVector lhs = matvec(a, vec_add(x, y));
  const CVector rhs = vec_add(matvec(a, x), matvec(a, y));
  CHECK(oracle::max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("matvec rejects mismatched shapes") {
  CMatrix a(3, 2);
  CVector x(3);
  CHECK_THROWS_AS(matvec(a, x), DimensionError);
}

TEST_CASE("matvec and inner charge their exact operation counts") {
  Rng rng(7);
  const CMatrix a = oracle::random_matrix(rng, 6, 5);
  const CVector x = oracle::random_vector(rng, 5);
  MacCounter mac;
  matvec(a, x, &mac);
  CHECK(mac.macs == 30);
  inner(x, x, &mac);
  CHECK(mac.macs == 35);
}

TEST_CASE("inner conjugates its first argument") {
  CVector e1 = {1.0, 0.0};
  CHECK(inner(e1, e1) == cplx{1.0, 0.0});

  Rng rng(3);
  const CVector x = oracle::random_vector(rng, 6);
  const CVector y = oracle::random_vector(rng, 6);
  const cplx xy = inner(x, y);
  const cplx yx = inner(y, x);
  CHECK(std::abs(xy - std::conj(yx)) < 1e-12);
  CHECK(std::abs(xy - oracle::scalar_inner(x, y)) == 0.0);
}

TEST_CASE("norms agree with scalar accumulation") {
  Rng rng(11);
  const CVector x = oracle::random_vector(rng, 9);
  double acc = 0.0;
  for (const cplx& v : x) acc += std::norm(v);
  CHECK(vec_norm(x) == doctest::Approx(std::sqrt(acc)).epsilon(1e-14));

  const CMatrix a = oracle::random_matrix(rng, 4, 7);
  double facc = 0.0;
  for (const cplx& v : a.entries()) facc += std::norm(v);
  CHECK(fro_norm(a) == doctest::Approx(std::sqrt(facc)).epsilon(1e-14));
}

TEST_CASE("cholesky of identity and of a diagonal matrix") {
  const CMatrix li = hermitian_cholesky(CMatrix::identity(4));
  CHECK(oracle::max_abs_diff(li, CMatrix::identity(4)) == 0.0);

  CMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const CMatrix ld = hermitian_cholesky(d);
  CHECK(ld(0, 0) == cplx{2.0, 0.0});
  CHECK(ld(1, 1) == cplx{3.0, 0.0});
  CHECK(ld(0, 1) == cplx{0.0, 0.0});
  CHECK(ld(1, 0) == cplx{0.0, 0.0});
}

TEST_CASE("cholesky reconstructs a random Gram matrix") {
  Rng rng(19);
  const CMatrix h = oracle::random_matrix(rng, 8, 5);
  const CMatrix a = gram(h);
  const CMatrix l = hermitian_cholesky(a);
  const CMatrix rec = matmul(l, conj_transpose(l));
  CHECK(oracle::max_abs_diff(rec, a) < 1e-12 * fro_norm(a));

  // lower triangular with a real positive diagonal
  for (std::size_t i = 0; i < l.rows(); ++i) {
    CHECK(l(i, i).imag() == 0.0);
    CHECK(l(i, i).real() > 0.0);
    for (std::size_t j = i + 1; j < l.cols(); ++j)
      CHECK(l(i, j) == cplx{0.0, 0.0});
  }
}

TEST_CASE("cholesky handles condition numbers around 1e8") {
  Rng rng(23);
  const std::vector<double> eigs = oracle::logspace(1e-8, 1.0, 10);
  const CMatrix a = oracle::hermitian_with_spectrum(rng, eigs);
  const CMatrix l = hermitian_cholesky(a);
  const CMatrix rec = matmul(l, conj_transpose(l));
  CHECK(fro_norm(a) > 0.0);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    diff += std::norm(rec.entries()[i] - a.entries()[i]);
  CHECK(std::sqrt(diff) <= 1e-10 * fro_norm(a));
}

TEST_CASE("cholesky rejects non-Hermitian and indefinite inputs") {
  CMatrix skew(2, 2);
  skew(0, 0) = 1.0;
  skew(1, 1) = 1.0;
  skew(0, 1) = {0.0, 1.0};
  skew(1, 0) = {0.0, 1.0};  // Hermitian would need -i here
  CHECK_THROWS_AS(hermitian_cholesky(skew), ShapeError);

  CMatrix rect(2, 3);
  CHECK_THROWS_AS(hermitian_cholesky(rect), ShapeError);

  CMatrix indef(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(hermitian_cholesky(indef), NotPositiveDefinite);
}

TEST_CASE("forward and back substitution on hand cases") {
  CMatrix l = CMatrix::identity(2);
  l(1, 0) = 1.0;
  CVector b = {1.0, 3.0};
  const CVector y = forward_substitute(l, b);
  CHECK(y[0] == cplx{1.0, 0.0});
  CHECK(y[1] == cplx{2.0, 0.0});

  CMatrix u = CMatrix::identity(2);
  u(0, 1) = 2.0;
  const CVector z = back_substitute(u, b);
  CHECK(z[1] == cplx{3.0, 0.0});
  CHECK(z[0] == cplx{-5.0, 0.0});
}

TEST_CASE("substitution matches a pivoted elimination oracle") {
  Rng rng(31);
  CMatrix l = oracle::random_matrix(rng, 8, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    l(i, i) = 2.0 + std::abs(l(i, i));  // keep it comfortably nonsingular
    for (std::size_t j = i + 1; j < 8; ++j) l(i, j) = 0.0;
  }
  const CVector b = oracle::random_vector(rng, 8);
  const CVector mine = forward_substitute(l, b);
  const CVector ref = oracle::lu_solve(l, b);
  CHECK(oracle::max_abs_diff(mine, ref) < 1e-12);

  const CMatrix u = conj_transpose(l);
  const CVector mine2 = back_substitute(u, b);
  const CVector ref2 = oracle::lu_solve(u, b);
  CHECK(oracle::max_abs_diff(mine2, ref2) < 1e-12);
}

TEST_CASE("substitution charges N(N+1)/2 and rejects zero pivots") {
  CMatrix l = CMatrix::identity(4);
  CVector b(4, cplx{1.0, 0.0});
  MacCounter mac;
  forward_substitute(l, b, &mac);
  CHECK(mac.macs == 10);
  back_substitute(l, b, &mac);
  CHECK(mac.macs == 20);

  l(2, 2) = 0.0;
  CHECK_THROWS_AS(forward_substitute(l, b), SingularTriangular);
  CHECK_THROWS_AS(back_substitute(l, b), SingularTriangular);
}

TEST_CASE("solve_hermitian on hand cases and random systems") {
  CMatrix two = CMatrix::identity(2);
  two(0, 0) = two(1, 1) = 2.0;
  CVector b = {2.0, 4.0};
  const CVector x = solve_hermitian(two, b);
  CHECK(std::abs(x[0] - cplx{1.0, 0.0}) < 1e-14);
  CHECK(std::abs(x[1] - cplx{2.0, 0.0}) < 1e-14);

  Rng rng(37);
  const CMatrix h = oracle::random_matrix(rng, 12, 8);
  const CMatrix a = gram(h);
  const CVector rhs = oracle::random_vector(rng, 8);
  const CVector sol = solve_hermitian(a, rhs);
  const CVector residual = vec_sub(matvec(a, sol), rhs);
  CHECK(vec_norm(residual) <= 1e-10 * vec_norm(rhs));

  const CVector ref = oracle::lu_solve(a, rhs);
  CHECK(oracle::max_abs_diff(sol, ref) < 1e-9);
}

TEST_CASE("invert_hermitian produces a two-sided inverse") {
  const CMatrix ii = invert_hermitian(CMatrix::identity(3));
  CHECK(oracle::max_abs_diff(ii, CMatrix::identity(3)) == 0.0);

  CMatrix d = CMatrix::identity(3);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  d(2, 2) = 8.0;
  const CMatrix dinv = invert_hermitian(d);
  CHECK(std::abs(dinv(0, 0) - cplx{0.5, 0.0}) < 1e-15);
  CHECK(std::abs(dinv(1, 1) - cplx{0.25, 0.0}) < 1e-15);
  CHECK(std::abs(dinv(2, 2) - cplx{0.125, 0.0}) < 1e-15);

  Rng rng(41);
  const CMatrix h = oracle::random_matrix(rng, 16, 8);
  const CMatrix a = gram(h);
  const CMatrix inv = invert_hermitian(a);
  CHECK(is_hermitian(inv));
  const CMatrix prod = matmul(a, inv);
  CHECK(oracle::max_abs_diff(prod, CMatrix::identity(8)) < 1e-9);
}

TEST_CASE("gram matches the scalar oracle and is Hermitian") {
  Rng rng(43);
  const CMatrix h = oracle::random_matrix(rng, 9, 4);
  const CMatrix a = gram(h);
  const CMatrix ref = oracle::scalar_gram(h);
  CHECK(oracle::max_abs_diff(a, ref) < 1e-12);
  CHECK(is_hermitian(a));
  for (std::size_t i = 0; i < 4; ++i) CHECK(a(i, i).imag() == 0.0);
}

TEST_CASE("hermitian_part splits symmetric and skew parts") {
  Rng rng(47);
  const CMatrix m = oracle::random_matrix(rng, 5, 5);
  const CMatrix h = hermitian_part(m);
  CHECK(is_hermitian(h, 1e-14));
  // m - h must be skew-Hermitian
  const CMatrix s = [&] {
    CMatrix s2 = m;
    for (std::size_t i = 0; i < s2.entries().size(); ++i)
      s2.entries()[i] -= h.entries()[i];
    return s2;
  }();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(std::abs(s(i, j) + std::conj(s(j, i))) < 1e-12);
}

TEST_SUITE_END();
