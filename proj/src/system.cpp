#include "elaa/system.hpp"

#include <cmath>
#include <string>

#include "elaa/rng.hpp"

namespace elaa {

TxInstance transmit(const CMatrix& h, CVector s, double noise_variance,
                    std::uint64_t seed) {
  if (h.cols() != s.size())
    throw DimensionError("transmit: symbol vector length does not match channel");
  if (noise_variance < 0.0)
    throw ConfigError("transmit: noise_variance must be >= 0");
  TxInstance tx;
  tx.r = matvec(h, s);
  if (noise_variance > 0.0) {
    Rng rng(seed);
    const double sigma = std::sqrt(noise_variance);
    for (std::size_t i = 0; i < tx.r.size(); ++i)
      tx.r[i] += sigma * rng.complex_gaussian();
  }
  tx.s = std::move(s);
  tx.noise_variance = noise_variance;
  return tx;
}

GramSystem gram_system(const CMatrix& h, const CVector& r, double ridge) {
  if (h.rows() != r.size())
    throw DimensionError("gram_system: received vector length does not match channel");
  if (ridge < 0.0) throw ConfigError("gram_system: ridge must be >= 0");
  GramSystem sys;
  sys.a = gram(h);
  for (std::size_t i = 0; i < sys.a.rows(); ++i) sys.a(i, i) += ridge;
  sys.b = matvec(conj_transpose(h), r);
  sys.ridge = ridge;
  return sys;
}

CMatrix asymptotic_gram(const CMatrix& h_los, double kappa, double ridge) {
  if (!(kappa >= 0.0)) throw ConfigError("asymptotic_gram: kappa must be >= 0");
  if (ridge < 0.0) throw ConfigError("asymptotic_gram: ridge must be >= 0");
  const double w_los = kappa / (kappa + 1.0);
  const double w_eye = 1.0 / (kappa + 1.0) + ridge;
  CMatrix a = gram(h_los);
  for (cplx& v : a.entries()) v *= w_los;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += w_eye;
  return a;
}

CMatrix static_component(const CMatrix& h_los, double kappa, double ridge) {
  return invert_hermitian(asymptotic_gram(h_los, kappa, ridge));
}

CMatrix Splitting::lower_with_diagonal() const {
  const std::size_t n = diagonal.size();
  CMatrix m = strict_lower;
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diagonal[i];
  return m;
}

CMatrix Splitting::upper_with_diagonal() const {
  return conj_transpose(lower_with_diagonal());
}

Splitting split(const CMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeError("split: matrix must be square");
  const std::size_t n = a.rows();
  Splitting s;
  s.diagonal.resize(n);
  s.strict_lower = CMatrix(n, n);
  const double scale = fro_norm(a);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx d = a(i, i);
    if (std::abs(d.imag()) > 1e-12 * (scale > 0.0 ? scale : 1.0)) {
      throw ShapeError("split: diagonal entry " + std::to_string(i) +
                       " has a non-negligible imaginary part");
    }
    s.diagonal[i] = d.real();
    for (std::size_t j = 0; j < i; ++j) s.strict_lower(i, j) = a(i, j);
  }
  return s;
}

FourTermExpansion four_term_expansion(const CMatrix& h_los, const CMatrix& h_nlos,
                                      double kappa) {
  if (h_los.rows() != h_nlos.rows() || h_los.cols() != h_nlos.cols())
    throw DimensionError("four_term_expansion: component shapes differ");
  if (!(kappa >= 0.0)) throw ConfigError("four_term_expansion: kappa must be >= 0");
  const double w_los = kappa / (kappa + 1.0);
  const double w_nlos = 1.0 / (kappa + 1.0);
  const double w_cross = std::sqrt(kappa) / (kappa + 1.0);

  FourTermExpansion t;
  t.los_term = gram(h_los);
  for (cplx& v : t.los_term.entries()) v *= w_los;
  t.nlos_term = gram(h_nlos);
  for (cplx& v : t.nlos_term.entries()) v *= w_nlos;
  t.cross_term = matmul(conj_transpose(h_los), h_nlos);
  for (cplx& v : t.cross_term.entries()) v *= w_cross;
  t.cross_term_adj = conj_transpose(t.cross_term);
  return t;
}

}  // namespace elaa
