#pragma once

#include <cstdint>
#include <optional>

#include "elaa/channel.hpp"
#include "elaa/linalg.hpp"

namespace elaa {

// One observed uplink transmission r = H s + v.
struct TxInstance {
  CVector s;              // transmitted symbols, length N
  double noise_variance;  // per complex sample
  CVector r;              // received samples, length M
};

// v has iid CN(0, noise_variance) entries drawn from Rng(seed).
// noise_variance == 0 gives the noiseless r = H s.
TxInstance transmit(const CMatrix& h, CVector s, double noise_variance,
                    std::uint64_t seed);

// Normal equations of the detection problem: A x = b with A = H^H H (+ ridge)
// and b = H^H r. psi and a_inf are optional precomputed companions shared
// across trials of one experiment.
struct GramSystem {
  CMatrix a;
  CVector b;
  std::optional<CMatrix> psi;    // inverse of the deterministic Gram limit
  std::optional<CMatrix> a_inf;  // the deterministic Gram limit itself
  double ridge = 0.0;

  std::size_t n() const { return a.rows(); }
};

// Builds A = H^H H + ridge I and b = H^H r. Preprocessing, uncharged.
GramSystem gram_system(const CMatrix& h, const CVector& r, double ridge = 0.0);

// Deterministic large-array limit of the Gram matrix:
//   A_inf = k/(k+1) H_los^H H_los + 1/(k+1) I  (+ ridge I)
// The ridge term mirrors gram_system so the limit tracks the solved matrix.
CMatrix asymptotic_gram(const CMatrix& h_los, double kappa, double ridge = 0.0);

// Inverse of asymptotic_gram, Hermitian positive definite by construction.
CMatrix static_component(const CMatrix& h_los, double kappa, double ridge = 0.0);

// Diagonal / strict-lower splitting of a Hermitian matrix. Diagonal entries
// are stored real; an imaginary residue above 1e-12 relative is a ShapeError.
struct Splitting {
  std::vector<double> diagonal;  // D
  CMatrix strict_lower;          // L

  CMatrix lower_with_diagonal() const;  // D + L
  CMatrix upper_with_diagonal() const;  // (D + L)^H
};

Splitting split(const CMatrix& a);

// A = k/(k+1) G_los + 1/(k+1) G_nlos + sqrt(k)/(k+1) (C + C^H) with
// C = H_los^H H_nlos. Terms are returned separately, already weighted, so
// their plain sum reconstructs gram(h) of the mixed channel.
struct FourTermExpansion {
  CMatrix los_term;
  CMatrix nlos_term;
  CMatrix cross_term;      // sqrt(k)/(k+1) H_los^H H_nlos
  CMatrix cross_term_adj;  // its conjugate transpose
};

FourTermExpansion four_term_expansion(const CMatrix& h_los, const CMatrix& h_nlos,
                                      double kappa);

}  // namespace elaa
