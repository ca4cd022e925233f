#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elaa/linalg.hpp"
#include "elaa/system.hpp"

namespace elaa {

// Iterative detectors for the Hermitian positive definite system A x = b.
//
// Accounting model. Every iteration of every method charges a fixed number
// of multiply-accumulate units that depends only on the method and N:
//
//   matvec with an N x N matrix        N^2   (also charged for applying an
//                                             identity-shaped initial map,
//                                             which keeps variants of one
//                                             method on the same scale)
//   triangular solve                   N^2   (substitution is N(N+1)/2;
//                                             the step rounds it up to a
//                                             dense application)
//   inner product                      N
//   elementwise diagonal scale/divide  N
//
// Scalar-times-vector updates and vector additions are free. The gradient
// g = A x - b is recomputed with one charged matvec per iteration. Building
// A, b, the preconditioner and the initial gradient is preprocessing and
// charges nothing. cost_per_iteration() returns the per-iteration totals;
// run() produces counter values that land exactly on t * cost after t
// iterations (quasi-Newton curvature fallbacks excepted, see below).

enum class Method {
  RI,       // Richardson iteration, unit step
  JI,       // Jacobi: diagonal-preconditioned correction
  GS,       // Gauss-Seidel: lower-triangular solve
  SSOR,     // symmetric successive over-relaxation, unit relaxation
  SD,       // steepest descent with exact line search
  LBFGS,    // memory-one quasi-Newton, identity initial map
  P_RI,     // Richardson on the statically preconditioned system
  P_SD,     // steepest descent on the statically preconditioned system
  P_LBFGS,  // quasi-Newton on the statically preconditioned system
  I_LBFGS,  // quasi-Newton with the static component as initial map
};

inline constexpr std::array<Method, 10> kAllMethods = {
    Method::RI, Method::JI, Method::GS, Method::SSOR, Method::SD,
    Method::LBFGS, Method::P_RI, Method::P_SD, Method::P_LBFGS, Method::I_LBFGS};

std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

// Per-iteration multiply-accumulate cost.
std::uint64_t cost_per_iteration(Method m, std::size_t n);

struct SolverConfig {
  std::size_t max_iters = 1000;
  double tol = 1e-8;  // on the relative residual |A x - b| / |b|
  double divergence_factor = 1e6;
  std::optional<CVector> x0;  // zeros when absent

  // Quasi-Newton step size: default gamma = g^H d / d^H A d; the conjugate
  // variant uses d^H g / d^H A d instead. Both coincide when the ratio is
  // real.
  bool conjugate_step = false;

  // Replace the rank-one inverse map with the standard memory-one BFGS
  // update. Comparison aid only; the cost contract applies to the default.
  bool classical_bfgs = false;
};

enum class TerminalStatus { Converged, MaxIters, Diverged };
std::string_view status_name(TerminalStatus s);

// Initial inverse map for quasi-Newton methods.
enum class InitMap { Identity, StaticComponent };

// Mutable state shared by all step functions. g always holds A x - b for
// the current x. The preconditioned quasi-Newton method stores transformed
// gradients in prev_g; everything else stores plain ones.
struct SolverState {
  CVector x;
  CVector g;
  std::optional<CVector> prev_x;
  std::optional<CVector> prev_g;
  InitMap f0_kind = InitMap::Identity;
  std::size_t step_count = 0;
};

// Shared per-run context: the system, the splitting-derived triangular
// factors for JI/GS/SSOR, variant flags, and the operation counter.
struct StepContext {
  const GramSystem* sys = nullptr;
  const Splitting* splitting = nullptr;
  CMatrix gs_lower;  // D + L, built once per run
  CMatrix gs_upper;  // (D + L)^H
  SolverConfig cfg;
  MacCounter mac;
  std::size_t fallback_steps = 0;

  const CMatrix& a() const { return sys->a; }
  const CVector& b() const { return sys->b; }
  const CMatrix& psi() const;  // ConfigError when absent
};

StepContext make_context(const GramSystem& sys, const Splitting* splitting,
                         const SolverConfig& cfg);

// One iteration each. Every step updates x, recomputes g, and increments
// step_count. Costs match cost_per_iteration for the default variant flags.
void ri_step(SolverState& st, StepContext& ctx);
void ji_step(SolverState& st, StepContext& ctx);
void gs_step(SolverState& st, StepContext& ctx);
void ssor_step(SolverState& st, StepContext& ctx);
void sd_step(SolverState& st, StepContext& ctx);
void lbfgs_step(SolverState& st, StepContext& ctx);
void pri_step(SolverState& st, StepContext& ctx);
void psd_step(SolverState& st, StepContext& ctx);
void plbfgs_step(SolverState& st, StepContext& ctx);
void ilbfgs_step(SolverState& st, StepContext& ctx);

void method_step(Method m, SolverState& st, StepContext& ctx);

// Exact line-search step size along direction d: g^H d / d^H A d, or the
// conjugate variant d^H g / d^H A d. Charges one matvec and two inners.
cplx exact_step_size(const CVector& g, const CVector& d, const CMatrix& a,
                     bool conjugate, MacCounter* mac = nullptr);

struct IterationRecord {
  std::size_t iter = 0;
  double rel_residual = 0.0;
  double rel_error = 0.0;  // NaN when no reference solution was supplied
  std::uint64_t cum_macs = 0;
};

struct IterationTrace {
  Method method = Method::RI;
  std::vector<IterationRecord> records;  // record 0 is the initial point
  TerminalStatus status = TerminalStatus::MaxIters;
  std::string diagnostic;        // failure detail for Diverged-by-exception
  std::size_t fallback_steps = 0;
  std::uint64_t input_hash = 0;  // hash over A, b, psi, x0
};

// Runs one method to convergence, divergence, or the iteration cap.
// x_star, when given, supplies the reference for the rel_error column.
// final_x, when given, receives the terminal iterate.
IterationTrace run(Method m, const GramSystem& sys, const Splitting* splitting,
                   const SolverConfig& cfg, const CVector* x_star = nullptr,
                   CVector* final_x = nullptr);

}  // namespace elaa
