#include "elaa/solvers.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace elaa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative curvature threshold below which the memory pair is unusable and
// the iteration falls back to a gradient step.
constexpr double kCurvatureBreakdown = 1e-14;

void refresh_gradient(SolverState& st, StepContext& ctx) {
  st.g = vec_sub(matvec(ctx.a(), st.x, &ctx.mac), ctx.b());
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// FNV-1a over raw little-endian doubles.
std::uint64_t hash_bytes(std::uint64_t h, const void* p, std::size_t n) {
  const unsigned char* s = static_cast<const unsigned char*>(p);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= s[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_cplx(std::uint64_t h, const CVector& v) {
  return v.empty() ? h : hash_bytes(h, v.data(), v.size() * sizeof(cplx));
}

std::uint64_t hash_inputs(const GramSystem& sys, const CVector& x0) {
  std::uint64_t h = 1469598103934665603ull;
  h = hash_cplx(h, sys.a.entries());
  h = hash_cplx(h, sys.b);
  if (sys.psi) h = hash_cplx(h, sys.psi->entries());
  h = hash_cplx(h, x0);
  return h;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::RI: return "RI";
    case Method::JI: return "JI";
    case Method::GS: return "GS";
    case Method::SSOR: return "SSOR";
    case Method::SD: return "SD";
    case Method::LBFGS: return "LBFGS";
    case Method::P_RI: return "P-RI";
    case Method::P_SD: return "P-SD";
    case Method::P_LBFGS: return "P-LBFGS";
    case Method::I_LBFGS: return "I-LBFGS";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::string_view status_name(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Converged: return "Converged";
    case TerminalStatus::MaxIters: return "MaxIters";
    case TerminalStatus::Diverged: return "Diverged";
  }
  return "?";
}

std::uint64_t cost_per_iteration(Method m, std::size_t n) {
  const std::uint64_t n2 = static_cast<std::uint64_t>(n) * n;
  const std::uint64_t nn = n;
  switch (m) {
    case Method::RI: return n2;
    case Method::JI: return n2 + 2 * nn;
    case Method::GS: return 2 * n2;
    case Method::SSOR: return 3 * n2 + nn;
    case Method::SD: return 2 * n2 + 2 * nn;
    case Method::LBFGS: return 3 * n2 + 4 * nn;
    case Method::P_RI: return 2 * n2;
    case Method::P_SD: return 4 * n2 + 2 * nn;
    case Method::P_LBFGS: return 5 * n2 + 4 * nn;
    case Method::I_LBFGS: return 3 * n2 + 4 * nn;
  }
  throw ConfigError("cost_per_iteration: unknown method");
}

const CMatrix& StepContext::psi() const {
  if (!sys->psi)
    throw ConfigError("solver: method requires the static component on the system");
  return *sys->psi;
}

StepContext make_context(const GramSystem& sys, const Splitting* splitting,
                         const SolverConfig& cfg) {
  StepContext ctx;
  ctx.sys = &sys;
  ctx.splitting = splitting;
  ctx.cfg = cfg;
  if (splitting) {
    ctx.gs_lower = splitting->lower_with_diagonal();
    ctx.gs_upper = splitting->upper_with_diagonal();
  }
  return ctx;
}

void ri_step(SolverState& st, StepContext& ctx) {
  for (std::size_t i = 0; i < st.x.size(); ++i) st.x[i] -= st.g[i];
  refresh_gradient(st, ctx);
  ++st.step_count;
}

void ji_step(SolverState& st, StepContext& ctx) {
  if (!ctx.splitting) throw ConfigError("ji_step: splitting not supplied");
  const std::vector<double>& d = ctx.splitting->diagonal;
  for (std::size_t i = 0; i < st.x.size(); ++i) {
    if (d[i] == 0.0)
      throw SingularTriangular("ji_step: zero diagonal at " + std::to_string(i));
    const double dinv = 1.0 / d[i];
    st.x[i] -= dinv * st.g[i];
  }
  ctx.mac.charge(2 * st.x.size());  // reciprocals, then the scaled correction
  refresh_gradient(st, ctx);
  ++st.step_count;
}

void gs_step(SolverState& st, StepContext& ctx) {
  if (!ctx.splitting) throw ConfigError("gs_step: splitting not supplied");
  const std::size_t n = st.x.size();
  const CVector y = forward_substitute(ctx.gs_lower, st.g, &ctx.mac);
  ctx.mac.charge(n * (n - 1) / 2);  // substitution rounded up to a dense apply
  for (std::size_t i = 0; i < n; ++i) st.x[i] -= y[i];
  refresh_gradient(st, ctx);
  ++st.step_count;
}

void ssor_step(SolverState& st, StepContext& ctx) {
  if (!ctx.splitting) throw ConfigError("ssor_step: splitting not supplied");
  const std::size_t n = st.x.size();
  CVector u = forward_substitute(ctx.gs_lower, st.g, &ctx.mac);
  ctx.mac.charge(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) u[i] *= ctx.splitting->diagonal[i];
  ctx.mac.charge(n);
  const CVector z = back_substitute(ctx.gs_upper, u, &ctx.mac);
  ctx.mac.charge(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) st.x[i] -= z[i];
  refresh_gradient(st, ctx);
  ++st.step_count;
}

namespace {

// Shared body for SD and for quasi-Newton curvature fallbacks. Assumes g is
// current; charges one matvec and two inners plus the gradient refresh.
void sd_body(SolverState& st, StepContext& ctx) {
  const CVector ag = matvec(ctx.a(), st.g, &ctx.mac);
  const double num = inner(st.g, st.g, &ctx.mac).real();
  const double den = inner(st.g, ag, &ctx.mac).real();
  if (!(den > 0.0) || !std::isfinite(den))
    throw NotPositiveDefinite("sd_step: curvature g^H A g = " + std::to_string(den));
  const double zeta = num / den;
  axpy(cplx{-zeta, 0.0}, st.g, st.x);
  refresh_gradient(st, ctx);
  ++st.step_count;
}

}  // namespace

void sd_step(SolverState& st, StepContext& ctx) { sd_body(st, ctx); }

cplx exact_step_size(const CVector& g, const CVector& d, const CMatrix& a,
                     bool conjugate, MacCounter* mac) {
  const CVector ad = matvec(a, d, mac);
  const cplx num = conjugate ? inner(d, g, mac) : inner(g, d, mac);
  const cplx den = inner(d, ad, mac);
  if (den == cplx{} || !finite(den) || !finite(num))
    throw DegenerateStep("exact_step_size: vanishing curvature along direction");
  return num / den;
}

namespace {

// Memory-one inverse-map direction from the stored differences dx/dg and
// their inner product curv. Default form:
//   d = -F0 g + dx * (dg^H F0 g) / curv
// Classical variant applies the standard BFGS inverse update instead.
template <typename ApplyF0>
CVector qn_direction(const CVector& g, const CVector& dx, const CVector& dg,
                     cplx curv, StepContext& ctx, ApplyF0&& apply_f0) {
  if (!ctx.cfg.classical_bfgs) {
    const CVector u = apply_f0(g);
    const cplx w = inner(dg, u, &ctx.mac);
    CVector d = scaled(dx, w / curv);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= u[i];
    return d;
  }
  // (I - dx dg^H / p) F0 (I - dg dx^H / p) g + dx dx^H g / p, real p.
  const double p = curv.real();
  if (p == 0.0) throw DegenerateStep("qn_direction: zero curvature");
  const cplx a1 = inner(dx, g, &ctx.mac);
  CVector v = g;
  axpy(-a1 / p, dg, v);
  CVector u2 = apply_f0(v);
  const cplx a2 = inner(dg, u2, &ctx.mac);
  axpy((a1 - a2) / p, dx, u2);
  return u2;
}

// LBFGS and I-LBFGS: plain system, F0 chosen by st.f0_kind.
void qn_plain_step(SolverState& st, StepContext& ctx) {
  const std::size_t n = st.x.size();
  const bool use_psi = st.f0_kind == InitMap::StaticComponent;

  auto apply_f0 = [&](const CVector& v) -> CVector {
    if (use_psi) return matvec(ctx.psi(), v, &ctx.mac);
    ctx.mac.charge(n * n);  // identity map charged as a dense apply
    return v;
  };

  CVector d;
  if (!st.prev_x) {
    d = apply_f0(st.g);
    ctx.mac.charge(2 * n);  // no memory pair yet; cost stays uniform
  } else {
    const CVector dx = vec_sub(st.x, *st.prev_x);
    const CVector dg = vec_sub(st.g, *st.prev_g);
    const cplx curv = inner(dx, dg, &ctx.mac);
    const double floor = kCurvatureBreakdown * vec_norm(dx) * vec_norm(dg);
    if (!finite(curv) || std::abs(curv) <= floor) {
      ++ctx.fallback_steps;
      st.prev_x = st.x;
      st.prev_g = st.g;
      sd_body(st, ctx);
      return;
    }
    d = qn_direction(st.g, dx, dg, curv, ctx, apply_f0);
  }

  const cplx gamma = exact_step_size(st.g, d, ctx.a(), ctx.cfg.conjugate_step, &ctx.mac);
  st.prev_x = st.x;
  st.prev_g = st.g;
  axpy(-gamma, d, st.x);
  refresh_gradient(st, ctx);
  ++st.step_count;
}

// P-SD body operating on an already-computed transformed gradient pg.
void psd_body(SolverState& st, StepContext& ctx, const CVector& pg) {
  const double num = inner(pg, pg, &ctx.mac).real();
  const CVector apg = matvec(ctx.a(), pg, &ctx.mac);
  const CVector papg = matvec(ctx.psi(), apg, &ctx.mac);
  const cplx den = inner(pg, papg, &ctx.mac);
  if (den == cplx{} || !finite(den))
    throw DegenerateStep("psd_step: vanishing transformed curvature");
  const cplx zeta = num / den;
  axpy(-zeta, pg, st.x);
  refresh_gradient(st, ctx);
  ++st.step_count;
}

}  // namespace

void lbfgs_step(SolverState& st, StepContext& ctx) {
  if (st.f0_kind != InitMap::Identity)
    throw ConfigError("lbfgs_step: state is configured for a non-identity initial map");
  qn_plain_step(st, ctx);
}

void ilbfgs_step(SolverState& st, StepContext& ctx) {
  st.f0_kind = InitMap::StaticComponent;
  qn_plain_step(st, ctx);
}

void pri_step(SolverState& st, StepContext& ctx) {
  const CVector pg = matvec(ctx.psi(), st.g, &ctx.mac);
  for (std::size_t i = 0; i < st.x.size(); ++i) st.x[i] -= pg[i];
  refresh_gradient(st, ctx);
  ++st.step_count;
}

void psd_step(SolverState& st, StepContext& ctx) {
  const CVector pg = matvec(ctx.psi(), st.g, &ctx.mac);
  psd_body(st, ctx, pg);
}

void plbfgs_step(SolverState& st, StepContext& ctx) {
  const std::size_t n = st.x.size();
  const CMatrix& psi = ctx.psi();
  const CVector pg = matvec(psi, st.g, &ctx.mac);  // transformed gradient

  CVector d;
  if (!st.prev_x) {
    d = pg;
    ctx.mac.charge(n * n);  // identity initial map
    ctx.mac.charge(2 * n);
  } else {
    const CVector dx = vec_sub(st.x, *st.prev_x);
    const CVector dg = vec_sub(pg, *st.prev_g);  // prev_g holds transformed gradients
    const cplx curv = inner(dx, dg, &ctx.mac);
    const double floor = kCurvatureBreakdown * vec_norm(dx) * vec_norm(dg);
    if (!finite(curv) || std::abs(curv) <= floor) {
      ++ctx.fallback_steps;
      st.prev_x = st.x;
      st.prev_g = pg;
      psd_body(st, ctx, pg);
      return;
    }
    auto apply_identity = [&](const CVector& v) -> CVector {
      ctx.mac.charge(n * n);  // identity initial map charged as a dense apply
      return v;
    };
    d = qn_direction(pg, dx, dg, curv, ctx, apply_identity);
  }

  // Step size over the transformed system: gamma = pg^H d / d^H (psi A) d.
  const CVector ad = matvec(ctx.a(), d, &ctx.mac);
  const CVector pad = matvec(psi, ad, &ctx.mac);
  const cplx num = ctx.cfg.conjugate_step ? inner(d, pg, &ctx.mac)
                                          : inner(pg, d, &ctx.mac);
  const cplx den = inner(d, pad, &ctx.mac);
  if (den == cplx{} || !finite(den) || !finite(num))
    throw DegenerateStep("plbfgs_step: vanishing transformed curvature");
  const cplx gamma = num / den;

  st.prev_x = st.x;
  st.prev_g = pg;
  axpy(-gamma, d, st.x);
  refresh_gradient(st, ctx);
  ++st.step_count;
}

void method_step(Method m, SolverState& st, StepContext& ctx) {
  switch (m) {
    case Method::RI: return ri_step(st, ctx);
    case Method::JI: return ji_step(st, ctx);
    case Method::GS: return gs_step(st, ctx);
    case Method::SSOR: return ssor_step(st, ctx);
    case Method::SD: return sd_step(st, ctx);
    case Method::LBFGS: return lbfgs_step(st, ctx);
    case Method::P_RI: return pri_step(st, ctx);
    case Method::P_SD: return psd_step(st, ctx);
    case Method::P_LBFGS: return plbfgs_step(st, ctx);
    case Method::I_LBFGS: return ilbfgs_step(st, ctx);
  }
  throw ConfigError("method_step: unknown method");
}

IterationTrace run(Method m, const GramSystem& sys, const Splitting* splitting,
                   const SolverConfig& cfg, const CVector* x_star,
                   CVector* final_x) {
  const std::size_t n = sys.n();
  if (sys.b.size() != n) throw DimensionError("run: b length does not match A");
  if (cfg.x0 && cfg.x0->size() != n)
    throw DimensionError("run: x0 length does not match A");
  if (!(cfg.tol >= 0.0)) throw ConfigError("run: tol must be >= 0");
  if (!(cfg.divergence_factor > 1.0))
    throw ConfigError("run: divergence_factor must exceed 1");
  const bool wants_splitting =
      m == Method::JI || m == Method::GS || m == Method::SSOR;
  if (wants_splitting && !splitting)
    throw ConfigError("run: method requires a matrix splitting");
  const bool wants_psi = m == Method::P_RI || m == Method::P_SD ||
                         m == Method::P_LBFGS || m == Method::I_LBFGS;
  if (wants_psi && !sys.psi)
    throw ConfigError("run: method requires the static component on the system");

  StepContext ctx = make_context(sys, wants_splitting ? splitting : nullptr, cfg);
  SolverState st;
  st.x = cfg.x0 ? *cfg.x0 : CVector(n);
  st.f0_kind = m == Method::I_LBFGS ? InitMap::StaticComponent : InitMap::Identity;
  st.g = vec_sub(matvec(sys.a, st.x), sys.b);  // setup, uncharged

  IterationTrace tr;
  tr.method = m;
  tr.input_hash = hash_inputs(sys, st.x);

  const double b_norm = vec_norm(sys.b);
  auto rel_residual = [&]() {
    const double gn = vec_norm(st.g);
    if (b_norm > 0.0) return gn / b_norm;
    return gn == 0.0 ? 0.0 : kInf;
  };
  const double x_star_norm = x_star ? vec_norm(*x_star) : 0.0;
  auto rel_error = [&]() {
    if (!x_star) return kNaN;
    const double en = vec_norm(vec_sub(st.x, *x_star));
    if (x_star_norm > 0.0) return en / x_star_norm;
    return en == 0.0 ? 0.0 : kInf;
  };

  const double rr0 = rel_residual();
  tr.records.push_back({0, rr0, rel_error(), 0});
  tr.status = TerminalStatus::MaxIters;
  if (rr0 <= cfg.tol) {
    tr.status = TerminalStatus::Converged;
  } else {
    for (std::size_t t = 1; t <= cfg.max_iters; ++t) {
      try {
        method_step(m, st, ctx);
      } catch (const Error& e) {
        tr.status = TerminalStatus::Diverged;
        tr.diagnostic = e.what();
        break;
      }
      const double rr = rel_residual();
      tr.records.push_back({t, rr, rel_error(), ctx.mac.macs});
      if (rr <= cfg.tol) {
        tr.status = TerminalStatus::Converged;
        break;
      }
      if (!(rr <= cfg.divergence_factor * rr0)) {  // also catches NaN
        tr.status = TerminalStatus::Diverged;
        break;
      }
    }
  }
  tr.fallback_steps = ctx.fallback_steps;
  if (final_x) *final_x = st.x;
  return tr;
}

}  // namespace elaa
