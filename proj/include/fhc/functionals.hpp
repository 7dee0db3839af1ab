#pragma once

// Variational quantities: D(u), the free energy J(lambda, u), the constrained
// energies I^m and L, the Pohozaev functional P, gradients and the exact
// scaling decomposition along the dilation fiber. Backends: periodic Field
// (spectral), uniform radial grid (N = 3), piecewise-linear radial profile.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fhc/grid.hpp"
#include "fhc/nonlinearity.hpp"
#include "fhc/radial.hpp"
#include "fhc/radial_spectral.hpp"
#include "fhc/spectral.hpp"

namespace fhc {

struct FunctionalContext {
  int N = 3;
  double s = 0.5;
  double alpha = 2.0;
  double lambda = 0.0;  // mu = e^lambda
  std::optional<double> m;
  Nonlinearity nl = make_power(2.0);

  double mu() const { return std::exp(lambda); }
  ExponentSet exps() const { return exponents(N, s, alpha); }
};

struct EnergyBreakdown {
  double dirichlet = 0;  // [u]_s^2
  double mass2 = 0;      // ||u||_2^2
  double D_value = 0;    // D(u)
  double J = 0;
  double I_m = 0;
  double P = 0;
  double L = 0;
  double r1 = 0;  // scaled residual of P = 0
  double r2 = 0;  // scaled residual of the equivalent form

  static const char* csv_header() { return "dirichlet,mass2,D,J,I_m,P,L,r1,r2"; }
};

/// Base integrals (a, b, d) = ([u]^2, ||u||^2, D(u)) of some field.
struct BaseIntegrals {
  double a = 0, b = 0, d = 0;
};

inline EnergyBreakdown assemble_breakdown(const BaseIntegrals& q,
                                          const FunctionalContext& ctx) {
  const double mu = ctx.mu();
  EnergyBreakdown e;
  e.dirichlet = q.a;
  e.mass2 = q.b;
  e.D_value = q.d;
  e.J = 0.5 * q.a + 0.5 * mu * q.b - 0.5 * q.d;
  e.I_m = e.J - 0.5 * mu * ctx.m.value_or(0.0);
  const double t1 = 0.5 * (ctx.N - 2 * ctx.s) * q.a;
  const double t2 = 0.5 * ctx.N * mu * q.b;
  const double t3 = 0.5 * (ctx.N + ctx.alpha) * q.d;
  e.P = t1 + t2 - t3;
  e.L = 0.5 * q.a - 0.5 * q.d;
  const double floor = 1e-300;
  e.r1 = std::fabs(e.P) / (std::fabs(t1) + std::fabs(t2) + std::fabs(t3) + floor);
  const ExponentSet ex = ctx.exps();
  const double u1 = q.a / ex.p_star, u2 = mu * q.b / ex.q, u3 = q.d;
  e.r2 = std::fabs(u1 + u2 - u3) /
         (std::fabs(u1) + std::fabs(u2) + std::fabs(u3) + floor);
  return e;
}

// --- Field (periodic spectral) backend --------------------------------------

inline Field field_map(const Field& u, const std::function<double(double)>& g) {
  Field r = u;
  for (double& x : r.v) x = g(x);
  return r;
}

inline double D_value(const Field& u, const FunctionalContext& ctx) {
  const Field Fu = field_map(u, ctx.nl.F);
  return riesz_inner(Fu, Fu, ctx.alpha);
}

inline BaseIntegrals base_integrals(const Field& u, const FunctionalContext& ctx) {
  return {gagliardo_seminorm2(u, ctx.s), mass2(u), D_value(u, ctx)};
}

inline EnergyBreakdown evaluate(const Field& u, const FunctionalContext& ctx) {
  return assemble_breakdown(base_integrals(u, ctx), ctx);
}

/// L^2 gradient of J: (-Delta)^s u + e^lambda u - (I_alpha * F(u)) f(u).
inline Field grad_J(const Field& u, const FunctionalContext& ctx) {
  Field g = frac_laplacian(u, ctx.s);
  const double mu = ctx.mu();
  const Field pot = riesz_convolve(field_map(u, ctx.nl.F), ctx.alpha);
  for (std::size_t i = 0; i < g.size(); ++i)
    g.v[i] += mu * u.v[i] - pot.v[i] * ctx.nl.f(u.v[i]);
  return g;
}

// --- uniform radial grid backend (N = 3) ------------------------------------

inline RadialField rf_map(const RadialField& u, const std::function<double(double)>& g) {
  RadialField r = u;
  for (double& x : r.v) x = g(x);
  return r;
}

inline double D_value(const RadialField& u, const FunctionalContext& ctx) {
  const RadialField Fu = rf_map(u, ctx.nl.F);
  return rf_inner(rf_riesz(Fu, ctx.alpha), Fu);
}

inline BaseIntegrals base_integrals(const RadialField& u, const FunctionalContext& ctx) {
  if (ctx.N != 3) throw std::invalid_argument("radial backend requires N = 3");
  return {rf_dirichlet(u, ctx.s), rf_mass2(u), D_value(u, ctx)};
}

inline EnergyBreakdown evaluate(const RadialField& u, const FunctionalContext& ctx) {
  return assemble_breakdown(base_integrals(u, ctx), ctx);
}

inline RadialField grad_J(const RadialField& u, const FunctionalContext& ctx) {
  RadialField g = rf_frac_laplacian(u, ctx.s);
  const double mu = ctx.mu();
  const RadialField pot = rf_riesz(rf_map(u, ctx.nl.F), ctx.alpha);
  for (int j = 0; j < g.n(); ++j)
    g.v[j] += mu * u.v[j] - pot.v[j] * ctx.nl.f(u.v[j]);
  return g;
}

/// Gradient of L(u) = [u]^2/2 - D(u)/2 (no mass term), used on the sphere.
inline RadialField grad_L(const RadialField& u, const FunctionalContext& ctx) {
  RadialField g = rf_frac_laplacian(u, ctx.s);
  const RadialField pot = rf_riesz(rf_map(u, ctx.nl.F), ctx.alpha);
  for (int j = 0; j < g.n(); ++j) g.v[j] -= pot.v[j] * ctx.nl.f(u.v[j]);
  return g;
}

// --- piecewise-linear radial profile backend ---------------------------------

/// Resample g(u(r)) onto a refinement of the profile's nodes (refine extra
/// points per segment) so that nonlinear images stay well represented.
inline RadialProfile profile_map(const RadialProfile& p,
                                 const std::function<double(double)>& g,
                                 int refine = 8) {
  std::vector<double> nodes, values;
  for (std::size_t j = 0; j + 1 < p.nodes.size(); ++j) {
    for (int k = 0; k < refine; ++k) {
      const double t = double(k) / refine;
      nodes.push_back(p.nodes[j] + t * (p.nodes[j + 1] - p.nodes[j]));
    }
  }
  nodes.push_back(p.nodes.back());
  for (double r : nodes) values.push_back(g(p.eval(r)));
  return make_profile(p.N, std::move(nodes), std::move(values));
}

inline double D_value(const RadialProfile& p, const FunctionalContext& ctx) {
  const RadialProfile Fp = profile_map(p, ctx.nl.F);
  return radial_riesz_energy(Fp, Fp, ctx.alpha);
}

/// Dirichlet seminorm of a compact radial profile (N = 3 only): sample onto
/// the uniform sine-transform grid. P is chosen from the smallest profile
/// feature; the result is truncation-limited for discontinuous-ish profiles.
inline double profile_dirichlet(const RadialProfile& p, double s, int min_P = 4096,
                                int max_P = 1 << 20) {
  if (p.N != 3) throw std::invalid_argument("profile_dirichlet: N = 3 only");
  const double L = 1.25 * p.support_radius();
  double feature = L;
  for (std::size_t j = 0; j + 1 < p.nodes.size(); ++j)
    feature = std::min(feature, p.nodes[j + 1] - p.nodes[j]);
  int P = min_P;
  while (P < max_P && L / P > feature / 6.0) P *= 2;
  const RadialField rf = make_radial_field(P, L, [&](double r) { return p.eval(r); });
  return rf_dirichlet(rf, s);
}

// --- scaling fiber -----------------------------------------------------------

/// J(lambda, u(./theta)) from the base integrals of u — exact in theta.
inline double scaled_J(const BaseIntegrals& q, const FunctionalContext& ctx,
                       double theta) {
  const double N = ctx.N, s = ctx.s, al = ctx.alpha;
  return 0.5 * std::pow(theta, N - 2 * s) * q.a +
         0.5 * ctx.mu() * std::pow(theta, N) * q.b -
         0.5 * std::pow(theta, N + al) * q.d;
}

inline std::vector<std::pair<double, double>> scaling_profile(
    const BaseIntegrals& q, const FunctionalContext& ctx,
    const std::vector<double>& thetas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(thetas.size());
  for (double th : thetas) out.emplace_back(th, scaled_J(q, ctx, th));
  return out;
}

/// Positive root of P(lambda, u(./theta)) = 0. After dividing by
/// theta^{N-2s} the equation reads c1 + c2 theta^{2s} - c3 theta^{2s+alpha}
/// with c1, c2 >= 0 and c3 > 0, so the positive root is unique.
inline double pohozaev_theta_root(const BaseIntegrals& q,
                                  const FunctionalContext& ctx) {
  if (!(q.d > 0)) throw std::domain_error("pohozaev_theta_root: requires D(u) > 0");
  const double c1 = 0.5 * (ctx.N - 2 * ctx.s) * q.a;
  const double c2 = 0.5 * ctx.N * ctx.mu() * q.b;
  const double c3 = 0.5 * (ctx.N + ctx.alpha) * q.d;
  auto phi = [&](double th) {
    return c1 + c2 * std::pow(th, 2 * ctx.s) - c3 * std::pow(th, 2 * ctx.s + ctx.alpha);
  };
  double lo = 1.0, hi = 1.0;
  if (phi(1.0) > 0) {
    while (phi(hi) > 0) hi *= 2.0;
  } else {
    while (phi(lo) <= 0) lo *= 0.5;
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

enum class PohozaevRegion { interior, mountain, exterior };

inline PohozaevRegion classify_pohozaev(const EnergyBreakdown& e, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("classify_pohozaev: tol > 0");
  const double norm = e.dirichlet + e.mass2;
  if (norm <= 1e-300) return PohozaevRegion::interior;  // trivial axis
  if (e.r1 <= tol) return PohozaevRegion::mountain;
  return e.P > 0 ? PohozaevRegion::interior : PohozaevRegion::exterior;
}

}  // namespace fhc
