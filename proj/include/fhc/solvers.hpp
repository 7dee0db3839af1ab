#pragma once

// Radial (N = 3) solvers: fixed-frequency ground states as minimizers of J
// over the dilation-projected zero set of P, and prescribed-mass solutions
// via mass-preserving tangent descent on L, with per-iterate diagnostics.

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhc/functionals.hpp"
#include "fhc/paths.hpp"
#include "fhc/radial_spectral.hpp"

namespace fhc {

struct SolverOptions {
  int max_iter = 4000;
  double tol_g = 1e-6;    // L^2 norm of the full gradient
  double tol_p = 1e-3;    // scaled Pohozaev residual
  double armijo = 1e-4;
  double step0 = 1.0;
  std::uint64_t seed = 0;
};

struct IterRecord {
  double objective = 0;   // J (fixed-mu) or L (normalized)
  double grad_norm = 0;
  double I_m = 0;
  double dIm_dlambda = 0;
  double dual_norm = 0;   // ||((-Delta)^s + 1)^{-1/2} grad||
  double P = 0;
};

struct Solution {
  RadialField u;
  double lambda = 0;      // mu = e^lambda
  double m = 0;           // realized mass
  EnergyBreakdown energies;
  double grad_norm = 0;
  double pohozaev_res = 0;
  int iterations = 0;
  bool converged = false;
  std::string diagnosis;  // non-empty on failure modes
  std::vector<IterRecord> history;
};

inline double rf_norm(const RadialField& g) { return std::sqrt(rf_inner(g, g)); }

/// Dilation u(./theta) on the uniform radial grid, linear interpolation,
/// zero beyond the domain radius.
inline RadialField rf_dilate(const RadialField& u, double theta) {
  if (!(theta > 0)) throw std::invalid_argument("rf_dilate: theta > 0");
  if (theta == 1.0) return u;
  RadialField out = u;
  const double h = u.h();
  for (int j = 0; j < u.n(); ++j) {
    const double r = out.r(j) / theta;
    const double t = r / h - 1.0;  // index into v (v[j] sits at (j+1) h)
    const int k = static_cast<int>(std::floor(t));
    double val = 0;
    auto at = [&](int i) {
      if (i < 0) {
        // reflect through r = 0 with even symmetry: u(0) from v[0]
        return u.v[0];
      }
      return i < u.n() ? u.v[i] : 0.0;
    };
    if (t >= -1.0 && k < u.n()) {
      const double w = t - k;
      val = (1.0 - w) * at(k) + w * at(k + 1);
    }
    out.v[j] = val;
  }
  return out;
}

struct Projection {
  double theta = 1.0;
  RadialField u;
};

/// Dilate u onto the Pohozaev zero set; requires D(u) > 0.
inline Projection pohozaev_project(const RadialField& u, const FunctionalContext& ctx) {
  const BaseIntegrals q = base_integrals(u, ctx);
  const double theta = pohozaev_theta_root(q, ctx);
  return {theta, rf_dilate(u, theta)};
}

inline IterRecord make_record(const RadialField& u, const RadialField& g,
                              const EnergyBreakdown& e, const FunctionalContext& ctx,
                              bool normalized) {
  IterRecord rec;
  rec.objective = normalized ? e.L : e.J;
  rec.grad_norm = rf_norm(g);
  rec.I_m = e.I_m;
  rec.dIm_dlambda = 0.5 * ctx.mu() * (e.mass2 - ctx.m.value_or(e.mass2));
  rec.dual_norm = std::sqrt(std::max(0.0, rf_inner(rf_helmholtz_inverse(g, ctx.s, 1.0), g)));
  rec.P = e.P;
  return rec;
}

/// Default initial guess: a Gaussian bump, dilated until D > 0 gives a
/// usable projection (fixed-mu) or normalized to mass m.
inline RadialField default_init(int P, double L, const FunctionalContext& ctx,
                                double target_mass = 1.0) {
  RadialField u = make_radial_field(P, L, [](double r) { return std::exp(-r * r); });
  const double c = std::sqrt(target_mass / rf_mass2(u));
  for (double& v : u.v) v *= c;
  return u;
}

/// Minimize J over the projected Pohozaev set by preconditioned descent:
/// step along -((-Delta)^s + mu)^{-1} grad_J, reproject, accept on decrease.
inline Solution solve_fixed_mu(const FunctionalContext& ctx, RadialField init,
                               const SolverOptions& opts = {}) {
  Solution sol;
  sol.lambda = ctx.lambda;
  const double mu = ctx.mu();

  if (!(D_value(init, ctx) > 0)) {
    // grow amplitude until the focusing term is active
    for (int k = 0; k < 60 && !(D_value(init, ctx) > 0); ++k)
      for (double& v : init.v) v *= 2.0;
    if (!(D_value(init, ctx) > 0)) {
      sol.u = init;
      sol.diagnosis = "D collapse: no admissible initial datum";
      return sol;
    }
  }
  RadialField u = pohozaev_project(init, ctx).u;
  EnergyBreakdown e = evaluate(u, ctx);

  double step = opts.step0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const RadialField g = grad_J(u, ctx);
    const double gn = rf_norm(g);
    sol.history.push_back(make_record(u, g, e, ctx, false));
    sol.iterations = it;
    if (gn <= opts.tol_g && e.r1 <= opts.tol_p) {
      sol.converged = true;
      break;
    }
    const RadialField dir = rf_helmholtz_inverse(g, ctx.s, mu);
    const double slope = rf_inner(g, dir);  // > 0: descent along -dir
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      RadialField trial = u;
      for (int j = 0; j < trial.n(); ++j) trial.v[j] -= step * dir.v[j];
      if (!(D_value(trial, ctx) > 0)) {
        step *= 0.5;
        continue;
      }
      const Projection pr = pohozaev_project(trial, ctx);
      const EnergyBreakdown et = evaluate(pr.u, ctx);
      if (et.J <= e.J - opts.armijo * step * slope) {
        u = pr.u;
        e = et;
        accepted = true;
        step = std::min(step * 2.0, opts.step0);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      sol.diagnosis = "line search stalled";
      break;
    }
  }
  // The projected descent stalls at the discretization floor of the manifold
  // constraint. For amplitude-homogeneous f, polish with a stabilized
  // fixed-point iteration on the Euler-Lagrange equation itself:
  // u <- gamma^kappa ((-Delta)^s + mu)^{-1} N(u), gamma = <Hu,u>/<N(u),u>,
  // which is consistent with grad_J = 0 on the same discretization.
  const double hom = ctx.nl.homogeneity;
  if (!sol.converged && hom > 1.0) {
    const double q = 2.0 * hom - 1.0;  // amplitude degree of N(u)
    const double kappa = q / (q - 1.0);
    RadialField w = u;
    RadialField best = u;
    double best_gn = rf_norm(grad_J(u, ctx));
    int worse = 0;
    for (int it = 0; it < 400; ++it) {
      const RadialField g = grad_J(w, ctx);
      const double gn = rf_norm(g);
      sol.history.push_back(make_record(w, g, evaluate(w, ctx), ctx, false));
      sol.iterations = static_cast<int>(sol.history.size()) - 1;
      if (gn < best_gn) {
        best_gn = gn;
        best = w;
        worse = 0;
      } else if (++worse > 5) {
        break;
      }
      if (gn <= 0.1 * opts.tol_g) break;
      RadialField Hw = rf_frac_laplacian(w, ctx.s);
      RadialField N = Hw;
      for (int j = 0; j < w.n(); ++j) {
        Hw.v[j] += mu * w.v[j];
        N.v[j] = Hw.v[j] - g.v[j];
      }
      const double den = rf_inner(N, w);
      if (!(den > 0)) break;
      const double gamma = rf_inner(Hw, w) / den;
      w = rf_helmholtz_inverse(N, ctx.s, mu);
      const double c = std::pow(gamma, kappa);
      for (double& v : w.v) v *= c;
    }
    const EnergyBreakdown eb = evaluate(best, ctx);
    if (best_gn <= opts.tol_g && eb.r1 <= opts.tol_p) {
      u = best;
      e = eb;
      sol.converged = true;
    }
  }
  sol.u = u;
  sol.energies = e;
  sol.m = e.mass2;
  sol.grad_norm = rf_norm(grad_J(u, ctx));
  sol.pohozaev_res = e.r1;
  if (sol.converged) sol.diagnosis.clear();
  return sol;
}

/// Prescribed-mass descent: minimize L over {||u||^2 = m} with exact
/// renormalization each step; mu is recovered from the Lagrange relation
/// mu = <-grad_L(u), u> / m.
inline Solution solve_normalized(const FunctionalContext& ctx_in, RadialField init,
                                 const SolverOptions& opts = {}) {
  if (!ctx_in.m || !(*ctx_in.m > 0))
    throw std::invalid_argument("solve_normalized: positive mass required");
  FunctionalContext ctx = ctx_in;
  const double m = *ctx.m;

  auto renorm = [&](RadialField& u) {
    const double c = std::sqrt(m / rf_mass2(u));
    for (double& v : u.v) v *= c;
  };
  RadialField u = init;
  renorm(u);
  // warm start for homogeneous f: fixed-multiplier ground states form the
  // scaling family u_mu(r) = mu^beta u_1(mu^gamma r) with mass
  // mu^(2 beta - gamma N) m_1, increasing in mu when mass-subcritical.
  // Matching the target mass inside that family lands the descent on the
  // branch with a positive multiplier; a generic bump init instead slides
  // into a box-limited near-linear state with L > 0 and mu <= 0.
  if (ctx.nl.homogeneity > 1.0) {
    const double p = ctx.nl.homogeneity;
    const double gamma = 1.0 / (2.0 * ctx.s);
    const double beta = (1.0 + gamma * ctx.alpha) / (2.0 * p - 2.0);
    const double mass_exp = 2.0 * beta - gamma * ctx.N;
    if (mass_exp > 0) {
      FunctionalContext ref = ctx;
      ref.lambda = 0.0;
      ref.m.reset();
      SolverOptions ro;
      ro.max_iter = 4000;
      ro.tol_g = 1e-6;
      const Solution s1 = solve_fixed_mu(ref, default_init(1024, 24, ref), ro);
      if (s1.converged && s1.m > 0) {
        const double mu = std::pow(m / s1.m, 1.0 / mass_exp);
        const double scale = std::pow(mu, gamma);
        const double hr = s1.u.h();
        for (int j = 0; j < u.n(); ++j) {
          const double t = scale * u.r(j) / hr - 1.0;
          const int k = static_cast<int>(std::floor(t));
          auto at = [&](int i) {
            if (i < 0) return s1.u.v[0];
            return i < s1.u.n() ? s1.u.v[i] : 0.0;
          };
          u.v[j] = at(k) + (t - k) * (at(k + 1) - at(k));
        }
        renorm(u);
      }
    }
  }

  Solution sol;
  auto recovered_mu = [&](const RadialField& w) {
    return -rf_inner(grad_L(w, ctx), w) / m;
  };

  double step = opts.step0;
  EnergyBreakdown e = evaluate(u, ctx);
  for (int it = 0; it < opts.max_iter; ++it) {
    const RadialField gl = grad_L(u, ctx);
    // tangent component on the mass sphere
    RadialField gt = gl;
    const double lag = rf_inner(gl, u) / m;
    for (int j = 0; j < gt.n(); ++j) gt.v[j] -= lag * u.v[j];

    const double mu = recovered_mu(u);
    ctx.lambda = mu > 0 ? std::log(mu) : ctx.lambda;
    // full Euler-Lagrange residual with the recovered multiplier
    RadialField res = gl;
    for (int j = 0; j < res.n(); ++j) res.v[j] += mu * u.v[j];
    const double rn = rf_norm(res);

    EnergyBreakdown eb = evaluate(u, ctx);
    sol.history.push_back(make_record(u, res, eb, ctx, true));
    sol.iterations = it;
    if (rn <= opts.tol_g && eb.r1 <= opts.tol_p && mu > 0) {
      sol.converged = true;
      e = eb;
      break;
    }

    const RadialField dir = rf_helmholtz_inverse(gt, ctx.s, 1.0);
    const double slope = rf_inner(gt, dir);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      RadialField trial = u;
      for (int j = 0; j < trial.n(); ++j) trial.v[j] -= step * dir.v[j];
      renorm(trial);
      const EnergyBreakdown et = evaluate(trial, ctx);
      if (et.L <= eb.L - opts.armijo * step * slope) {
        u = trial;
        e = et;
        accepted = true;
        step = std::min(step * 2.0, opts.step0);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      sol.diagnosis = "line search stalled";
      e = eb;
      break;
    }
  }
  const double mu = recovered_mu(u);
  sol.u = u;
  sol.m = rf_mass2(u);
  sol.lambda = mu > 0 ? std::log(mu) : ctx_in.lambda;
  ctx.lambda = sol.lambda;
  sol.energies = evaluate(u, ctx);
  RadialField res = grad_L(u, ctx);
  for (int j = 0; j < res.n(); ++j) res.v[j] += mu * u.v[j];
  sol.grad_norm = rf_norm(res);
  sol.pohozaev_res = sol.energies.r1;
  if (mu <= 0) {
    sol.converged = false;
    sol.diagnosis = "recovered multiplier nonpositive";
  }
  return sol;
}

/// Heuristic excited-state search: descend (fixed mu) from the fiber
/// maximizer of J along an admissible n-path; keep candidates that are
/// mutually distinct in L^2 and energy.
inline std::vector<Solution> excited_search(int n, const FunctionalContext& ctx,
                                            const PathEvaluator& ev, int P, double L,
                                            const SolverOptions& opts = {}) {
  std::vector<Solution> out;
  const auto t_samples = sample_polyhedron(n, n > 1 ? 5 : 2);
  // fiber maximizer over (t, h) of J(h sigma0 gamma(t)(./theta*))
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> t_best;
  double h_best = 1.0, th = 1.0;
  {
    std::vector<BaseIntegrals> boundary;
    for (const auto& t : t_samples) boundary.push_back(ev.at(t));
    th = theta_star(boundary, ctx).theta_star;
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
      for (int k = 1; k <= 16; ++k) {
        const double h = k / 16.0;
        BaseIntegrals q = boundary[i];
        const double p = ctx.nl.homogeneity;
        if (p > 0) {
          q.a *= h * h;
          q.b *= h * h;
          q.d *= std::pow(h, 2 * p);
        } else {
          q = ev.at(t_samples[i], h * ev.spec.sigma0);
        }
        const double Jh = scaled_J(q, ctx, th);
        if (Jh > best) {
          best = Jh;
          t_best = t_samples[i];
          h_best = h;
        }
      }
    }
  }
  const RadialProfile gam = annuli_path(t_best, ev.spec, ctx.N, ctx.alpha);
  RadialField init = make_radial_field(
      P, L, [&](double r) { return h_best * ev.spec.sigma0 * gam.eval(r / th); });
  Solution cand = solve_fixed_mu(ctx, init, opts);
  out.push_back(std::move(cand));

  // the n = 1 fiber start for distinctness comparison
  if (n > 1) {
    Solution ground = solve_fixed_mu(ctx, default_init(P, L, ctx), opts);
    const double dist = rf_norm([&] {
      RadialField d = out.front().u;
      for (int j = 0; j < d.n(); ++j) d.v[j] -= ground.u.v[j];
      return d;
    }());
    const bool distinct =
        dist / std::sqrt(std::max(ground.m, 1e-300)) >= 1e-2 &&
        std::fabs(out.front().energies.J - ground.energies.J) >= 1e-6;
    if (!distinct && !out.front().diagnosis.empty())
      out.front().diagnosis += "; collapsed onto ground state";
    else if (!distinct)
      out.front().diagnosis = "collapsed onto ground state";
    out.push_back(std::move(ground));
  }
  return out;
}

struct PSPReport {
  std::vector<double> I_m, dIm_dlambda, dual_norm, P;
  bool vanishing_flag = false;  // lambda drift toward -inf (mass escaping)
};

inline PSPReport psp_diagnostic(const std::vector<IterRecord>& history) {
  PSPReport rep;
  for (const auto& r : history) {
    rep.I_m.push_back(r.I_m);
    rep.dIm_dlambda.push_back(r.dIm_dlambda);
    rep.dual_norm.push_back(r.dual_norm);
    rep.P.push_back(r.P);
  }
  if (history.size() >= 16) {
    // sustained decrease of the objective toward 0 with non-vanishing tail
    const std::size_t nn = history.size();
    const double early = history[nn / 2].objective, late = history[nn - 1].objective;
    rep.vanishing_flag = late > -1e-12 && late <= early && std::fabs(late) < 1e-8;
  }
  return rep;
}

}  // namespace fhc
