#pragma once

// Odd multidimensional paths on the polyhedron Sigma_n = {max|t_i| = 1}:
// the disjoint-bump variant (periodic Field) and the annuli variant
// (radial profiles), their admissibility certificates (theta*, D-floor),
// and path-based upper bounds for the minimax levels a_n(lambda), m_k.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "fhc/functionals.hpp"
#include "fhc/grid.hpp"
#include "fhc/radial.hpp"

namespace fhc {

enum class PathVariant { simple_bumps, annuli };

struct PathSpec {
  int n = 1;
  PathVariant variant = PathVariant::annuli;
  double sigma0 = 1.0;
  double R = 4.0;      // annuli base radius; shells sit at R^i
  double eps = 1e-2;   // ramp width of the regularized indicators
  // simple-bump shells: bump i is a C^1 plateau on [shell0 + gap*i,
  // shell0 + gap*i + width], disjoint by construction
  double shell0 = 0.5;
  double shell_gap = 2.0;
  double shell_width = 1.5;
};

/// Symmetric sample of Sigma_n: for each face {t_i = ±1} a uniform grid over
/// the remaining coordinates; antipodally closed, duplicates removed.
inline std::vector<std::vector<double>> sample_polyhedron(int n, int resolution) {
  if (n < 1 || resolution < 2)
    throw std::invalid_argument("sample_polyhedron: n >= 1, resolution >= 2");
  std::set<std::vector<double>> out;
  std::vector<double> grid1;
  for (int k = 0; k < resolution; ++k)
    grid1.push_back(-1.0 + 2.0 * k / (resolution - 1));
  // enumerate grids over n-1 free coordinates
  std::vector<int> idx(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0);
  for (int face = 0; face < n; ++face) {
    for (double sign : {1.0, -1.0}) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        std::vector<double> t(static_cast<std::size_t>(n));
        t[face] = sign;
        for (int d = 0, j = 0; d < n; ++d)
          if (d != face) t[d] = grid1[idx[j++]];
        out.insert(t);
        int d = 0;
        for (; d < n - 1; ++d) {
          if (++idx[d] < resolution) break;
          idx[d] = 0;
        }
        if (n == 1 || d == n - 1) break;
      }
    }
  }
  return {out.begin(), out.end()};
}

namespace detail {
/// C^1 plateau: 1 on [a+w, b-w], cubic Hermite ramps on [a, a+w], [b-w, b].
inline double plateau(double r, double a, double b, double w) {
  if (r <= a || r >= b) return 0.0;
  if (r < a + w) {
    const double t = (r - a) / w;
    return t * t * (3.0 - 2.0 * t);
  }
  if (r > b - w) {
    const double t = (b - r) / w;
    return t * t * (3.0 - 2.0 * t);
  }
  return 1.0;
}
}  // namespace detail

/// gamma(t) = sigma0 * sum t_i e_i with radial plateau bumps on disjoint
/// shells; exactly odd in t.
inline Field simple_path(const std::vector<double>& t, const PathSpec& spec,
                         const Grid& g) {
  const int n = static_cast<int>(t.size());
  const double outer = spec.shell0 + spec.shell_gap * (n - 1) + spec.shell_width;
  if (outer >= g.L) throw std::invalid_argument("simple_path: shells exceed the box");
  const double w = 0.25 * spec.shell_width;
  return make_radial_field(g, [&](double r) {
    double v = 0;
    for (int i = 0; i < n; ++i) {
      const double a = spec.shell0 + spec.shell_gap * i;
      v += t[i] * detail::plateau(r, a, a + spec.shell_width, w);
    }
    return spec.sigma0 * v;
  });
}

/// gamma_{eps,R}(t) = sum sgn(t_i) chi_eps(R^i, |t_i| h_{R^i}; .) as a
/// piecewise-linear radial profile (values in [-1, 1]; multiply by sigma0
/// before evaluating energies). Exactly odd in t.
inline RadialProfile annuli_path(const std::vector<double>& t, const PathSpec& spec,
                                 int N, double alpha) {
  const int n = static_cast<int>(t.size());
  std::vector<double> nodes{0.0}, values{0.0};
  double prev_hi = 0.0;
  for (int i = 0; i < n; ++i) {
    if (t[i] == 0.0) continue;
    const double Ri = std::pow(spec.R, i + 1);
    const double h = std::fabs(t[i]) * annuli_thickness(Ri, N, alpha);
    const double lo = Ri - h - spec.eps, hi = Ri + h + spec.eps;
    if (lo <= prev_hi)
      throw std::invalid_argument("annuli_path: regularized supports overlap");
    const double sgn = t[i] > 0 ? 1.0 : -1.0;
    nodes.insert(nodes.end(), {lo, Ri - h, Ri + h, hi});
    values.insert(values.end(), {0.0, sgn, sgn, 0.0});
    prev_hi = hi;
  }
  if (nodes.size() == 1) {  // t = 0 off Sigma_n; callers use it for gamma~(0)
    nodes.push_back(1.0);
    values.push_back(0.0);
  }
  return make_profile(N, std::move(nodes), std::move(values));
}

/// Base integrals of sigma0 * gamma(t) for either variant.
struct PathEvaluator {
  PathSpec spec;
  FunctionalContext ctx;
  Grid grid;  // used by the simple variant only

  BaseIntegrals at(const std::vector<double>& t, double sigma) const {
    if (spec.variant == PathVariant::simple_bumps) {
      PathSpec sp = spec;
      sp.sigma0 = sigma;
      return base_integrals(simple_path(t, sp, grid), ctx);
    }
    const RadialProfile gam = annuli_path(t, spec, ctx.N, ctx.alpha);
    RadialProfile scaled = gam;
    for (double& v : scaled.values) v *= sigma;
    BaseIntegrals q;
    q.a = sigma * sigma * profile_dirichlet(gam, ctx.s);
    q.b = sigma * sigma * profile_mass2(gam);
    q.d = D_value(scaled, ctx);
    return q;
  }
  BaseIntegrals at(const std::vector<double>& t) const { return at(t, spec.sigma0); }
};

struct Admissibility {
  double theta_star = 1.0;
  double max_boundary_J = 0.0;  // at theta_star; negative when admissible
  double D_floor = 0.0;         // min over boundary samples of D(sigma0 gamma(t))
};

/// Doubles theta until J(lambda, sigma0 gamma(t)(./theta)) < 0 on every
/// boundary sample (exact in theta via the scaling fiber).
inline Admissibility theta_star(const std::vector<BaseIntegrals>& boundary,
                                const FunctionalContext& ctx,
                                double theta_max = 1e6) {
  Admissibility adm;
  adm.D_floor = std::numeric_limits<double>::infinity();
  for (const auto& q : boundary) adm.D_floor = std::min(adm.D_floor, q.d);
  if (!(adm.D_floor > 0))
    throw std::domain_error("theta_star: path has nonpositive D on the boundary");
  for (double th = 1.0; th <= theta_max; th *= 2.0) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& q : boundary) worst = std::max(worst, scaled_J(q, ctx, th));
    if (worst < 0) {
      adm.theta_star = th;
      adm.max_boundary_J = worst;
      return adm;
    }
  }
  throw std::runtime_error("theta_star: no admissible dilation up to theta_max");
}

/// max over h in [0,1] of A h^2 - B h^{2p} (A, B > 0, p > 1): the exact
/// one-ray maximum used for homogeneous F.
inline double ray_max(double A, double B, double p) {
  const double h_star = std::min(1.0, std::pow(A / (p * B), 1.0 / (2.0 * p - 2.0)));
  return A * h_star * h_star - B * std::pow(h_star, 2.0 * p);
}

struct MinimaxEstimate {
  int n = 1;
  double lambda = 0;
  double a_n_upper = 0;
  double theta = 1;
  double sigma_scale = 1;  // amplitude factor certifying admissibility
  double D_floor = 0;
  double max_boundary_J = 0;
};

/// Certified upper bound on a_n(lambda) from precomputed boundary integrals.
/// For homogeneous F the family sigma gamma(t)(./theta) is optimized exactly:
/// the fiber maximum is amplitude-invariant once the ray peak is interior,
/// so the bound is min over theta of max over t of the closed-form ray
/// value, with the admissibility amplitude reported. Otherwise the path at
/// the doubling theta* is used with an h-grid fiber sweep.
inline MinimaxEstimate estimate_from_boundary(
    const std::vector<BaseIntegrals>& boundary, const FunctionalContext& ctx,
    const PathEvaluator* ev = nullptr,
    const std::vector<std::vector<double>>* t_samples = nullptr,
    int h_samples = 64) {
  const double p = ctx.nl.homogeneity;
  MinimaxEstimate est;
  est.lambda = ctx.lambda;
  est.D_floor = std::numeric_limits<double>::infinity();
  for (const auto& q : boundary) est.D_floor = std::min(est.D_floor, q.d);
  if (!(est.D_floor > 0))
    throw std::domain_error("estimate_a_n: path has nonpositive D on the boundary");

  if (p > 0) {
    const double cp = (1.0 - 1.0 / p) * std::pow(p, -1.0 / (p - 1.0));
    double best = std::numeric_limits<double>::infinity();
    double best_theta = 1.0, best_AB = 0.0;
    for (int i = 0; i <= 360; ++i) {
      const double th = 1e-4 * std::pow(1e12, i / 360.0);
      double worst = 0, worst_AB = 0;
      for (const auto& q : boundary) {
        const double A = 0.5 * (std::pow(th, ctx.N - 2 * ctx.s) * q.a +
                                ctx.mu() * std::pow(th, ctx.N) * q.b);
        const double B = 0.5 * std::pow(th, ctx.N + ctx.alpha) * q.d;
        worst = std::max(worst, cp * std::pow(A, p / (p - 1.0)) *
                                    std::pow(B, -1.0 / (p - 1.0)));
        worst_AB = std::max(worst_AB, A / B);
      }
      if (worst < best) {
        best = worst;
        best_theta = th;
        best_AB = worst_AB;
      }
    }
    est.a_n_upper = best;
    est.theta = best_theta;
    // amplitude sigma with J < 0 at the fiber end h = 1 for every t:
    // sigma^{2p-2} = 2 max A/B makes A sigma^2 - B sigma^{2p} < 0
    const double sigma = std::pow(2.0 * best_AB, 1.0 / (2.0 * p - 2.0));
    est.sigma_scale = sigma;
    double maxJ = -std::numeric_limits<double>::infinity();
    for (const auto& q : boundary) {
      const double A = 0.5 * (std::pow(best_theta, ctx.N - 2 * ctx.s) * q.a +
                              ctx.mu() * std::pow(best_theta, ctx.N) * q.b);
      const double B = 0.5 * std::pow(best_theta, ctx.N + ctx.alpha) * q.d;
      maxJ = std::max(maxJ, sigma * sigma * A - std::pow(sigma, 2.0 * p) * B);
    }
    est.max_boundary_J = maxJ;
    return est;
  }

  if (!ev || !t_samples)
    throw std::invalid_argument(
        "estimate_a_n: non-homogeneous F needs the path evaluator");
  const Admissibility adm = theta_star(boundary, ctx);
  double best = 0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    for (int k = 1; k <= h_samples; ++k) {
      const double h = double(k) / h_samples;
      const BaseIntegrals qh = ev->at((*t_samples)[i], h * ev->spec.sigma0);
      best = std::max(best, scaled_J(qh, ctx, adm.theta_star));
    }
  }
  est.a_n_upper = best;
  est.theta = adm.theta_star;
  est.D_floor = adm.D_floor;
  est.max_boundary_J = adm.max_boundary_J;
  return est;
}

inline MinimaxEstimate estimate_a_n(const PathEvaluator& ev,
                                    const std::vector<std::vector<double>>& t_samples,
                                    double lambda, int h_samples = 64) {
  FunctionalContext ctx = ev.ctx;
  ctx.lambda = lambda;
  std::vector<BaseIntegrals> boundary;
  boundary.reserve(t_samples.size());
  for (const auto& t : t_samples) boundary.push_back(ev.at(t));
  MinimaxEstimate est = estimate_from_boundary(boundary, ctx, &ev, &t_samples, h_samples);
  est.n = static_cast<int>(t_samples.front().size());
  return est;
}

/// (lambda, a_n_upper / e^lambda) across a lambda grid; the boundary
/// integrals are lambda-independent and computed once.
inline std::vector<std::pair<double, double>> asymptotic_scan(
    const PathEvaluator& ev, const std::vector<std::vector<double>>& t_samples,
    const std::vector<double>& lambda_grid) {
  std::vector<BaseIntegrals> boundary;
  for (const auto& t : t_samples) boundary.push_back(ev.at(t));
  std::vector<std::pair<double, double>> out;
  for (double lam : lambda_grid) {
    FunctionalContext ctx = ev.ctx;
    ctx.lambda = lam;
    const MinimaxEstimate est =
        estimate_from_boundary(boundary, ctx, &ev, &t_samples);
    out.emplace_back(lam, est.a_n_upper / std::exp(lam));
  }
  return out;
}

/// m_k upper bound: 2 min over the grid of a_k_upper / e^lambda.
inline double estimate_m_k(const PathEvaluator& ev,
                           const std::vector<std::vector<double>>& t_samples,
                           const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) throw std::invalid_argument("estimate_m_k: empty grid");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [lam, ratio] : asymptotic_scan(ev, t_samples, lambda_grid))
    best = std::min(best, ratio);
  return 2.0 * best;
}

struct Lemma47Report {
  bool applicable = true;
  double quotient_M = 1.0;
  double A_estimate = 0.0;
  double min_ratio = 0.0;  // min over (sigma, t) of D(sigma gamma)/F(sigma)^2
};

/// Small-amplitude interaction floor: D(sigma gamma_{eps,R}(t)) measured in
/// units of F(sigma)^2 against the diagonal-dominance estimate A.
inline Lemma47Report lemma47_check(const PathSpec& spec, const FunctionalContext& ctx,
                                   const std::vector<double>& sigma_samples,
                                   const std::vector<std::vector<double>>& t_samples) {
  Lemma47Report rep;
  rep.quotient_M = quotient_sup(ctx.nl);
  if (!std::isfinite(rep.quotient_M)) {
    rep.applicable = false;
    return rep;
  }
  std::vector<double> ones(static_cast<std::size_t>(spec.n), 1.0);
  rep.A_estimate = interaction_matrix(ones, spec.R, ctx.N, ctx.alpha).A_estimate;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& t : t_samples) {
    const RadialProfile gam = annuli_path(t, spec, ctx.N, ctx.alpha);
    for (double sigma : sigma_samples) {
      RadialProfile scaled = gam;
      for (double& v : scaled.values) v *= sigma;
      const double Fs = ctx.nl.F(sigma);
      rep.min_ratio = std::min(rep.min_ratio, D_value(scaled, ctx) / (Fs * Fs));
    }
  }
  return rep;
}

/// Shrinking-amplitude bound constant: C_sigma0 = sup_{tau >= 0} of
/// tau M^2 / 2 - L_sigma0 A tau^{p_m} / 4 with L_sigma0 = min of
/// F(tau)/tau^{p_m} over tau in (0, sigma0].
inline double c_sigma0(const Nonlinearity& nl, double sigma0, double M_norm2,
                       double A, double p_m) {
  double Lmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double tau = sigma0 * std::pow(1e-4, 1.0 - double(i) / 200.0);
    const double v = nl.F(tau) / std::pow(tau, p_m);
    if (std::isfinite(v)) Lmin = std::min(Lmin, v);
  }
  double best = 0;
  for (int i = 0; i <= 400; ++i) {
    const double tau = 1e-6 * std::pow(1e12, double(i) / 400.0);
    best = std::max(best, 0.5 * tau * M_norm2 - 0.25 * Lmin * A * std::pow(tau, p_m));
  }
  return best;
}

}  // namespace fhc
