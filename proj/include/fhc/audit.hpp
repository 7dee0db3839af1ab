#pragma once

// Numerical integration-by-parts audits: two-point divergence kernels for the
// fractional Laplacian and Riesz sides, double-quadrature pairings with
// symmetric diagonal exclusion (N = 1), the cut-off vector-field family, and
// the assembled Pohozaev audit for radial solutions.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fhc/constants.hpp"
#include "fhc/functionals.hpp"
#include "fhc/quadrature.hpp"
#include "fhc/radial_spectral.hpp"

namespace fhc {

using Vec3 = std::array<double, 3>;

struct VectorField {
  int N = 1;
  std::function<Vec3(const Vec3&)> X;
  std::function<double(const Vec3&)> div;
  double support_radius = 0;
};

namespace detail {
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec3& a) { return dot(a, a); }
}  // namespace detail

/// K_X^c(x,y) = (div X(x) + div X(y))/2 - c (X(x)-X(y)).(x-y)/|x-y|^2 with
/// c = (N+2s)/2 on the Laplacian side and (N-alpha)/2 on the Riesz side.
inline double divergence_kernel(const VectorField& X, const Vec3& x, const Vec3& y,
                                double c) {
  Vec3 diff{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
  const double d2 = detail::norm2(diff);
  if (d2 == 0) throw std::invalid_argument("divergence_kernel: x = y");
  const Vec3 Xx = X.X(x), Xy = X.X(y);
  Vec3 dX{Xx[0] - Xy[0], Xx[1] - Xy[1], Xx[2] - Xy[2]};
  return 0.5 * (X.div(x) + X.div(y)) - c * detail::dot(dX, diff) / d2;
}

inline double frac_div_kernel(const VectorField& X, const Vec3& x, const Vec3& y,
                              double s) {
  return divergence_kernel(X, x, y, 0.5 * (X.N + 2 * s));
}

inline double riesz_div_kernel(const VectorField& X, const Vec3& x, const Vec3& y,
                               double alpha) {
  return divergence_kernel(X, x, y, 0.5 * (X.N - alpha));
}

/// phi_1: 1 on [0,1], cubic Hermite ramp to 0 on [1,2]; phi_n = phi_1(./n).
inline double cutoff_phi(double r, double n) {
  const double t = r / n;
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double w = t - 1.0;
  return 1.0 - w * w * (3.0 - 2.0 * w);
}
inline double cutoff_phi_deriv(double r, double n) {
  const double t = r / n;
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double w = t - 1.0;
  return -(6.0 * w - 6.0 * w * w) / n;
}

/// X_n(x) = phi_1(|x|/n) x, div X_n = N phi_n + phi_1'(|x|/n) |x|/n.
inline VectorField cutoff_family(int n, int N) {
  if (n < 1) throw std::invalid_argument("cutoff_family: n >= 1");
  VectorField X;
  X.N = N;
  X.support_radius = 2.0 * n;
  const double nd = n;
  X.X = [nd](const Vec3& x) {
    const double r = std::sqrt(detail::norm2(x));
    const double p = cutoff_phi(r, nd);
    return Vec3{p * x[0], p * x[1], p * x[2]};
  };
  X.div = [nd, N](const Vec3& x) {
    const double r = std::sqrt(detail::norm2(x));
    return N * cutoff_phi(r, nd) + cutoff_phi_deriv(r, nd) * r;
  };
  return X;
}

struct KernelPair {
  double lhs = 0, rhs = 0, residual = 0;
};

namespace detail {
inline KernelPair finish_pair(double lhs, double rhs) {
  return {lhs, rhs, std::fabs(lhs - rhs) / (std::fabs(lhs) + std::fabs(rhs) + 1e-30)};
}

/// sum_{j > m} [h (jh)^{alpha-1} - int over the cell of d^{alpha-1}]:
/// exact midpoint-rule defect of the singular kernel, one half-line.
/// Terms decay like j^{alpha-3}, so the series truncates cleanly.
inline double midpoint_kernel_defect(double alpha, double h, int m) {
  double z = 0;
  for (int j = m + 1; j <= m + 20000; ++j)
    z += h * std::pow(j * h, alpha - 1.0) -
         (std::pow((j + 0.5) * h, alpha) - std::pow((j - 0.5) * h, alpha)) / alpha;
  return z;
}
}  // namespace detail

/// 1D test data for the pairings: values of u and u' on a uniform grid over
/// [-A, A), aligned with the periodic Field grid of the same (A, n) so that
/// spectral operators can supply companion data on matching nodes.
struct Samples1D {
  double A = 8.0;
  int n = 2048;
  std::vector<double> u, du;  // size n, at x_i = -A + i h
  double h() const { return 2.0 * A / n; }
  double x(int i) const { return -A + i * h(); }
};

template <typename F, typename DF>
Samples1D make_samples(double A, int n, const F& f, const DF& df) {
  Samples1D s;
  s.A = A;
  s.n = n;
  s.u.resize(n);
  s.du.resize(n);
  for (int i = 0; i < n; ++i) {
    s.u[i] = f(s.x(i));
    s.du[i] = df(s.x(i));
  }
  return s;
}

/// lhs of the fractional pairing: (C_{1,s}/2) double sum over |x_i - x_j| >
/// eps of |u_i - u_j|^2 / |x_i - x_j|^{1+2s} K_X^s, with the excluded strip
/// restored by its leading-order analytic value
/// (C/2) int u'(x)^2 (1-c) X'(x) 2 eps^{2-2s}/(2-2s) dx (the 1D diagonal
/// kernel limit is (1-c) X' with c = (1+2s)/2), and with the exterior region
/// |y| > A, where u vanishes, integrated adaptively per row. eps must be an
/// exact multiple of the grid spacing (index-based exclusion).
inline double pairing_lhs_laplacian(const Samples1D& S, const VectorField& X, double s,
                                    int eps_cells, bool diagonal_correction = true) {
  const double C = frac_laplacian_constant(1, s);
  const double h = S.h();
  double acc = 0;
  for (int i = 0; i < S.n; ++i) {
    const Vec3 xi{S.x(i), 0, 0};
    for (int j = i + eps_cells + 1; j < S.n; ++j) {
      const double d = (j - i) * h;
      const double du = S.u[i] - S.u[j];
      const Vec3 xj{S.x(j), 0, 0};
      acc += 2.0 * du * du / std::pow(d, 1.0 + 2.0 * s) *
             frac_div_kernel(X, xi, xj, s);  // factor 2: (i,j) and (j,i)
    }
  }
  acc *= 0.5 * C * h * h;
  if (diagonal_correction) {
    const double eps = eps_cells * h + 0.5 * h;  // strip |x-y| <= eps excluded
    double corr = 0;
    for (int i = 0; i < S.n; ++i) {
      const Vec3 xi{S.x(i), 0, 0};
      corr += S.du[i] * S.du[i] * X.div(xi);
    }
    // diagonal kernel limit in 1D: (1 - c) X'(x), c = (N + 2s)/2
    corr *= 1.0 - 0.5 * (X.N + 2.0 * s);
    corr *= h * 0.5 * C * 2.0 * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    acc += corr;
  }
  // pairs with one point beyond the sampled box: there u vanishes, so each
  // row contributes u(x)^2 int_{|y| > A} K_X^s(x,y)/|x-y|^{1+2s} dy for both
  // orderings; the substitution |y - x| = d0 v^{-1/(2s)} flattens the
  // half-line integral to d0^{-2s}/(2s) int_0^1 K(x, y(v)) dv
  double tail = 0;
  for (int i = 0; i < S.n; ++i) {
    if (S.u[i] == 0.0) continue;
    const double x = S.x(i);
    const Vec3 xi{x, 0, 0};
    auto half_line = [&](double sgn) {
      // midpoint cells cover [-A - h/2, A - h/2]
      const double d0 = (sgn > 0 ? S.A - h - x : S.A + x) + 0.5 * h;
      const double kernel_avg = adaptive_quad(
          [&](double v) {
            const double y = x + sgn * d0 * std::pow(v, -0.5 / s);
            return frac_div_kernel(X, xi, {y, 0, 0}, s);
          },
          0.0, 1.0, 1e-9);
      return std::pow(d0, -2.0 * s) / (2.0 * s) * kernel_avg;
    };
    tail += S.u[i] * S.u[i] * (half_line(1.0) + half_line(-1.0));
  }
  acc += C * h * tail;
  return acc;
}

/// rhs of the fractional pairing: -int (-Delta)^s u (u' X) dx, with
/// (-Delta)^s u supplied on the same grid.
inline double pairing_rhs_laplacian(const Samples1D& S,
                                    const std::vector<double>& frac_lap_u,
                                    const VectorField& X) {
  double acc = 0;
  for (int i = 0; i < S.n; ++i) {
    const Vec3 xi{S.x(i), 0, 0};
    acc -= frac_lap_u[i] * S.du[i] * X.X(xi)[0];
  }
  return acc * S.h();
}

inline KernelPair pairing_check_laplacian(const Samples1D& S,
                                          const std::vector<double>& frac_lap_u,
                                          const VectorField& X, double s,
                                          int eps_cells = 1) {
  return detail::finish_pair(pairing_lhs_laplacian(S, X, s, eps_cells),
                             pairing_rhs_laplacian(S, frac_lap_u, X));
}

/// lhs of the Riesz pairing: double sum of I_alpha(x-y) H(x) H(y)
/// K_X^{-alpha/2}(x,y) with the same indexed exclusion; excluded strip
/// restored by H(x)^2 K(x,x) C 2 eps^alpha / alpha.
inline double pairing_lhs_riesz(const Samples1D& H, const VectorField& X, double alpha,
                                int eps_cells, bool diagonal_correction = true) {
  const double C = riesz_constant(1, alpha);
  const double h = H.h();
  double acc = 0;
  for (int i = 0; i < H.n; ++i) {
    const Vec3 xi{H.x(i), 0, 0};
    for (int j = i + eps_cells + 1; j < H.n; ++j) {
      const double d = (j - i) * h;
      const Vec3 xj{H.x(j), 0, 0};
      acc += 2.0 * C * std::pow(d, alpha - 1.0) * H.u[i] * H.u[j] *
             riesz_div_kernel(X, xi, xj, alpha);
    }
  }
  acc *= h * h;
  if (diagonal_correction) {
    const double eps = eps_cells * h + 0.5 * h;
    double corr = 0;
    for (int i = 0; i < H.n; ++i) {
      const Vec3 xi{H.x(i), 0, 0};
      corr += H.u[i] * H.u[i] * X.div(xi);
    }
    // diagonal kernel limit in 1D: (1 - c) X'(x), c = (N - alpha)/2
    corr *= 1.0 - 0.5 * (X.N - alpha);
    // restore the excluded strip and remove the midpoint defect of the
    // singular kernel over the retained cells
    corr *= h * C * 2.0 *
            (std::pow(eps, alpha) / alpha -
             detail::midpoint_kernel_defect(alpha, h, eps_cells));
    acc += corr;
  }
  return acc;
}

/// (I_alpha * H)(x_i) by direct singular quadrature: midpoint cells plus the
/// analytic self-cell contribution 2 C (h/2)^alpha / alpha H(x).
inline std::vector<double> riesz_potential_1d(const Samples1D& H, double alpha) {
  const double C = riesz_constant(1, alpha);
  const double h = H.h();
  const double defect = detail::midpoint_kernel_defect(alpha, h, 0);
  std::vector<double> out(H.n, 0.0);
  for (int i = 0; i < H.n; ++i) {
    double acc = 0;
    for (int j = 0; j < H.n; ++j) {
      if (j == i) continue;
      acc += C * std::pow(std::fabs(i - j) * h, alpha - 1.0) * H.u[j];
    }
    out[i] = acc * h +
             H.u[i] * 2.0 * C * (std::pow(0.5 * h, alpha) / alpha - defect);
  }
  return out;
}

inline double pairing_rhs_riesz(const Samples1D& H, const VectorField& X, double alpha) {
  const std::vector<double> pot = riesz_potential_1d(H, alpha);
  double acc = 0;
  for (int i = 0; i < H.n; ++i) {
    const Vec3 xi{H.x(i), 0, 0};
    acc -= pot[i] * H.du[i] * X.X(xi)[0];
  }
  return acc * H.h();
}

inline KernelPair pairing_check_riesz(const Samples1D& H, const VectorField& X,
                                      double alpha, int eps_cells = 1) {
  return detail::finish_pair(pairing_lhs_riesz(H, X, alpha, eps_cells),
                             pairing_rhs_riesz(H, X, alpha));
}

/// Fitted decay exponent of the excluded-strip term from an eps sweep:
/// successive differences of the uncorrected lhs against eps.
template <typename LHS>
double epsilon_sweep_exponent(const LHS& lhs_at, const std::vector<int>& eps_cells) {
  std::vector<double> xs, ys;
  std::vector<double> vals;
  for (int m : eps_cells) vals.push_back(lhs_at(m));
  for (std::size_t k = 0; k + 1 < eps_cells.size(); ++k) {
    const double diff = std::fabs(vals[k] - vals[k + 1]);
    if (diff > 0) {
      xs.push_back(eps_cells[k]);
      ys.push_back(diff);
    }
  }
  return fit_loglog(xs, ys).slope;
}

// --- assembled Pohozaev audit for radial N = 3 candidates -------------------

struct AuditReport {
  // windowed one-sided integrals at each cutoff index, then extrapolated
  std::vector<int> cutoff_indices;
  std::vector<double> dirichlet_term, mass_term, riesz_term;
  double dirichlet_limit = 0, mass_limit = 0, riesz_limit = 0;
  double identity_residual = 0;    // |T1 + T2 - T3| / scale using the limits
  double direct_r1 = 0, direct_r2 = 0;
  std::string caveat =
      "discrete smoothness indicators only; Holder hypotheses not certified";
};

/// Audits a converged radial solution: computes the three one-sided integrals
/// -int (-Delta)^s u (u' r phi_n) dV, (mu/2) int u^2 div X_n dV and
/// -int (I_alpha * F(u)) f(u) u' r phi_n dV at n in cutoff_indices and
/// Richardson-extrapolates; their limits assemble the Pohozaev identity.
inline AuditReport pohozaev_full_audit(const RadialField& u,
                                       const FunctionalContext& ctx,
                                       std::vector<int> cutoff_indices = {2, 4, 8}) {
  AuditReport rep;
  rep.cutoff_indices = cutoff_indices;
  const double mu = ctx.mu();
  const int n = u.n();
  const double h = u.h();

  // u' by central differences (u(0) even, u(L) = 0)
  std::vector<double> du(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double up = j + 1 < n ? u.v[j + 1] : 0.0;
    const double um = j - 1 >= 0 ? u.v[j - 1] : u.v[0];
    du[j] = (up - um) / (2.0 * h);
  }
  const RadialField lap = rf_frac_laplacian(u, ctx.s);
  const RadialField pot = rf_riesz(rf_map(u, ctx.nl.F), ctx.alpha);

  for (int nc : cutoff_indices) {
    const double ncd = nc;
    double t1 = 0, t2 = 0, t3 = 0;
    for (int j = 0; j < n; ++j) {
      const double r = u.r(j);
      const double phi = cutoff_phi(r, ncd);
      const double divX = 3.0 * phi + cutoff_phi_deriv(r, ncd) * r;
      const double w = 4.0 * pi * h * r * r;  // radial volume element
      t1 -= w * lap.v[j] * du[j] * r * phi;
      t2 += w * 0.5 * mu * u.v[j] * u.v[j] * divX;
      t3 -= w * pot.v[j] * ctx.nl.f(u.v[j]) * du[j] * r * phi;
    }
    rep.dirichlet_term.push_back(t1);
    rep.mass_term.push_back(t2);
    rep.riesz_term.push_back(t3);
  }
  auto extrapolate = [](const std::vector<double>& v) {
    if (v.size() < 2) return v.empty() ? 0.0 : v.back();
    // Aitken step on the last three values when available
    if (v.size() >= 3) {
      const double a = v[v.size() - 3], b = v[v.size() - 2], c = v.back();
      const double den = (c - b) - (b - a);
      if (std::fabs(den) > 1e-14 * (std::fabs(c) + 1.0)) return c - (c - b) * (c - b) / den;
    }
    return v.back();
  };
  rep.dirichlet_limit = extrapolate(rep.dirichlet_term);
  rep.mass_limit = extrapolate(rep.mass_term);
  rep.riesz_limit = extrapolate(rep.riesz_term);
  const double scale = std::fabs(rep.dirichlet_limit) + std::fabs(rep.mass_limit) +
                       std::fabs(rep.riesz_limit) + 1e-300;
  rep.identity_residual =
      std::fabs(rep.dirichlet_limit + rep.mass_limit - rep.riesz_limit) / scale;
  const EnergyBreakdown e = evaluate(u, ctx);
  rep.direct_r1 = e.r1;
  rep.direct_r2 = e.r2;
  return rep;
}

}  // namespace fhc
