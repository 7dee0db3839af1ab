#pragma once

// Uniform radial grid backend for N = 3. A radial function u(r) on [0, L]
// with u(L) = 0 is stored at the interior nodes r_j = j h, h = L/P,
// j = 1..P-1, through w(r) = r u(r). The sine modes sin(k_m r)/r,
// k_m = pi m / L, diagonalize (-Delta)^s, so all multiplier operators reduce
// to a DST-I of w.

#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fhc/constants.hpp"

namespace fhc {

struct RadialField {
  int P = 0;      // number of intervals; P-1 interior nodes
  double L = 0;   // domain radius
  std::vector<double> v;  // u(r_j), j = 1..P-1

  double h() const { return L / P; }
  double r(int j) const { return (j + 1) * h(); }  // j is 0-based into v
  int n() const { return P - 1; }
};

inline RadialField make_radial_field(int P, double L) {
  if (P < 8 || L <= 0) throw std::invalid_argument("make_radial_field: P >= 8, L > 0");
  RadialField f;
  f.P = P;
  f.L = L;
  f.v.assign(static_cast<std::size_t>(P - 1), 0.0);
  return f;
}

template <typename G>
RadialField make_radial_field(int P, double L, const G& g) {
  RadialField f = make_radial_field(P, L);
  for (int j = 0; j < f.n(); ++j) f.v[j] = g(f.r(j));
  return f;
}

/// <a, b> = 4 pi h sum r^2 a b — the discrete L^2(R^3) pairing.
inline double rf_inner(const RadialField& a, const RadialField& b) {
  if (a.P != b.P || a.L != b.L) throw std::invalid_argument("rf_inner: grid mismatch");
  double s = 0;
  for (int j = 0; j < a.n(); ++j) {
    const double r = a.r(j);
    s += r * r * a.v[j] * b.v[j];
  }
  return 4.0 * pi * a.h() * s;
}

inline double rf_mass2(const RadialField& u) { return rf_inner(u, u); }

namespace detail {

/// DST-I (FFTW RODFT00) of w_j = r_j u_j; W_m = 2 sum_j w_j sin(pi j m / P).
inline std::vector<double> rf_sine_coeffs(const RadialField& u) {
  const int n = u.n();
  std::vector<double> w(n), W(n);
  for (int j = 0; j < n; ++j) w[j] = u.r(j) * u.v[j];
  fftw_plan plan = fftw_plan_r2r_1d(n, w.data(), W.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fftw DST plan failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return W;
}

/// Apply a multiplier g(k_m) in sine space and return the new radial field.
template <typename G>
RadialField rf_multiplier(const RadialField& u, const G& g) {
  const int n = u.n();
  std::vector<double> W = rf_sine_coeffs(u);
  for (int m = 0; m < n; ++m) W[m] *= g(pi * (m + 1) / u.L);
  std::vector<double> w(n);
  fftw_plan plan = fftw_plan_r2r_1d(n, W.data(), w.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  RadialField out = u;
  const double scale = 1.0 / (2.0 * u.P);  // RODFT00 round trip gains 2P
  for (int j = 0; j < n; ++j) out.v[j] = scale * w[j] / out.r(j);
  return out;
}

}  // namespace detail

inline RadialField rf_frac_laplacian(const RadialField& u, double s) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("rf_frac_laplacian: s in (0,1)");
  return detail::rf_multiplier(u, [s](double k) { return std::pow(k * k, s); });
}

/// ((-Delta)^s + mu)^{-1}, the descent preconditioner.
inline RadialField rf_helmholtz_inverse(const RadialField& u, double s, double mu) {
  if (!(mu > 0)) throw std::invalid_argument("rf_helmholtz_inverse: mu > 0");
  return detail::rf_multiplier(
      u, [s, mu](double k) { return 1.0 / (std::pow(k * k, s) + mu); });
}

/// [u]_s^2 = 2 pi h^2 / L * sum k_m^{2s} W_m^2; at s -> 0 this reproduces the
/// discrete mass exactly (sine-transform Parseval).
inline double rf_dirichlet(const RadialField& u, double s) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("rf_dirichlet: s in (0,1)");
  const std::vector<double> W = detail::rf_sine_coeffs(u);
  double acc = 0;
  for (int m = 0; m < u.n(); ++m) {
    const double k = pi * (m + 1) / u.L;
    acc += std::pow(k * k, s) * W[m] * W[m];
  }
  return 2.0 * pi * u.h() * u.h() / u.L * acc;
}

/// Riesz potential I_alpha * g of a radial density. alpha = 2 uses the exact
/// Newtonian split (1/r) int_0^r rho^2 g + int_r^L rho g via prefix sums,
/// O(P); other alpha fall back to the 1D reduction kernel, O(P^2).
inline RadialField rf_riesz(const RadialField& g, double alpha);

namespace detail {
inline double thim_kernel_n3(double tau, double alpha) {
  // closed form of the N=3 polar-angle integral (see radial.hpp)
  const double C = riesz_constant(3, alpha);
  if (tau < 1e-12) return C * unit_sphere_area(3);
  const double c = 2.0 * pi * C;
  if (std::fabs(alpha - 1.0) < 1e-12)
    return (c / tau) * std::log((tau + 1.0) / std::fabs(tau - 1.0));
  return c / (tau * (alpha - 1.0)) *
         (std::pow(tau + 1.0, alpha - 1.0) -
          std::pow(std::fabs(tau - 1.0), alpha - 1.0));
}
}  // namespace detail

inline RadialField rf_riesz(const RadialField& g, double alpha) {
  if (!(alpha > 0 && alpha < 3)) throw std::invalid_argument("rf_riesz: alpha in (0,3)");
  const int n = g.n();
  const double h = g.h();
  RadialField out = g;
  if (std::fabs(alpha - 2.0) < 1e-14) {
    // trapezoid prefix sums of rho^2 g and suffix sums of rho g
    std::vector<double> in(n + 1, 0.0), outp(n + 1, 0.0);
    for (int j = 0; j < n; ++j) {
      const double r = g.r(j);
      in[j + 1] = r * r * g.v[j];
      outp[j + 1] = r * g.v[j];
    }
    std::vector<double> pre(n + 1, 0.0), suf(n + 2, 0.0);
    for (int j = 1; j <= n; ++j) pre[j] = pre[j - 1] + 0.5 * h * (in[j - 1] + in[j]);
    outp.push_back(0.0);  // g(L) = 0
    for (int j = n; j >= 1; --j) suf[j] = suf[j + 1] + 0.5 * h * (outp[j] + outp[j + 1]);
    for (int j = 0; j < n; ++j) out.v[j] = pre[j + 1] / g.r(j) + suf[j + 1];
    return out;
  }
  // trapezoid in rho with the kink at rho = r sitting exactly on a node
  for (int j = 0; j < n; ++j) {
    const double r = g.r(j);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      if (i == j && alpha <= 1.0) continue;  // integrable kernel singularity
      const double rho = g.r(i);
      acc += detail::thim_kernel_n3(r / rho, alpha) * std::pow(rho, alpha - 1.0) *
             g.v[i];
    }
    out.v[j] = acc * h;
  }
  return out;
}

}  // namespace fhc
