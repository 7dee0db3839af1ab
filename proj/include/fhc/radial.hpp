#pragma once

// Radial Riesz machinery: the 1D reduction kernel F_alpha, exact radial
// convolution for piecewise-linear compactly supported profiles, annuli
// geometry (thickness law, regularized indicators) and their interaction
// matrices.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhc/constants.hpp"
#include "fhc/quadrature.hpp"

namespace fhc {

/// Compactly supported radial function, piecewise linear between nodes and
/// zero outside [nodes.front(), nodes.back()]. weights are hat-function
/// weights for the measure r^{N-1} dr, so sum w_i*v_i = integral of the
/// interpolant.
struct RadialProfile {
  int N = 3;
  std::vector<double> nodes;
  std::vector<double> values;
  std::vector<double> weights;

  double eval(double r) const {
    if (nodes.empty() || r < nodes.front() || r > nodes.back()) return 0.0;
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    if (it == nodes.begin()) return values.front();
    if (it == nodes.end()) return values.back();
    const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    const double a = nodes[j - 1], b = nodes[j];
    const double t = (r - a) / (b - a);
    return (1.0 - t) * values[j - 1] + t * values[j];
  }
  double support_radius() const { return nodes.empty() ? 0.0 : nodes.back(); }
};

namespace detail {
inline void build_weights(RadialProfile& p) {
  const std::size_t n = p.nodes.size();
  p.weights.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = p.nodes[j], b = p.nodes[j + 1];
    // hat-function moments against r^{N-1} on [a,b], exact under GL8
    p.weights[j] += gauss8(
        [&](double r) { return (b - r) / (b - a) * std::pow(r, p.N - 1); }, a, b);
    p.weights[j + 1] += gauss8(
        [&](double r) { return (r - a) / (b - a) * std::pow(r, p.N - 1); }, a, b);
  }
}
}  // namespace detail

inline RadialProfile make_profile(int N, std::vector<double> nodes,
                                  std::vector<double> values) {
  if (N < 1 || N > 3) throw std::invalid_argument("make_profile: N in {1,2,3}");
  if (nodes.size() != values.size() || nodes.size() < 2)
    throw std::invalid_argument("make_profile: need matching nodes/values, >= 2");
  if (nodes.front() < 0.0) throw std::invalid_argument("make_profile: nodes >= 0");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("make_profile: nodes strictly increasing");
  RadialProfile p;
  p.N = N;
  p.nodes = std::move(nodes);
  p.values = std::move(values);
  detail::build_weights(p);
  return p;
}

/// Sample a callable on given nodes.
inline RadialProfile make_profile(int N, std::vector<double> nodes,
                                  const std::function<double(double)>& f) {
  std::vector<double> v(nodes.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(nodes[i]);
  return make_profile(N, std::move(nodes), std::move(v));
}

/// integral of g(r, u(r)) r^{N-1} dr over the support, GL8 per linear segment.
template <typename G>
double profile_integral(const RadialProfile& p, const G& g) {
  double acc = 0;
  for (std::size_t j = 0; j + 1 < p.nodes.size(); ++j) {
    const double a = p.nodes[j], b = p.nodes[j + 1];
    acc += gauss8(
        [&](double r) { return g(r, p.eval(r)) * std::pow(r, p.N - 1); }, a, b);
  }
  return acc;
}

/// ||u||_2^2 over R^N for the radial interpolant.
inline double profile_mass2(const RadialProfile& p) {
  return unit_sphere_area(p.N) *
         profile_integral(p, [](double, double u) { return u * u; });
}

// ---------------------------------------------------------------------------
// 1D reduction kernel F_alpha: (I_alpha * u)(r) = int_0^inf F_alpha(r/rho)
// rho^{alpha-1} u(rho) drho for radial u. Closed forms for N=1 and N=3;
// adaptive polar-angle quadrature for N=2. Singular at tau=1 when alpha <= 1.

inline double thim_kernel(double tau, int N, double alpha) {
  if (!(tau >= 0.0)) throw std::invalid_argument("thim_kernel: tau >= 0");
  if (!(alpha > 0.0 && alpha < N)) throw std::invalid_argument("thim_kernel: alpha in (0,N)");
  const double C = riesz_constant(N, alpha);
  if (tau == 1.0 && alpha <= 1.0)
    throw std::domain_error("thim_kernel: singular at tau=1 for alpha <= 1");
  if (tau < 1e-12) return C * unit_sphere_area(N);  // common limit at tau=0

  switch (N) {
    case 1:
      return C * (std::pow(std::fabs(tau - 1.0), alpha - 1.0) +
                  std::pow(tau + 1.0, alpha - 1.0));
    case 3: {
      // polar-angle integral reduces exactly via w = tau^2 - 2 tau cos(phi) + 1
      const double c = 2.0 * pi * C;
      if (std::fabs(alpha - 1.0) < 1e-12)
        return (c / tau) * std::log((tau + 1.0) / std::fabs(tau - 1.0));
      return c / (tau * (alpha - 1.0)) *
             (std::pow(tau + 1.0, alpha - 1.0) -
              std::pow(std::fabs(tau - 1.0), alpha - 1.0));
    }
    case 2: {
      // F(tau) = 2C int_0^pi (tau^2 - 2 tau cos(phi) + 1)^{(alpha-2)/2} dphi;
      // integrand peaks at phi = 0, sharpening as tau -> 1.
      auto g = [&](double phi) {
        const double d2 = tau * tau - 2.0 * tau * std::cos(phi) + 1.0;
        return std::pow(d2, 0.5 * (alpha - 2.0));
      };
      const double split = std::min(0.5, std::max(1e-6, 4.0 * std::fabs(tau - 1.0)));
      const double I = adaptive_quad(g, 0.0, split, 1e-11, 0.0, 52) +
                       adaptive_quad(g, split, pi, 1e-11, 0.0, 52);
      return 2.0 * C * I;
    }
  }
  throw std::invalid_argument("thim_kernel: N in {1,2,3}");
}

/// Pointwise radial Riesz potential of a profile: splits the quadrature at
/// rho = r where the kernel has a kink (or an integrable singularity).
inline double radial_convolve_at(const RadialProfile& u, double alpha, double r) {
  if (!(alpha > 0.0 && alpha < u.N))
    throw std::invalid_argument("radial_convolve_at: alpha in (0,N)");
  auto integrand = [&](double rho) {
    const double tau = r / rho;
    // quadrature nodes can round onto the integrable singularity at tau = 1;
    // the point has zero measure, so drop it rather than evaluate
    if (tau == 1.0 && alpha <= 1.0) return 0.0;
    return thim_kernel(tau, u.N, alpha) * std::pow(rho, alpha - 1.0) * u.eval(rho);
  };
  double acc = 0;
  for (std::size_t j = 0; j + 1 < u.nodes.size(); ++j) {
    double a = u.nodes[j], b = u.nodes[j + 1];
    if (a <= 0.0) a = std::min(b, 1e-14);  // rho=0 endpoint: tau -> inf handled below
    std::vector<double> cuts{a, b};
    if (r > a && r < b) cuts.insert(cuts.begin() + 1, r);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      acc += adaptive_quad(integrand, cuts[k], cuts[k + 1], 1e-10, 0.0, 44);
  }
  return acc;
}

/// Riesz potential evaluated on the profile's own nodes (plus zero tails).
inline RadialProfile radial_convolve(const RadialProfile& u, double alpha) {
  RadialProfile out = u;
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    const double r = std::max(u.nodes[i], 1e-14);
    out.values[i] = radial_convolve_at(u, alpha, r);
  }
  detail::build_weights(out);
  return out;
}

/// D_alpha(u, v) = int (I_alpha * u) v over R^N for radial profiles.
inline double radial_riesz_energy(const RadialProfile& u, const RadialProfile& v,
                                  double alpha) {
  if (u.N != v.N) throw std::invalid_argument("radial_riesz_energy: N mismatch");
  double acc = 0;
  for (std::size_t j = 0; j + 1 < v.nodes.size(); ++j) {
    const double a = v.nodes[j], b = v.nodes[j + 1];
    acc += adaptive_quad(
        [&](double r) {
          return radial_convolve_at(u, alpha, r) * v.eval(r) *
                 std::pow(r, v.N - 1);
        },
        a, b, 1e-9, 0.0, 24);
  }
  return acc * unit_sphere_area(v.N);
}

// ---------------------------------------------------------------------------
// Annuli

/// Half-thickness law making Riesz self-interactions of A(R, h_R) uniformly
/// bounded as R grows.
inline double annuli_thickness(double R, int N, double alpha) {
  if (!(R >= 2.0)) throw std::invalid_argument("annuli_thickness: R >= 2");
  if (!(alpha > 0.0 && alpha < N))
    throw std::invalid_argument("annuli_thickness: alpha in (0,N)");
  if (alpha > 1.0) return std::pow(R, -0.5 * (N - 2 + alpha));
  if (alpha == 1.0) return std::pow(R, -0.5 * (N - 1)) / std::sqrt(std::log(R));
  return std::pow(R, -(N - 1.0) / (1.0 + alpha));
}

struct Annulus {
  double R = 2.0;
  double h = 0.0;
};

/// Sharp indicator of the annulus [R-h, R+h] as a two-node profile;
/// zero-measure annuli (h = 0) are the zero profile.
inline RadialProfile annulus_indicator(const Annulus& a, int N) {
  if (a.R - a.h < 0.0) throw std::invalid_argument("annulus_indicator: R - h >= 0");
  if (a.h <= 0.0) return make_profile(N, {a.R, a.R + 1.0}, {0.0, 0.0});
  return make_profile(N, {a.R - a.h, a.R + a.h}, {1.0, 1.0});
}

/// Regularized indicator: 1 on [R-h, R+h], linear ramps of width eps.
inline RadialProfile annulus_bump(double R, double h, double eps, int N) {
  if (h <= 0.0) return make_profile(N, {R, R + 1.0}, {0.0, 0.0});
  const double lo = std::max(0.0, R - h - eps);
  return make_profile(N, {lo, R - h, R + h, R + h + eps}, {0.0, 1.0, 1.0, 0.0});
}

namespace detail {

// int_a^b rho (r + rho)^{alpha-1} drho, alpha != 1
inline double ring_seg_sum(double r, double a, double b, double alpha) {
  auto F = [&](double rho) {
    const double w = r + rho;
    return std::pow(w, alpha + 1.0) / (alpha + 1.0) -
           r * std::pow(w, alpha) / alpha;
  };
  return F(b) - F(a);
}

// int_a^b rho |r - rho|^{alpha-1} drho, alpha != 1, split at rho = r
inline double ring_seg_diff(double r, double a, double b, double alpha) {
  auto below = [&](double lo, double hi) {  // rho in [lo, hi], hi <= r
    auto F = [&](double rho) {
      const double w = r - rho;
      return std::pow(w, alpha + 1.0) / (alpha + 1.0) -
             r * std::pow(w, alpha) / alpha;
    };
    return F(hi) - F(lo);
  };
  auto above = [&](double lo, double hi) {  // rho in [lo, hi], lo >= r
    auto F = [&](double rho) {
      const double w = rho - r;
      return std::pow(w, alpha + 1.0) / (alpha + 1.0) +
             r * std::pow(w, alpha) / alpha;
    };
    return F(hi) - F(lo);
  };
  if (b <= r) return below(a, b);
  if (a >= r) return above(a, b);
  return below(a, r) + above(r, b);
}

}  // namespace detail

/// Riesz interaction of two sharp annuli, int (I_alpha * chi_1) chi_2.
inline double annulus_interaction(const Annulus& a1, const Annulus& a2, int N,
                                  double alpha) {
  if (a1.h <= 0.0 || a2.h <= 0.0) return 0.0;
  if (N == 3 && std::fabs(alpha - 1.0) > 1e-12) {
    // polar reduction in R^3: the angular integral of |x-y|^{alpha-3} is
    // 2 pi [(r+rho)^{alpha-1} - |r-rho|^{alpha-1}] / ((alpha-1) r rho), and
    // the rho integral over an indicator is elementary; only a bounded
    // one-dimensional integral with Holder kinks is left for the quadrature
    const double lo2 = a2.R - a2.h, hi2 = a2.R + a2.h;
    auto W = [&](double r) {
      return r * (detail::ring_seg_sum(r, lo2, hi2, alpha) -
                  detail::ring_seg_diff(r, lo2, hi2, alpha));
    };
    const double lo1 = a1.R - a1.h, hi1 = a1.R + a1.h;
    std::vector<double> cuts{lo1, hi1};
    for (double c : {lo2, hi2})
      if (c > lo1 && c < hi1) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      acc += adaptive_quad(W, cuts[k], cuts[k + 1], 1e-11);
    const double pi = 3.14159265358979323846;
    return 8.0 * pi * pi * riesz_constant(3, alpha) / (alpha - 1.0) * acc;
  }
  return radial_riesz_energy(annulus_indicator(a1, N), annulus_indicator(a2, N),
                             alpha);
}

struct InteractionMatrix {
  int n = 1;
  std::vector<double> a;  // n*n, row-major, symmetric
  double A_estimate = 0.0;

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Annuli A(R^i, |t_i| h_{R^i}), i = 1..n, pairwise Riesz interactions and
/// the diagonal-dominance estimate A = sum a_ii - sum_{i != j} a_ij.
inline InteractionMatrix interaction_matrix(const std::vector<double>& t, double R,
                                            int N, double alpha) {
  const int n = static_cast<int>(t.size());
  if (n < 1) throw std::invalid_argument("interaction_matrix: n >= 1");
  double tmax = 0;
  for (double ti : t) tmax = std::max(tmax, std::fabs(ti));
  if (std::fabs(tmax - 1.0) > 1e-12)
    throw std::invalid_argument("interaction_matrix: t must satisfy max|t_i| = 1");
  std::vector<Annulus> ann(n);
  for (int i = 0; i < n; ++i) {
    const double Ri = std::pow(R, i + 1);
    ann[i] = {Ri, std::fabs(t[i]) * annuli_thickness(Ri, N, alpha)};
  }
  InteractionMatrix M;
  M.n = n;
  M.a.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = annulus_interaction(ann[i], ann[j], N, alpha);
      M.at(i, j) = v;
      M.at(j, i) = v;
    }
  double diag = 0, off = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) (i == j ? diag : off) += M.at(i, j);
  M.A_estimate = diag - off;
  return M;
}

/// Smallest R in [2, 64] with A_estimate > 0 at t = (1,...,1), by bisection.
/// Returns 2 if already positive there; throws if still nonpositive at 64.
inline double find_R_star(int n, int N, double alpha, double tol = 0.05) {
  const std::vector<double> t(static_cast<std::size_t>(n), 1.0);
  auto A = [&](double R) { return interaction_matrix(t, R, N, alpha).A_estimate; };
  double lo = 2.0, hi = 64.0;
  if (A(lo) > 0.0) return lo;
  if (!(A(hi) > 0.0)) throw std::runtime_error("find_R_star: A <= 0 up to R = 64");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (A(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

/// CSV export (r, value, weight).
inline void write_profile_csv(const RadialProfile& p, const std::string& path) {
  std::ofstream out(path);
  out << "r,value,weight\n";
  char buf[96];
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.nodes[i], p.values[i],
                  p.weights[i]);
    out << buf;
  }
}

}  // namespace fhc
