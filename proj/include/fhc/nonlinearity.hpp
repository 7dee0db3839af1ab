#pragma once

// Catalog of nonlinearities F (with derivative f), parity detection, growth
// condition reports and the small-sigma quotient sup M.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhc/quadrature.hpp"

namespace fhc {

enum class Parity { odd, even, none };

struct Nonlinearity {
  std::string name;
  std::function<double(double)> F;
  std::function<double(double)> f;  // F'
  Parity parity = Parity::none;
  double sigma0 = 1.0;   // F(sigma0) > 0
  double delta0 = 1.0;   // constant-sign window (0, delta0]
  // p > 0 when F(c sigma) = c^p F(sigma) for c > 0 (enables exact scaling
  // shortcuts); 0 means not homogeneous.
  double homogeneity = 0.0;
};

struct ExponentSet {
  double q;       // (N+alpha)/N, lower-critical
  double p_m;     // (N+alpha+2s)/N, L^2-critical
  double p_star;  // (N+alpha)/(N-2s), upper-critical
};

inline ExponentSet exponents(int N, double s, double alpha) {
  if (!(s > 0 && s < 1) || !(alpha > 0 && alpha < N) || N < 2 * s)
    throw std::invalid_argument("exponents: need s in (0,1), alpha in (0,N), N > 2s");
  return {(N + alpha) / N, (N + alpha + 2 * s) / N, (N + alpha) / (N - 2 * s)};
}

inline std::pair<double, double> eval(const Nonlinearity& F, double sigma) {
  const double a = F.F(sigma), b = F.f(sigma);
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::overflow_error("nonlinearity overflow at sigma=" + std::to_string(sigma));
  return {a, b};
}

// --- catalog --------------------------------------------------------------

inline Nonlinearity make_power(double p) {
  if (p <= 1) throw std::invalid_argument("make_power: p > 1");
  Nonlinearity nl;
  nl.name = "power";
  nl.F = [p](double s) { return std::pow(std::fabs(s), p) / p; };
  nl.f = [p](double s) {
    return s == 0 ? 0.0 : std::pow(std::fabs(s), p - 2.0) * s;
  };
  nl.parity = Parity::even;
  nl.homogeneity = p;
  return nl;
}

inline Nonlinearity make_odd_power(double p) {
  if (p <= 1) throw std::invalid_argument("make_odd_power: p > 1");
  Nonlinearity nl;
  nl.name = "odd_power";
  nl.F = [p](double s) {
    return (s < 0 ? -1.0 : 1.0) * std::pow(std::fabs(s), p) / p;
  };
  nl.f = [p](double s) { return std::pow(std::fabs(s), p - 1.0); };
  nl.parity = Parity::odd;
  nl.homogeneity = p;
  return nl;
}

/// F' = sigma^3/(1+sigma^2): quadratic growth saturating to linear.
inline Nonlinearity make_saturable() {
  Nonlinearity nl;
  nl.name = "saturable";
  nl.F = [](double s) { return 0.5 * (s * s - std::log1p(s * s)); };
  nl.f = [](double s) { return s * s * s / (1.0 + s * s); };
  nl.parity = Parity::even;
  return nl;
}

namespace detail {
constexpr double kSigmaFloor = 1e-12;  // guards sin(1/sigma) near 0
}

/// |sigma|^beta (1.5 + 0.5 sin(1/|sigma|)), odd extension: oscillates near 0
/// between envelopes 1 and 2 so the quotient sup stays <= 2.
inline Nonlinearity make_oscillating_bounded(double beta) {
  if (beta <= 1) throw std::invalid_argument("make_oscillating_bounded: beta > 1");
  Nonlinearity nl;
  nl.name = "oscillating_bounded";
  nl.F = [beta](double s) {
    const double a = std::fabs(s);
    if (a < detail::kSigmaFloor) return 0.0;
    const double v = std::pow(a, beta) * (1.5 + 0.5 * std::sin(1.0 / a));
    return s < 0 ? -v : v;
  };
  nl.f = [beta](double s) {
    const double a = std::fabs(s);
    if (a < detail::kSigmaFloor) return 0.0;
    // d/da [a^b (1.5 + 0.5 sin(1/a))], even in s since F is odd
    return beta * std::pow(a, beta - 1.0) * (1.5 + 0.5 * std::sin(1.0 / a)) -
           0.5 * std::pow(a, beta - 2.0) * std::cos(1.0 / a);
  };
  nl.parity = Parity::odd;
  return nl;
}

/// sigma^{b1}(1 + sin(1/sigma)) + sigma^{b2}(1 - sin(1/sigma)), odd extension:
/// each envelope touches 0, so the quotient sup is unbounded.
inline Nonlinearity make_oscillating_unbounded(double b1, double b2) {
  if (b1 <= 1 || b2 <= b1)
    throw std::invalid_argument("make_oscillating_unbounded: 1 < b1 < b2");
  Nonlinearity nl;
  nl.name = "oscillating_unbounded";
  nl.F = [b1, b2](double s) {
    const double a = std::fabs(s);
    if (a < detail::kSigmaFloor) return 0.0;
    const double sn = std::sin(1.0 / a);
    const double v = std::pow(a, b1) * (1.0 + sn) + std::pow(a, b2) * (1.0 - sn);
    return s < 0 ? -v : v;
  };
  nl.f = [b1, b2](double s) {
    const double a = std::fabs(s);
    if (a < detail::kSigmaFloor) return 0.0;
    const double sn = std::sin(1.0 / a), cs = std::cos(1.0 / a);
    return b1 * std::pow(a, b1 - 1.0) * (1.0 + sn) -
           std::pow(a, b1 - 2.0) * cs + b2 * std::pow(a, b2 - 1.0) * (1.0 - sn) +
           std::pow(a, b2 - 2.0) * cs;
  };
  nl.parity = Parity::odd;
  return nl;
}

inline Nonlinearity make_nonlinearity(const std::string& name,
                                      const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double def) {
    auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };
  if (name == "power") return make_power(get("p", 2.0));
  if (name == "odd_power") return make_odd_power(get("p", 2.0));
  if (name == "saturable") return make_saturable();
  if (name == "oscillating_bounded")
    return make_oscillating_bounded(get("beta", 1.9));
  if (name == "oscillating_unbounded")
    return make_oscillating_unbounded(get("beta1", 1.8), get("beta2", 2.2));
  throw std::invalid_argument("unknown nonlinearity: " + name);
}

// --- checks ---------------------------------------------------------------

inline Parity detect_parity(const Nonlinearity& nl, double lo = 1e-3, double hi = 10.0) {
  bool odd = true, even = true;
  for (int i = 0; i < 128; ++i) {
    const double s = lo * std::pow(hi / lo, i / 127.0);
    const double fp = nl.F(s), fm = nl.F(-s);
    const double scale = std::fabs(fp) + std::fabs(fm) + 1e-300;
    if (std::fabs(fp - fm) > 1e-10 * scale) even = false;
    if (std::fabs(fp + fm) > 1e-10 * scale) odd = false;
  }
  if (odd) return Parity::odd;
  if (even) return Parity::even;
  return Parity::none;
}

struct GrowthReport {
  double exp_zero = 0;   // fitted local exponent of F on sigma in [1e-8, 1e-4]
  double exp_inf = 0;    // fitted local exponent of F on sigma in [1e4, 1e8]
  double fitted_C = 0;   // empirical constant of the two-power bound on sigma*f
  bool f2 = false, f3 = false, cf2 = false, cf3 = false, cf4 = false;
};

/// Growth-condition report via log-log exponent fits over sampled decades.
/// A limit condition "passes" when the fitted exponent clears the critical
/// one by margin 0.01.
inline GrowthReport check_growth(const Nonlinearity& nl, const ExponentSet& ex) {
  constexpr double margin = 0.01;
  auto fit_exp = [&](double lo, double hi) {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 40; ++i) {
      const double s = lo * std::pow(hi / lo, i / 40.0);
      const double v = std::fabs(nl.F(s));
      if (v > 0) {
        xs.push_back(s);
        ys.push_back(v);
      }
    }
    return fit_loglog(xs, ys).slope;
  };
  GrowthReport r;
  r.exp_zero = fit_exp(1e-8, 1e-4);
  r.exp_inf = fit_exp(1e4, 1e8);

  // empirical C of |sigma f(sigma)| <= C (|sigma|^q + |sigma|^{p*})
  double C = 0;
  for (int i = 0; i <= 120; ++i) {
    const double s = 1e-8 * std::pow(1e16, i / 120.0);
    const double bound = std::pow(s, ex.q) + std::pow(s, ex.p_star);
    C = std::max(C, std::fabs(s * nl.f(s)) / bound);
  }
  r.fitted_C = C;

  r.f2 = std::isfinite(C) && r.exp_zero >= ex.q - margin && r.exp_inf <= ex.p_star + margin;
  r.f3 = r.exp_zero > ex.q + margin && r.exp_inf < ex.p_star - margin;
  r.cf2 = std::isfinite(C) && r.exp_zero >= ex.q - margin && r.exp_inf <= ex.p_m + margin;
  r.cf3 = r.exp_zero > ex.q + margin && r.exp_inf < ex.p_m - margin;

  // constant sign on (0, delta0]
  bool pos = true, neg = true;
  for (int i = 0; i <= 200; ++i) {
    const double s = 1e-6 * std::pow(nl.delta0 / 1e-6, i / 200.0);
    const double v = nl.F(s);
    if (v < 0) pos = false;
    if (v > 0) neg = false;
  }
  r.cf4 = pos || neg;
  return r;
}

/// M = sup over sigma in (0, delta0], h in [0,1] of F(sigma h)/F(sigma).
/// Returns +inf when the running sup exceeds `cap`. Throws if F changes sign
/// inside the window.
inline double quotient_sup(const Nonlinearity& nl, double cap = 50.0) {
  const int n_sigma = 240, n_h = 200;
  double sign = 0;
  double M = 0;
  for (int i = 0; i <= n_sigma; ++i) {
    const double sigma = 1e-6 * std::pow(nl.delta0 / 1e-6, double(i) / n_sigma);
    const double Fs = nl.F(sigma);
    if (Fs == 0) continue;
    if (sign == 0) sign = Fs > 0 ? 1 : -1;
    if (Fs * sign < 0)
      throw std::domain_error("quotient_sup: F changes sign inside (0, delta0]");
    for (int j = 0; j <= n_h; ++j) {
      const double h = double(j) / n_h;
      M = std::max(M, nl.F(sigma * h) / Fs);
      if (M > cap) return std::numeric_limits<double>::infinity();
    }
  }
  return M;
}

}  // namespace fhc
