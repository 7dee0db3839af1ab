#pragma once

#include <cmath>
#include <stdexcept>

namespace fhc {

inline constexpr double pi = 3.14159265358979323846;

/// Normalization constant of the singular-integral form of (-Delta)^s,
/// C_{N,s} = 4^s Gamma((N+2s)/2) / (pi^{N/2} |Gamma(-s)|).
inline double frac_laplacian_constant(int N, double s) {
  if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("s must lie in (0,1)");
  if (N < 1) throw std::invalid_argument("dimension must be positive");
  return std::pow(4.0, s) * std::tgamma(0.5 * (N + 2.0 * s)) /
         (std::pow(pi, 0.5 * N) * std::fabs(std::tgamma(-s)));
}

/// Riesz kernel constant, I_alpha(x) = C_{N,alpha} |x|^{alpha-N},
/// C_{N,alpha} = Gamma((N-alpha)/2) / (2^alpha pi^{N/2} Gamma(alpha/2)).
inline double riesz_constant(int N, double alpha) {
  if (alpha <= 0.0 || alpha >= static_cast<double>(N))
    throw std::invalid_argument("alpha must lie in (0,N)");
  return std::tgamma(0.5 * (N - alpha)) /
         (std::pow(2.0, alpha) * std::pow(pi, 0.5 * N) * std::tgamma(0.5 * alpha));
}

/// Surface measure of the unit sphere S^{N-1}.
inline double unit_sphere_area(int N) {
  return 2.0 * std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N);
}

struct SpectralConstants {
  double C_Ns;
  double C_Nalpha;
};

inline SpectralConstants spectral_constants(int N, double s, double alpha) {
  return {frac_laplacian_constant(N, s), riesz_constant(N, alpha)};
}

}  // namespace fhc
