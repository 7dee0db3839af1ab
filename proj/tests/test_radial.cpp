#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fhc/constants.hpp"
#include "fhc/radial.hpp"
#include "fhc/radial_spectral.hpp"

using namespace fhc;

namespace {
double rel_err(double got, double want) {
  return std::fabs(got - want) / (std::fabs(want) + 1e-300);
}
// closed-form Newtonian potential of the unit ball with kernel 1/(4 pi |x|)
double ball_potential(double r) { return r <= 1.0 ? (3.0 - r * r) / 6.0 : 1.0 / (3.0 * r); }
}  // namespace

TEST_CASE("reduction kernel closed forms") {
  SUBCASE("tau -> 0 limit is C |S^{N-1}|") {
    for (int N : {1, 2, 3}) {
      const double alpha = 0.5 * N;
      CHECK(rel_err(thim_kernel(0.0, N, alpha),
                    riesz_constant(N, alpha) * unit_sphere_area(N)) < 1e-12);
    }
  }
  SUBCASE("N=3, alpha=2 reduces to min(1, 1/tau)") {
    CHECK(rel_err(thim_kernel(0.5, 3, 2.0), 1.0) < 1e-12);
    CHECK(rel_err(thim_kernel(1.0, 3, 2.0), 1.0) < 1e-12);
    CHECK(rel_err(thim_kernel(2.0, 3, 2.0), 0.5) < 1e-12);
    CHECK(rel_err(thim_kernel(10.0, 3, 2.0), 0.1) < 1e-12);
  }
  SUBCASE("singularity guards") {
    CHECK_THROWS_AS(thim_kernel(1.0, 3, 1.0), std::domain_error);
    CHECK_THROWS_AS(thim_kernel(1.0, 1, 0.5), std::domain_error);
    CHECK_THROWS_AS(thim_kernel(-0.1, 3, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(thim_kernel(0.5, 3, 3.5), std::invalid_argument);
  }
  SUBCASE("N=2 quadrature matches a direct midpoint sum") {
    const double alpha = 0.8, tau = 0.5;
    const double C = riesz_constant(2, alpha);
    double direct = 0;
    const int M = 200000;
    for (int i = 0; i < M; ++i) {
      const double phi = (i + 0.5) * pi / M;
      direct += std::pow(tau * tau - 2.0 * tau * std::cos(phi) + 1.0,
                         0.5 * (alpha - 2.0));
    }
    direct *= 2.0 * C * pi / M;
    CHECK(rel_err(thim_kernel(tau, 2, alpha), direct) < 1e-8);
  }
  SUBCASE("N=3 radial grid helper agrees with the generic kernel") {
    for (double tau : {0.3, 0.9, 1.4, 7.0})
      CHECK(rel_err(detail::thim_kernel_n3(tau, 1.3), thim_kernel(tau, 3, 1.3)) <
            1e-13);
  }
}

TEST_CASE("profiles") {
  SUBCASE("construction guards") {
    CHECK_THROWS_AS(make_profile(3, {0.0, 1.0, 0.5}, {0.0, 1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_profile(3, {0.0}, {1.0}), std::invalid_argument);
  }
  SUBCASE("evaluation is piecewise linear, zero outside") {
    const RadialProfile p = make_profile(3, {0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
    CHECK(p.eval(0.5) == doctest::Approx(1.0));
    CHECK(p.eval(1.5) == doctest::Approx(1.0));
    CHECK(p.eval(3.0) == 0.0);
  }
  SUBCASE("ball mass") {
    const RadialProfile ball = make_profile(3, {0.0, 1.0}, {1.0, 1.0});
    CHECK(rel_err(profile_mass2(ball), 4.0 * pi / 3.0) < 1e-12);
  }
}

TEST_CASE("radial riesz convolution against the Newtonian ball") {
  const RadialProfile ball = make_profile(3, {0.0, 1.0}, {1.0, 1.0});
  for (double r : {0.2, 0.5, 0.9, 1.1, 2.0, 5.0})
    CHECK(rel_err(radial_convolve_at(ball, 2.0, r), ball_potential(r)) < 1e-9);
  // n=3 Coulomb self-energy of the uniform ball: 8 pi / 15
  CHECK(rel_err(radial_riesz_energy(ball, ball, 2.0), 8.0 * pi / 15.0) < 1e-7);
}

TEST_CASE("radial riesz energy is symmetric and bilinear") {
  const RadialProfile a = make_profile(3, {0.0, 1.0, 2.0}, {1.0, 1.0, 0.0});
  const RadialProfile b = make_profile(3, {1.0, 2.0, 3.0}, {0.0, 1.0, 0.0});
  const double ab = radial_riesz_energy(a, b, 1.5);
  const double ba = radial_riesz_energy(b, a, 1.5);
  CHECK(rel_err(ab, ba) < 1e-7);
  RadialProfile a2 = a;
  for (double& v : a2.values) v *= 2.0;
  detail::build_weights(a2);
  CHECK(rel_err(radial_riesz_energy(a2, b, 1.5), 2.0 * ab) < 1e-9);
}

TEST_CASE("annuli thickness law") {
  CHECK(rel_err(annuli_thickness(4.0, 3, 2.0), std::pow(4.0, -1.5)) < 1e-14);
  CHECK(rel_err(annuli_thickness(4.0, 3, 1.0),
                std::pow(4.0, -1.0) / std::sqrt(std::log(4.0))) < 1e-14);
  CHECK(rel_err(annuli_thickness(4.0, 3, 0.5), std::pow(4.0, -2.0 / 1.5)) < 1e-14);
  CHECK_THROWS_AS(annuli_thickness(1.5, 3, 2.0), std::invalid_argument);
}

TEST_CASE("annulus interactions") {
  SUBCASE("zero-measure annuli contribute nothing") {
    CHECK(annulus_interaction({4.0, 0.0}, {4.0, 0.1}, 3, 2.0) == 0.0);
  }
  SUBCASE("interaction matrix symmetry and input guard") {
    const InteractionMatrix M = interaction_matrix({1.0, -1.0}, 4.0, 3, 2.0);
    CHECK(M.n == 2);
    CHECK(M.at(0, 1) == M.at(1, 0));
    CHECK(M.at(0, 0) > 0.0);
    CHECK(M.A_estimate == doctest::Approx(M.at(0, 0) + M.at(1, 1) - 2 * M.at(0, 1)));
    CHECK_THROWS_AS(interaction_matrix({0.5, 0.5}, 4.0, 3, 2.0),
                    std::invalid_argument);
  }
  SUBCASE("R* reported in range") {
    const double rs = find_R_star(2, 3, 2.0);
    CHECK(rs >= 2.0);
    CHECK(rs <= 64.0);
    CHECK(interaction_matrix({1.0, 1.0}, rs, 3, 2.0).A_estimate > 0.0);
  }
}

TEST_CASE("uniform radial grid backend") {
  const int P = 2048;
  const double L = 24.0;
  const RadialField u =
      make_radial_field(P, L, [](double r) { return std::exp(-0.5 * r * r); });
  SUBCASE("mass against the Gaussian oracle") {
    CHECK(rel_err(rf_mass2(u), std::pow(pi, 1.5)) < 1e-10);
  }
  SUBCASE("half-laplacian seminorm against the Gaussian oracle") {
    // [e^{-r^2/2}]_{1/2}^2 = 2 pi in R^3
    CHECK(rel_err(rf_dirichlet(u, 0.5), 2.0 * pi) < 1e-4);
  }
  SUBCASE("multiplier round trip is the identity") {
    const RadialField r = detail::rf_multiplier(u, [](double) { return 1.0; });
    for (int j = 0; j < u.n(); ++j)
      CHECK(std::fabs(r.v[j] - u.v[j]) < 1e-12);
  }
  SUBCASE("helmholtz inverse inverts (frac laplacian + mu)") {
    RadialField w = rf_frac_laplacian(u, 0.5);
    for (int j = 0; j < w.n(); ++j) w.v[j] += 2.0 * u.v[j];
    const RadialField back = rf_helmholtz_inverse(w, 0.5, 2.0);
    for (int j = 0; j < u.n(); ++j) CHECK(std::fabs(back.v[j] - u.v[j]) < 1e-10);
  }
  SUBCASE("newtonian potential of a gaussian density") {
    // I_2 * e^{-r^2} = sqrt(pi) erf(r) / (4 r)
    const RadialField rho =
        make_radial_field(P, L, [](double r) { return std::exp(-r * r); });
    const RadialField pot = rf_riesz(rho, 2.0);
    for (int j : {50, 200, 400, 900}) {
      const double r = pot.r(j);
      CHECK(rel_err(pot.v[j], std::sqrt(pi) * std::erf(r) / (4.0 * r)) < 5e-5);
    }
  }
  SUBCASE("general-alpha route agrees with the alpha=2 fast path") {
    const RadialField rho =
        make_radial_field(512, 16.0, [](double r) { return std::exp(-r * r); });
    const RadialField fast = rf_riesz(rho, 2.0);
    const RadialField slow = rf_riesz(rho, 2.0 + 1e-13);
    for (int j = 4; j < rho.n(); j += 37)
      CHECK(rel_err(slow.v[j], fast.v[j]) < 1e-3);
  }
}
