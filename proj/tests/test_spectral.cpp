#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fhc/constants.hpp"
#include "fhc/grid.hpp"
#include "fhc/spectral.hpp"

using namespace fhc;

namespace {
double rel_err(double got, double want) {
  return std::fabs(got - want) / (std::fabs(want) + 1e-300);
}
}  // namespace

TEST_CASE("constants") {
  // C_{N,s} and C_{N,alpha} at reference points
  CHECK(rel_err(frac_laplacian_constant(1, 0.5), 1.0 / pi) < 1e-14);
  CHECK(rel_err(riesz_constant(3, 2.0), 1.0 / (4.0 * pi)) < 1e-14);
  CHECK(rel_err(unit_sphere_area(3), 4.0 * pi) < 1e-14);
  CHECK(rel_err(unit_sphere_area(2), 2.0 * pi) < 1e-14);
  CHECK(rel_err(unit_sphere_area(1), 2.0) < 1e-14);
  CHECK_THROWS_AS(frac_laplacian_constant(1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(riesz_constant(3, 3.0), std::invalid_argument);
}

TEST_CASE("grid construction") {
  const Grid g = make_grid(1, 16.0, 256);
  CHECK(g.h == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.size() == 256);
  CHECK(g.coord(0) == -16.0);
  CHECK_THROWS_AS(make_grid(2, 16.0, 100), std::invalid_argument);  // not 2^k
  CHECK_THROWS_AS(make_grid(4, 16.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, -1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 16.0, 4), std::invalid_argument);
  const Grid g3 = make_grid(3, 8.0, 32);
  CHECK(g3.size() == 32u * 32u * 32u);
}

TEST_CASE("field io round trip") {
  const Grid g = make_grid(1, 4.0, 32);
  std::mt19937_64 rng(7);
  Field u(g);
  for (double& v : u.v) v = std::uniform_real_distribution<double>(-1, 1)(rng);
  const std::string path = "/tmp/fhc_test_field.bin";
  write_field(u, path);
  const Field w = read_field(path);
  CHECK(w.grid == g);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(w.v[i] == u.v[i]);
}

TEST_CASE("fractional laplacian multiplier") {
  const Grid g = make_grid(1, 8.0, 128);
  SUBCASE("kills constants") {
    const Field c = make_field(g, [](const std::array<double, 3>&) { return 3.0; });
    const Field r = frac_laplacian(c, 0.5);
    for (double v : r.v) CHECK(std::fabs(v) < 1e-12);
  }
  SUBCASE("plane wave eigenfunction") {
    const double k = pi * 4 / g.L;  // an exact grid mode
    const Field u = make_field(g, [&](const std::array<double, 3>& x) {
      return std::cos(k * x[0]);
    });
    const Field r = frac_laplacian(u, 0.3);
    const double lam = std::pow(k * k, 0.3);
    for (std::size_t i = 0; i < u.size(); ++i)
      CHECK(std::fabs(r.v[i] - lam * u.v[i]) < 1e-10);
  }
  SUBCASE("linearity and semigroup composition") {
    std::mt19937_64 rng(3);
    Field u(g), w(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u.v[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
      w.v[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
    }
    Field lin = u;
    axpy(lin, 2.0, w);
    Field a = frac_laplacian(lin, 0.4);
    Field b = frac_laplacian(u, 0.4);
    axpy(b, 2.0, frac_laplacian(w, 0.4));
    double scale = 0;
    for (double v : a.v) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::fabs(a.v[i] - b.v[i]) < 1e-12 * scale);
    const Field comp = frac_laplacian(frac_laplacian(u, 0.3), 0.2);
    const Field direct = frac_laplacian(u, 0.5);
    for (std::size_t i = 0; i < u.size(); ++i)
      CHECK(std::fabs(comp.v[i] - direct.v[i]) < 1e-10 * (scale + 1.0));
  }
}

TEST_CASE("gaussian seminorm oracle") {
  // u = exp(-x^2/2): [u]_s^2 = Gamma(s + 1/2) in 1D; the |k|^{2s} cusp at
  // k = 0 converges like (pi/L)^{1+2s}, so the box must be large at small s
  const Grid g = make_grid(1, 4096.0, 262144);
  const Field u = make_field(g, [](const std::array<double, 3>& x) {
    return std::exp(-0.5 * x[0] * x[0]);
  });
  for (double s : {0.25, 0.5, 0.75}) {
    const double want = std::tgamma(s + 0.5);
    CHECK(rel_err(gagliardo_seminorm2(u, s), want) < 1e-5);
  }
  CHECK(rel_err(mass2(u), std::sqrt(pi)) < 1e-12);
}

TEST_CASE("riesz convolution multiplier") {
  const Grid g = make_grid(1, 8.0, 128);
  const double k = pi * 6 / g.L;
  const Field u = make_field(g, [&](const std::array<double, 3>& x) {
    return std::sin(k * x[0]);
  });
  const Field r = riesz_convolve(u, 0.5);
  const double lam = std::pow(k, -0.5);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(std::fabs(r.v[i] - lam * u.v[i]) < 1e-10);
  // single-mode energy
  CHECK(rel_err(riesz_inner(u, u, 0.5), lam * mass2(u)) < 1e-12);
  // zero mode is projected out
  const Field c = make_field(g, [](const std::array<double, 3>&) { return 1.0; });
  const Field rc = riesz_convolve(c, 0.5);
  for (double v : rc.v) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("riesz energy positivity on random mean-zero fields") {
  std::mt19937_64 rng(11);
  for (int N : {1, 2, 3}) {
    const int P = N == 1 ? 128 : (N == 2 ? 32 : 16);
    const Grid g = make_grid(N, 4.0, P);
    for (int rep = 0; rep < 10; ++rep) {
      Field u(g);
      for (double& v : u.v) v = std::uniform_real_distribution<double>(-1, 1)(rng);
      double mean = 0;
      for (double v : u.v) mean += v;
      mean /= static_cast<double>(u.size());
      for (double& v : u.v) v -= mean;
      CHECK(riesz_inner(u, u, 0.5 * N) >= -1e-12 * mass2(u));
    }
  }
}

TEST_CASE("dilation") {
  // big box: the seminorm comparison inherits the (pi/L)^{1+2s} multiplier
  // cusp error, which does not cancel between u and its dilation
  const Grid g = make_grid(1, 128.0, 16384);
  const Field u = make_field(g, [](const std::array<double, 3>& x) {
    return std::exp(-x[0] * x[0]);
  });
  SUBCASE("theta = 1 is the identity") {
    const Field r = dilate(u, 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(r.v[i] == u.v[i]);
  }
  SUBCASE("mass and seminorm scaling laws") {
    const double th = 1.7;
    const Field r = dilate(u, th);
    CHECK(rel_err(mass2(r), th * mass2(u)) < 1e-3);
    CHECK(rel_err(gagliardo_seminorm2(r, 0.4),
                  std::pow(th, 1.0 - 0.8) * gagliardo_seminorm2(u, 0.4)) < 1e-3);
  }
  SUBCASE("support leaving the box throws") {
    const Field wide = make_field(g, [](const std::array<double, 3>& x) {
      return 1.0 / (1.0 + x[0] * x[0]);
    });
    CHECK_THROWS_AS(dilate(wide, 100.0), std::domain_error);
  }
}

TEST_CASE("spectral 1d dilation is exact on trig modes") {
  const Grid g = make_grid(1, 8.0, 128);
  const double k = pi * 3 / g.L;
  const Field u = make_field(g, [&](const std::array<double, 3>& x) {
    return std::cos(k * x[0]);
  });
  const double th = 1.5;
  const Field r = dilate_spectral_1d(u, th);
  for (int i = 0; i < g.P; ++i)
    CHECK(std::fabs(r.v[static_cast<std::size_t>(i)] - std::cos(k * g.coord(i) / th)) <
          1e-10);
}
