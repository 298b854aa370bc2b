#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "unicirc/density.hpp"
#include "unicirc/oracle.hpp"
#include "unicirc/rng.hpp"

using namespace unicirc;

namespace {

// Brute-force |Delta|^beta through complex arithmetic.
double vandermonde_direct(const std::vector<double>& phases, int beta) {
  double prod = 1.0;
  for (std::size_t j = 0; j + 1 < phases.size(); ++j) {
    for (std::size_t k = j + 1; k < phases.size(); ++k) {
      prod *= std::abs(std::polar(1.0, phases[j]) - std::polar(1.0, phases[k]));
    }
  }
  return std::pow(prod, beta);
}

}  // namespace

TEST_CASE("vandermonde_abs_pow reference values", "[oracle]") {
  REQUIRE(vandermonde_abs_pow({0.0, kPi}, 2) ==
          Catch::Approx(4.0).epsilon(1e-13));
  REQUIRE(vandermonde_abs_pow({0.0, 0.0, 1.0}, 1) == 0.0);
  // Third roots of unity: |Delta|^2 = N^N = 27.
  REQUIRE(vandermonde_abs_pow({0.0, kTwoPi / 3, -kTwoPi / 3}, 2) ==
          Catch::Approx(27.0).epsilon(1e-12));
}

TEST_CASE("vandermonde_abs_pow matches the direct product", "[oracle]") {
  PhiloxEngine rng{RngStream{31, 0}};
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> phases(4);
    for (double& p : phases) p = (uniform_unit(rng) - 0.5) * kTwoPi;
    for (int beta : {1, 2, 3, 4}) {
      REQUIRE(vandermonde_abs_pow(phases, beta) ==
              Catch::Approx(vandermonde_direct(phases, beta)).epsilon(1e-11));
    }
  }
}

TEST_CASE("quadrature oracle agrees with the closed forms pointwise",
          "[oracle]") {
  // N = 2 slice density.
  REQUIRE(oracle_density_quadrature(2, 2, kPi / 2) ==
          Catch::Approx(2.0 / kPi).margin(1e-8));
  REQUIRE(oracle_density_quadrature(1, 2, kPi / 2) ==
          Catch::Approx(0.5).margin(1e-6));

  // N = 3 marginal: rho_{2,3}(0) = 5 / (2 pi).
  const QuadratureOracle o23(2, 3, 512);
  REQUIRE(o23.density(0.0) == Catch::Approx(5.0 / kTwoPi).margin(1e-6));

  const QuadratureOracle o13(1, 3, 512);
  REQUIRE(o13.density(0.7) ==
          Catch::Approx(closed_form_density(1, 3, 0.7)).margin(1e-4));

  const QuadratureOracle o43(4, 3, 512);
  REQUIRE(o43.density(-1.3) ==
          Catch::Approx(closed_form_density(4, 3, -1.3)).margin(1e-6));
}

TEST_CASE("quadrature oracle validates the generic-beta Fourier route",
          "[oracle]") {
  const auto fd2 = fourier_coefficients(3, 2, 1e-10, 4096);
  const QuadratureOracle o32(3, 2, 1024);
  for (double theta : {0.0, 0.4, 1.1, 2.9, -2.0}) {
    REQUIRE(o32.density(theta) ==
            Catch::Approx(fourier_density(fd2, theta)).margin(1e-4));
  }

  const auto fd3 = fourier_coefficients(3, 3);
  const QuadratureOracle o33(3, 3, 700);
  for (double theta : {0.0, 0.9, -1.7}) {
    REQUIRE(o33.density(theta) ==
            Catch::Approx(fourier_density(fd3, theta)).margin(1e-3));
  }
}

TEST_CASE("quadrature oracle parameter errors", "[oracle]") {
  REQUIRE_THROWS_AS(QuadratureOracle(2, 4, 512), UnsupportedN);
  REQUIRE_THROWS_AS(QuadratureOracle(2, 1, 512), UnsupportedN);
  REQUIRE_THROWS_AS(QuadratureOracle(0, 2, 512), InvalidParams);
  REQUIRE_THROWS_AS(QuadratureOracle(2, 2, 4), InvalidParams);
  REQUIRE_THROWS_AS(vandermonde_abs_pow({0.1}, 0), InvalidParams);
}
