#include <catch_amalgamated.hpp>

#include <numbers>
#include <vector>

#include "h2e/boys.hpp"
#include "oracles.hpp"

using h2e::boys;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Boys function at zero is 1/(2m+1) exactly", "[boys]") {
  CHECK(boys(0, 0.0) == 1.0);
  CHECK(boys(1, 0.0) == 1.0 / 3.0);
  for (int m = 0; m <= 8; ++m) CHECK(boys(m, 0.0) == 1.0 / (2 * m + 1));
}

TEST_CASE("Boys asymptote at x = 30 matches the defining integral", "[boys]") {
  const double half_root = 0.5 * std::sqrt(std::numbers::pi / 30.0);
  CHECK_THAT(boys(0, 30.0), WithinAbs(half_root, 1e-13));
  for (int m = 0; m <= 8; ++m) CHECK_THAT(boys(m, 30.0), WithinAbs(oracle::boys_integral(m, 30.0), 1e-13));
}

TEST_CASE("Boys series and asymptotic branches agree with quadrature", "[boys]") {
  for (double x : {1e-12, 1e-6, 0.1, 0.5, 1.0, 2.5, 7.0, 12.0, 20.0, 24.9, 25.0, 29.99, 30.0, 31.0, 45.0, 100.0}) {
    for (int m = 0; m <= 8; ++m) {
      INFO("x = " << x << ", m = " << m);
      CHECK_THAT(boys(m, x), WithinAbs(oracle::boys_integral(m, x), 1e-13));
    }
  }
}

TEST_CASE("boys_array fills every order consistently with boys()", "[boys]") {
  std::vector<double> v(9);
  for (double x : {0.0, 0.3, 8.0, 40.0}) {
    h2e::boys_array(x, v);
    for (int m = 0; m <= 8; ++m) CHECK_THAT(v[static_cast<std::size_t>(m)], WithinRel(boys(m, x), 1e-14));
  }
}

TEST_CASE("Boys function is decreasing in x and m", "[boys]") {
  for (int m = 0; m < 6; ++m)
    for (double x = 0.0; x < 40.0; x += 0.37) {
      CHECK(boys(m, x + 0.37) < boys(m, x));
      CHECK(boys(m + 1, x) < boys(m, x));
    }
}

TEST_CASE("Boys domain errors", "[boys]") {
  CHECK_THROWS_AS(boys(-1, 1.0), h2e::DomainError);
  CHECK_THROWS_AS(boys(0, -1e-3), h2e::DomainError);
}
