#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orrw/asymptotics.hpp"

using namespace orrw;

namespace {
constexpr double kFourLn2 = 4.0 * std::numbers::ln2;
// J_2(2) = (8/3) log 2 - 2/3, from the finite-sum expression evaluated by hand
const double kJ2of2 = 8.0 / 3.0 * std::numbers::ln2 - 2.0 / 3.0;
}  // namespace

TEST_CASE("quadrature hits the known constants") {
  const JValue j11 = j_quadrature(1.0, 1);
  CHECK(std::abs(j11.value - 2.0) <= 1e-10);
  CHECK(std::abs(j11.value - 2.0) <= j11.abs_error_bound);

  const JValue j12 = j_quadrature(1.0, 2);
  CHECK(std::abs(j12.value - kFourLn2) <= 1e-10);
  CHECK(std::abs(j12.value - kFourLn2) <= j12.abs_error_bound);

  // J_1(2) = 16 int_1^inf u (u+1)^-4 du = 4/3
  const JValue j21 = j_quadrature(2.0, 1);
  CHECK(std::abs(j21.value - 4.0 / 3.0) <= 1e-9);

  const JValue j22 = j_quadrature(2.0, 2);
  CHECK(std::abs(j22.value - kJ2of2) <= 1e-9);
}

TEST_CASE("quadrature error reporting") {
  // The tight bound is asserted where the constants live at O(1)-O(10^3)
  // scale.  At (c ~ 0.1, ell >= 4) the integral itself reaches ~1e8 and an
  // absolute 1e-9 lies below double-precision resolution there.
  auto check_point = [](double c, unsigned ell, double bound_cap) {
    const JValue j = j_quadrature(c, ell);
    REQUIRE(j.abs_error_bound >= 0.0);
    REQUIRE(j.abs_error_bound <= bound_cap);
    REQUIRE(j.value > 0.0);
    REQUIRE(std::isfinite(j.value));
    // grading the panels once more moves the value by less than the bound
    const double x_max =
        std::clamp((40.0 + ell * std::log(1.0 + 40.0 / c)) / c, 20.0, 2000.0);
    const int panels =
        std::max(10, static_cast<int>(std::ceil(std::log2(x_max / 0.125))) + 1);
    const double refined = detail::j_integrate(c, ell, x_max, panels + 4);
    REQUIRE(std::abs(refined - j.value) <= j.abs_error_bound);
  };
  for (double c : {0.1, 0.7, 1.0, 3.0, 10.0})
    for (unsigned ell : {1u, 2u}) check_point(c, ell, 1e-9);
  for (double c : {0.7, 1.0, 3.0, 10.0})
    for (unsigned ell : {4u, 6u}) check_point(c, ell, 1e-9);
  for (unsigned ell : {4u, 6u}) check_point(0.1, ell, 1e-14 * 2e8);

  CHECK_THROWS_AS(j_quadrature(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(j_quadrature(-2.0, 1), std::domain_error);
  CHECK_THROWS_AS(j_quadrature(1.0, 0), std::domain_error);
}

TEST_CASE("closed forms for integer c") {
  CHECK(j_closed_form(1, 1).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(j_closed_form(1, 2).value == doctest::Approx(kFourLn2).epsilon(1e-14));
  CHECK(j_closed_form(2, 1).value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(j_closed_form(2, 2).value == doctest::Approx(kJ2of2).epsilon(1e-13));

  SUBCASE("agreement with quadrature up to c = 10") {
    for (int c = 1; c <= 10; ++c)
      for (unsigned ell : {1u, 2u})
        REQUIRE(std::abs(j_closed_form(c, ell).value - j_quadrature(c, ell).value) <=
                1e-9);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(j_closed_form(0, 1), std::domain_error);
    CHECK_THROWS_AS(j_closed_form(31, 1), std::domain_error);
    CHECK_THROWS_AS(j_closed_form(2, 3), std::domain_error);
  }
}

TEST_CASE("J is decreasing in c and finite on the grid") {
  for (unsigned ell : {1u, 2u, 3u}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double c : {0.1, 0.3, 1.0, 2.0, 5.0, 10.0}) {
      const double v = j_quadrature(c, ell).value;
      REQUIRE(v > 0.0);
      REQUIRE(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("moment constants") {
  CHECK(moment_constant(1.0, 1) ==
        doctest::Approx(std::sqrt(8.0 / std::numbers::pi)).epsilon(1e-12));
  CHECK(moment_constant(1.0, 2) == doctest::Approx(kFourLn2).epsilon(1e-12));
  CHECK(moment_constant(2.0, 2) == doctest::Approx(kJ2of2).epsilon(1e-9));
  CHECK_THROWS_AS(moment_constant(1.0, 0), std::domain_error);

  SUBCASE("second moment dominates the squared first moment") {
    for (double c : {0.2, 0.5, 1.0, 2.0, 6.0}) {
      const double m1 = moment_constant(c, 1);
      const double m2 = moment_constant(c, 2);
      REQUIRE(m2 >= m1 * m1 - 1e-9);
    }
  }
}

TEST_CASE("K constants") {
  CHECK(k_constant(1.0, 0) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  CHECK(k_constant(1.0, 1) == doctest::Approx(kFourLn2).epsilon(1e-12));
  CHECK(k_constant(2.0, 0) ==
        doctest::Approx(4.0 / 3.0 / std::numbers::sqrt2).epsilon(1e-9));
}

TEST_CASE("variance bound envelope") {
  SUBCASE("degenerate at c = 1") {
    const auto b = variance_bounds(1.0);
    CHECK(b.lhs == 0.0);
    CHECK(b.rhs == 0.0);
  }
  SUBCASE("c = 2") {
    const auto b = variance_bounds(2.0);
    CHECK(b.lhs == doctest::Approx(kJ2of2 / 2.0).epsilon(1e-9));
    CHECK(b.rhs == doctest::Approx(kJ2of2).epsilon(1e-9));
  }
  SUBCASE("c = 0.5 via quadrature") {
    const auto b = variance_bounds(0.5);
    const double j2 = j_quadrature(0.5, 2).value;
    CHECK(b.lhs == doctest::Approx(j2 / 4.0).epsilon(1e-12));
    CHECK(b.rhs == doctest::Approx(j2 / 2.0).epsilon(1e-12));
  }
  SUBCASE("ordering holds everywhere") {
    for (double c : {0.1, 0.9, 1.0, 1.1, 8.0}) {
      const auto b = variance_bounds(c);
      REQUIRE(b.lhs >= 0.0);
      REQUIRE(b.rhs == 2.0 * b.lhs);
    }
    CHECK_THROWS_AS(variance_bounds(0.0), std::domain_error);
  }
}
