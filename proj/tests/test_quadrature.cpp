#include <gtest/gtest.h>

#include <cmath>

#include "bergman/quadrature.hpp"

using namespace bergman;

TEST(Graded, PolynomialIsExact) {
  const auto r = integrate_graded<double>([](double t, double) { return 3.0 * t * t; });
  EXPECT_NEAR(r.value + r.boundary_tail, 1.0, 1e-12);
}

TEST(Graded, EndpointSingularityTowardOne) {
  // int_0^1 (1-t)^{-1/2} dt = 2; the integrand is handed 1-t exactly
  GradedOptions opt;
  opt.tol = 1e-10;
  opt.max_panels = 200;
  const auto r = integrate_graded<double>([](double, double omt) { return 1.0 / std::sqrt(omt); }, opt);
  EXPECT_NEAR(r.value + r.boundary_tail, 2.0, 1e-9);
  EXPECT_GT(r.boundary_tail, 0.0);
  EXPECT_LE(std::abs(r.value + r.boundary_tail - 2.0), 10.0 * r.total_error() + 1e-12);
}

TEST(Graded, LogSingularityTowardZero) {
  // int_0^1 -ln t dt = 1
  GradedOptions opt;
  opt.tol = 1e-10;
  opt.grade_left = true;
  opt.max_left_panels = 200;
  const auto r = integrate_graded<double>([](double t, double) { return -std::log(t); }, opt);
  EXPECT_NEAR(r.value + r.boundary_tail, 1.0, 1e-9);
}

TEST(Graded, ComplexIntegrand) {
  GradedOptions opt;
  opt.tol = 1e-12;
  const auto r = integrate_graded<complex>([](double t, double) { return complex(std::cos(t), std::sin(t)); }, opt);
  EXPECT_LE(std::abs(r.value - complex(std::sin(1.0), 1.0 - std::cos(1.0))), r.total_error() + 1e-14);
  EXPECT_LE(r.total_error(), 1e-12);
}

TEST(Graded, BudgetExhaustionIsANumericalFailure) {
  GradedOptions opt;
  opt.max_panels = 10;
  // int (1-t)^{-0.999} converges far too slowly for 10 graded panels
  try {
    integrate_graded<double>([](double, double omt) { return std::pow(omt, -0.999); }, opt);
    FAIL() << "expected numerical_failure";
  } catch (const numerical_failure& e) {
    EXPECT_GT(e.partial_value(), 0.0);
  }
  GradedOptions bad;
  bad.tol = 0.0;
  EXPECT_THROW(integrate_graded<double>([](double, double) { return 1.0; }, bad), contract_violation);
}
