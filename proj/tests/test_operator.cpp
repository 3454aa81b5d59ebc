#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "bergman/jacobi.hpp"
#include "bergman/operator.hpp"

using namespace bergman;

namespace {

// d^k z^n evaluated by differentiating the coefficient vector k times
complex monomial_derivative(int n, int k, complex z) {
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  for (int step = 0; step < k; ++step) {
    std::vector<double> d(c.size(), 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    c = d;
  }
  complex acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

// (-1)^{a+b} int d^a e_m conj(d^b e_n) (1-|w|^2)^s dA by quadrature in r and theta
complex radial_power_entry_quadrature(double s, int a, int b, int n, int m) {
  using gl = boost::math::quadrature::gauss<double, 40>;
  const int n_theta = 64;
  auto angular = [&](double r) {
    complex acc = 0.0;
    for (int k = 0; k < n_theta; ++k) {
      const complex w = std::polar(r, 2.0 * std::numbers::pi * k / n_theta);
      acc += std::sqrt(m + 1.0) * monomial_derivative(m, a, w) * std::conj(std::sqrt(n + 1.0) * monomial_derivative(n, b, w));
    }
    return acc / static_cast<double>(n_theta) * 2.0 * r * std::pow(1.0 - r * r, s);
  };
  const double re = gl::integrate([&](double r) { return angular(r).real(); }, 0.0, 1.0);
  const double im = gl::integrate([&](double r) { return angular(r).imag(); }, 0.0, 1.0);
  return sign_power(a + b) * complex(re, im);
}

}  // namespace

TEST(Entry, FrozenExamples) {
  EXPECT_NEAR(entry({0, 0, CircleUniform{0.5}}, 1, 1).real(), 0.5, 1e-16);
  EXPECT_NEAR(entry({0, 0, CircleRadialDerivative{0.5}}, 1, 1).real(), -2.0, 1e-16);
  EXPECT_NEAR(entry({1, 1, PointMass{0.0}}, 1, 1).real(), 2.0, 1e-15);
  EXPECT_NEAR(entry({1, 0, RadialPower{4, 0}}, 0, 1).real(), -0.282843, 1e-6);
  EXPECT_NEAR(entry({1, 0, RadialPower{4, 0}}, 0, 1).real(), -std::sqrt(2.0) / 5.0, 1e-15);
}

TEST(Entry, RadialPowerMatchesFormQuadrature) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int n = 0; n < 6; ++n)
        for (int m = 0; m < 6; ++m) {
          const complex ref = radial_power_entry_quadrature(4.0, a, b, n, m);
          const complex got = entry({a, b, RadialPower{4.0, 0.0}}, n, m);
          EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-12 * std::max(1.0, std::abs(ref)))
              << a << b << " n=" << n << " m=" << m;
        }
}

TEST(Entry, PointMassIsDerivativeProduct) {
  const complex z0(0.3, -0.45);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int n = 0; n < 8; ++n)
        for (int m = 0; m < 8; ++m) {
          const complex ref = sign_power(a + b) * std::sqrt((m + 1.0) * (n + 1.0)) * monomial_derivative(m, a, z0) *
                              std::conj(monomial_derivative(n, b, z0));
          EXPECT_NEAR(std::abs(entry({a, b, PointMass{z0}}, n, m) - ref), 0.0, 1e-13 * std::max(1.0, std::abs(ref)));
        }
}

TEST(Entry, CircleRadialDerivativeIsMinusRadialDerivativeOfCircleEntry) {
  // central difference of (n+1) r^{2n} in r
  const double r0 = 0.6, h = 1e-5;
  for (int n = 0; n < 10; ++n) {
    const double fd = -((n + 1.0) * std::pow(r0 + h, 2 * n) - (n + 1.0) * std::pow(r0 - h, 2 * n)) / (2 * h);
    EXPECT_NEAR(entry({0, 0, CircleRadialDerivative{r0}}, n, n).real(), fd, 1e-7 * std::max(1.0, std::abs(fd)));
    EXPECT_EQ(entry({0, 0, CircleRadialDerivative{r0}}, n, n + 1), complex(0.0));
  }
}

TEST(Assemble, FrozenExamples) {
  const auto d = assemble({0, 0, CircleUniform{0.5}}, 4);
  const double diag[] = {1.0, 0.5, 0.1875, 0.0625};
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(std::abs(d.entries(n, m) - (n == m ? diag[n] : 0.0)), 0.0, 1e-16);

  const auto p = assemble({0, 0, PointMass{0.5}}, 2);
  EXPECT_NEAR(p.entries(0, 0).real(), 1.0, 1e-16);
  EXPECT_NEAR(p.entries(0, 1).real(), std::sqrt(2.0) * 0.5, 1e-16);
  EXPECT_NEAR(p.entries(1, 0).real(), std::sqrt(2.0) * 0.5, 1e-16);
  EXPECT_NEAR(p.entries(1, 1).real(), 0.5, 1e-16);

  const SymbolSpec s{2, 1, PointMass{{0.1, 0.2}}};
  const auto one = assemble(s, 1);
  ASSERT_EQ(one.entries.rows(), 1u);
  EXPECT_EQ(one.entries(0, 0), entry(s, 0, 0));
}

TEST(Assemble, Errors) {
  EXPECT_THROW(assemble({0, 0, PointMass{0.0}}, 0), contract_violation);
  EXPECT_THROW(assemble({0, 0, PointMass{0.0}}, 4097), resource_limit);
  EXPECT_THROW(assemble({0, 0, PointMass{1.5}}, 4), contract_violation);
}

TEST(Adjoint, Examples) {
  const auto a = adjoint_symbol({1, 0, PointMass{0.5}});
  EXPECT_EQ(a.alpha, 0);
  EXPECT_EQ(a.beta, 1);
  EXPECT_EQ(std::get<PointMass>(a.base).z0, complex(0.5));
  const SymbolSpec fixed{2, 2, RadialPower{3, 1}};
  const auto f = adjoint_symbol(fixed);
  EXPECT_EQ(f.alpha, 2);
  EXPECT_EQ(f.beta, 2);
  EXPECT_EQ(std::get<RadialPower>(f.base), std::get<RadialPower>(fixed.base));
  const auto c = adjoint_symbol({0, 0, Combination{{{complex(0, 1), CircleUniform{0.5}}}}});
  EXPECT_EQ(std::get<Combination>(c.base).terms[0].coeff, complex(0, -1));
}

TEST(Adjoint, CoherenceIsExact) {
  const std::vector<SymbolSpec> symbols = {
      {1, 0, PointMass{0.5}},
      {2, 1, PointMass{{0.3, -0.6}}},
      {0, 3, RadialPower{7.5, 0.5}},
      {1, 2, CircleUniform{0.7}},
      {0, 0, CircleRadialDerivative{0.4}},
      {1, 1, Combination{{{complex(0.5, 2.0), PointMass{{-0.2, 0.1}}}, {complex(-1.0, 0.3), RadialPower{4.0, 0.0}}}}},
  };
  for (const auto& s : symbols) {
    const auto op = assemble(s, 24);
    const auto adj = assemble(adjoint_symbol(s), 24);
    EXPECT_TRUE(adj.entries == op.entries.adjoint());
  }
}

TEST(Assemble, RadialBandIsExactZero) {
  for (const SymbolSpec& s : std::vector<SymbolSpec>{{2, 1, RadialPower{5, 0}}, {0, 2, CircleUniform{0.5}},
                                                      {0, 0, CircleRadialDerivative{0.5}}}) {
    const auto op = assemble(s, 20);
    EXPECT_TRUE(op.banded);
    for (int n = 0; n < 20; ++n)
      for (int m = 0; m < 20; ++m)
        if (m - s.alpha != n - s.beta) EXPECT_EQ(op.entries(n, m), complex(0.0));
  }
  EXPECT_FALSE(assemble({0, 0, PointMass{0.5}}, 4).banded);
}

TEST(Assemble, CombinationIsLinear) {
  const complex ca(1.0, -2.0), cb(0.25, 0.5);
  const SimpleMeasure a = PointMass{{0.4, 0.1}}, b = RadialPower{3.0, 0.0};
  const SymbolSpec comb{1, 1, Combination{{{ca, a}, {cb, b}}}};
  const auto oc = assemble(comb, 16);
  const auto oa = assemble({1, 1, PointMass{{0.4, 0.1}}}, 16);
  const auto ob = assemble({1, 1, RadialPower{3.0, 0.0}}, 16);
  for (int n = 0; n < 16; ++n)
    for (int m = 0; m < 16; ++m) {
      const complex ref = ca * oa.entries(n, m) + cb * ob.entries(n, m);
      EXPECT_LE(std::abs(oc.entries(n, m) - ref), 1e-14 * std::abs(ref) + 1e-300);
    }
}

TEST(Assemble, MonotoneTruncatedTrace) {
  for (const SymbolSpec& s : std::vector<SymbolSpec>{{1, 1, RadialPower{4, 0}}, {2, 2, PointMass{0.6}}, {0, 0, CircleUniform{0.9}}}) {
    double prev = -1.0;
    for (int N = 1; N < 40; ++N) {
      const auto op = assemble(s, N);
      double tr = 0.0;
      for (int n = 0; n < N; ++n) tr += op.entries(n, n).real();
      EXPECT_GE(tr, prev);
      prev = tr;
    }
  }
}

TEST(Assemble, PositiveSemidefiniteForNonnegativeSymbols) {
  const std::vector<SymbolSpec> symbols = {
      {1, 1, PointMass{{0.5, 0.2}}},
      {2, 2, RadialPower{6, 0.5}},
      {0, 0, CircleUniform{0.8}},
      {1, 1, Combination{{{0.5, PointMass{{-0.3, 0.3}}}, {2.0, PointMass{0.6}}, {1.0, RadialPower{2.0, 0.0}}}}},
  };
  for (const auto& s : symbols) {
    const auto op = assemble(s, 32);
    EXPECT_TRUE(op.hermitian);
    const auto eig = hermitian_eigenvalues(op.entries);
    EXPECT_GE(eig.values.back(), -1e-12 * eig.values.front());
  }
}
