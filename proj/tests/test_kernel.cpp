#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "bergman/kernel.hpp"

using namespace bergman;

namespace {

// int_D f dA with dA = dx dy / pi: Gauss-Legendre in r, trapezoid in theta
template <class F>
complex disk_integral(const F& f, int radial_nodes_half = 1) {
  using gl = boost::math::quadrature::gauss<double, 30>;
  const int n_theta = 128;
  complex acc = 0.0;
  for (int h = 0; h < radial_nodes_half; ++h) {
    const double a = static_cast<double>(h) / radial_nodes_half, b = static_cast<double>(h + 1) / radial_nodes_half;
    auto radial = [&](double r) {
      complex s = 0.0;
      for (int k = 0; k < n_theta; ++k) s += f(std::polar(r, 2.0 * std::numbers::pi * k / n_theta));
      return s / static_cast<double>(n_theta) * 2.0 * r;  // (1/pi) r dr dtheta, angular mean times 2 pi / pi
    };
    acc += gl::integrate([&](double r) { return radial(r).real(); }, a, b);
    acc += complex(0.0, 1.0) * gl::integrate([&](double r) { return radial(r).imag(); }, a, b);
  }
  return acc;
}

}  // namespace

TEST(Basis, DerivCoeffExamples) {
  EXPECT_EQ(basis_deriv_coeff(3, 0), 2.0);
  EXPECT_EQ(basis_deriv_coeff(3, 2), 12.0);
  EXPECT_EQ(basis_deriv_coeff(1, 2), 0.0);
}

TEST(Basis, OrthonormalUnderNormalizedArea) {
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m) {
      const complex ip = disk_integral([&](complex z) { return basis_eval(n, z) * std::conj(basis_eval(m, z)); });
      EXPECT_NEAR(std::abs(ip - complex(n == m ? 1.0 : 0.0)), 0.0, 1e-12) << n << "," << m;
    }
}

TEST(Kernel, DerivEvalExamples) {
  EXPECT_NEAR(std::abs(kernel_deriv_eval(0.0, 0.0, 0) - 1.0), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(kernel_deriv_eval(0.5, 0.0, 1) - 1.0), 0.0, 1e-16);
  EXPECT_NEAR(kernel_deriv_eval(0.5, 0.5, 2).real(), 6.0 * 0.25 / std::pow(0.75, 4), 1e-13);
  EXPECT_NEAR(kernel_deriv_eval(0.5, 0.5, 2).real(), 4.740741, 1e-6);
}

TEST(Kernel, DerivEvalMatchesDifferentiatedPartialSum) {
  // d^alpha_w sum_n (n+1) (conj(z) w)^n, summed far enough to be exact in double
  const complex z(0.3, -0.4), w(-0.2, 0.5);
  const complex x = std::conj(z) * w;
  for (int alpha = 0; alpha < 5; ++alpha) {
    complex acc = 0.0;
    for (int n = alpha; n < 400; ++n)
      acc += (n + 1.0) * falling_factorial(n, alpha) * ipow(std::conj(z), alpha) * ipow(x, n - alpha);
    EXPECT_NEAR(std::abs(kernel_deriv_eval(z, w, alpha) - acc), 0.0, 1e-12 * std::abs(acc));
  }
}

TEST(Kernel, ReproducingProperty) {
  // <e_n, K_w> = e_n(w) by quadrature
  const complex w(0.25, 0.35);
  for (int n = 0; n < 5; ++n) {
    const complex ip = disk_integral([&](complex z) { return basis_eval(n, z) * std::conj(kernel_deriv_eval(w, z, 0)); }, 2);
    EXPECT_NEAR(std::abs(ip - basis_eval(n, w)), 0.0, 1e-11);
  }
}

TEST(Kernel, PartialSumConsistency) {
  for (double r : {0.3, 0.6, 0.8})
    for (int N : {10, 40, 120}) {
      const complex z = std::polar(r, 0.7), w = std::polar(r, -1.1);
      const complex K = 1.0 / ipow(1.0 - z * std::conj(w), 2);
      double bound = 0.0;
      for (int n = N; n < 5000; ++n) bound += (n + 1.0) * std::pow(0.64, n);
      EXPECT_LE(std::abs(kernel_partial_sum(z, w, N) - K), bound + 1e-13);
    }
}

TEST(Kernel, NearSingularityIsRejected) {
  EXPECT_THROW(kernel_deriv_eval(1.0, 0.0, 0), contract_violation);
  EXPECT_THROW(kernel_deriv_eval(std::nextafter(1.0, 0.0), std::nextafter(1.0, 0.0), 0), boundary_error);
}

TEST(DAlphaBeta, Examples) {
  EXPECT_NEAR(std::abs(d_alpha_beta_eval(0.0, 0, 0, 1e-14) - 1.0), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(d_alpha_beta_eval(0.0, 1, 1, 1e-14) - 2.0), 0.0, 1e-16);
  EXPECT_NEAR(d_alpha_beta_eval(0.5, 1, 0, 1e-14).real(), 1.0 / 0.421875, 1e-12);
}

TEST(DAlphaBeta, ClosedFormOneOneOnGrid) {
  for (double r = 0.0; r <= 0.9 + 1e-12; r += 0.1)
    for (double th : {0.0, 1.0, 2.5, -2.0}) {
      const complex w = std::polar(r, th);
      const double t = r * r;
      const double ref = 2.0 * (1.0 + 2.0 * t) / std::pow(1.0 - t, 4);
      const auto s = d_alpha_beta_series(w, 1, 1, 1e-10);
      EXPECT_NEAR(std::abs(s.value - ref), 0.0, 1e-10 + 1e-14 * ref) << "r=" << r;
      EXPECT_LT(s.tail_bound, 1e-10);
    }
}

TEST(DAlphaBeta, ConjugateSymmetry) {
  for (const complex w : {complex(0.3, 0.2), complex(-0.5, 0.6), complex(0.0, -0.85)})
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const complex x = d_alpha_beta_eval(w, a, b, 1e-13);
        const complex y = d_alpha_beta_eval(w, b, a, 1e-13);
        EXPECT_LE(std::abs(x - std::conj(y)), 1e-13 * std::abs(x) + 1e-300);
      }
}

TEST(DAlphaBeta, NumeratorPolynomial) {
  // D^{1,1} = (2 + 4t)/(1-t)^4
  const auto q1 = d_alpha_alpha_numerator(1);
  ASSERT_EQ(q1.size(), 2u);
  EXPECT_DOUBLE_EQ(q1[0], 2.0);
  EXPECT_DOUBLE_EQ(q1[1], 4.0);
  EXPECT_EQ(d_alpha_alpha_numerator(0), std::vector<double>{1.0});
  for (int a = 2; a < 7; ++a) {
    const auto q = d_alpha_alpha_numerator(a);
    for (double r : {0.1, 0.5, 0.8}) {
      const double t = r * r;
      double poly = 0.0;
      for (std::size_t i = q.size(); i-- > 0;) poly = poly * t + q[i];
      const double closed = poly / std::pow(1.0 - t, 2 + 2 * a);
      const double series = d_alpha_beta_eval(r, a, a, 1e-12 * closed).real();
      EXPECT_NEAR(closed, series, 1e-11 * closed) << "alpha=" << a << " r=" << r;
    }
    // Q_alpha(0) = alpha! (alpha+1)!
    EXPECT_DOUBLE_EQ(q[0], factorial(a) * factorial(a + 1));
  }
}

TEST(DAlphaBeta, Errors) {
  EXPECT_THROW(d_alpha_beta_eval(0.9999999, 0, 0, 1e-10), boundary_error);
  EXPECT_THROW(d_alpha_beta_eval(0.5, -1, 0, 1e-10), contract_violation);
  EXPECT_THROW(d_alpha_beta_eval(0.5, 0, 0, 0.0), contract_violation);
}
