#pragma once

// Small numeric helpers shared by every module: compensated summation,
// Beta values, falling factorials, integer powers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "errors.hpp"

namespace bergman {

using complex = std::complex<double>;

/// Neumaier's variant of Kahan summation. Works for double and complex
/// (component-wise), so results do not depend on the magnitude ordering of terms.
template <class T>
class compensated_sum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, complex>) {
      add_real(re_, re_c_, x.real());
      add_real(im_, im_c_, x.imag());
    } else {
      add_real(re_, re_c_, x);
    }
  }

  compensated_sum& operator+=(T x) {
    add(x);
    return *this;
  }

  T value() const {
    if constexpr (std::is_same_v<T, complex>)
      return complex(re_ + re_c_, im_ + im_c_);
    else
      return re_ + re_c_;
  }

 private:
  static void add_real(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }

  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
};

/// ln Gamma(y + d) - ln Gamma(y), y > 0, y + d > 0. Uses a Stirling
/// difference for large y so the two large logarithms never cancel.
inline double log_gamma_ratio(double y, double d) {
  if (y < 64.0 || y + d < 64.0) return std::lgamma(y + d) - std::lgamma(y);
  // (y+d-1/2) ln(y+d) - (y-1/2) ln y - d + [1/(12x) - 1/(360x^3) + 1/(1260x^5)] difference
  const double lead = d * std::log(y) + (y + d - 0.5) * std::log1p(d / y) - d;
  auto corr = [](double x) {
    const double x2 = x * x;
    return 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2);
  };
  return lead + corr(y + d) - corr(y);
}

/// B(x, y) = int_0^1 t^{x-1} (1-t)^{y-1} dt.
inline double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw contract_violation("beta_fn: arguments must be positive");
  return boost::math::beta(x, y);
}

/// ln B(x, y) for x, y > 0, also where B itself underflows.
inline double log_beta(double x, double y) {
  const double b = beta_fn(x, y);
  if (b > 1e-280) return std::log(b);
  const double small = std::min(x, y);
  const double big = std::max(x, y);
  return std::lgamma(small) - log_gamma_ratio(big, small);
}

/// m (m-1) ... (m-k+1) as a double; 0 when k > m.
inline double falling_factorial(std::int64_t m, int k) {
  if (k < 0 || m < 0) throw contract_violation("falling_factorial: negative argument");
  if (k > m) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(m - i);
  return r;
}

inline double factorial(int n) { return falling_factorial(n, n); }

/// Binomial coefficient C(n, k) for small integers, as a double.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// x^n by repeated squaring; 0^0 = 1. For complex x the result for conj(x)
/// is the exact conjugate, since IEEE products commute with negation.
template <class T>
T ipow(T x, int n) {
  if (n < 0) throw contract_violation("ipow: negative exponent");
  T result(1.0);
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

inline double sign_power(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace bergman
