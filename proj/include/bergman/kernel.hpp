#pragma once

// Orthonormal monomial basis e_n(z) = sqrt(n+1) z^n of the Bergman space,
// derivatives of the reproducing kernel K_z(w) = (1 - conj(z) w)^{-2}, and
// the derivative kernel D^{alpha,beta}(w) = d^alpha dbar^beta (1 - w conj(w))^{-2}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace bergman {

inline constexpr int max_series_terms = 100000;

/// e_n(z)
inline complex basis_eval(int n, complex z) {
  if (n < 0) throw contract_violation("basis_eval: negative index");
  return std::sqrt(static_cast<double>(n) + 1.0) * ipow(z, n);
}

/// Coefficient of z^{m-alpha} in d^alpha e_m: sqrt(m+1) m!/(m-alpha)!, zero when m < alpha.
inline double basis_deriv_coeff(int m, int alpha) {
  if (m < 0 || alpha < 0) throw contract_violation("basis_deriv_coeff: negative argument");
  if (m < alpha) return 0.0;
  return std::sqrt(static_cast<double>(m) + 1.0) * falling_factorial(m, alpha);
}

/// d^alpha_w (1 - conj(z) w)^{-2} = (alpha+1)! conj(z)^alpha (1 - conj(z) w)^{-(2+alpha)}
inline complex kernel_deriv_eval(complex z, complex w, int alpha) {
  if (alpha < 0) throw contract_violation("kernel_deriv_eval: negative order");
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
    throw contract_violation("kernel_deriv_eval: points must lie in the open disk");
  const complex d = 1.0 - std::conj(z) * w;
  if (std::abs(d) < 1e-15) throw boundary_error("kernel_deriv_eval: 1 - conj(z) w is numerically zero");
  return factorial(alpha + 1) * ipow(std::conj(z), alpha) / ipow(d, 2 + alpha);
}

/// Truncated kernel sum sum_{n<N} e_n(z) conj(e_n(w)) = sum (n+1) (z conj(w))^n.
inline complex kernel_partial_sum(complex z, complex w, int terms) {
  compensated_sum<complex> acc;
  const complex x = z * std::conj(w);
  complex xn = 1.0;
  for (int n = 0; n < terms; ++n) {
    acc += (n + 1.0) * xn;
    xn *= x;
  }
  return acc.value();
}

struct SeriesValue {
  complex value;
  double tail_bound = 0.0;  ///< bound on the neglected remainder
  int terms = 0;
};

/// D^{alpha,beta}(w) = sum_{j >= max(alpha,beta)} (j+1) (j)_alpha (j)_beta w^{j-alpha} conj(w)^{j-beta}
/// with (j)_k the falling factorial. Summation stops once the geometric tail bound
/// built from the term-ratio majorant drops below tol.
inline SeriesValue d_alpha_beta_series(complex w, int alpha, int beta, double tol) {
  if (alpha < 0 || beta < 0) throw contract_violation("d_alpha_beta: negative order");
  if (!(tol > 0.0)) throw contract_violation("d_alpha_beta: tol must be positive");
  const double x = std::norm(w);
  if (!(std::abs(w) <= 1.0 - 1e-6)) throw boundary_error("d_alpha_beta: |w| too close to 1");

  const int j0 = std::max(alpha, beta);
  // first term: (j0+1) (j0)_alpha (j0)_beta w^{j0-alpha} conj(w)^{j0-beta}
  double coeff = (j0 + 1.0) * falling_factorial(j0, alpha) * falling_factorial(j0, beta);
  complex mono = ipow(w, j0 - alpha) * ipow(std::conj(w), j0 - beta);

  compensated_sum<complex> acc;
  SeriesValue out;
  for (int j = j0;; ++j) {
    const complex term = coeff * mono;
    acc += term;
    ++out.terms;
    if (x == 0.0) {
      out.tail_bound = 0.0;
      break;
    }
    // |t_{i+1}/t_i| <= x (i+2)/(i+1) * (i+1)/(i+1-alpha) * (i+1)/(i+1-beta), decreasing in i
    const double jj = static_cast<double>(j);
    const double rho = x * (jj + 2.0) / (jj + 1.0) * (jj + 1.0) / (jj + 1.0 - alpha) * (jj + 1.0) /
                       (jj + 1.0 - beta);
    if (rho < 1.0) {
      const double tail = std::abs(term) * rho / (1.0 - rho);
      if (tail < tol) {
        out.tail_bound = tail;
        break;
      }
    }
    if (out.terms >= max_series_terms)
      throw numerical_failure("d_alpha_beta: series did not converge", std::abs(acc.value()),
                              std::abs(term));
    coeff *= (jj + 2.0) / (jj + 1.0) * (jj + 1.0) / (jj + 1.0 - alpha) * (jj + 1.0) / (jj + 1.0 - beta);
    mono *= x;
  }
  out.value = acc.value();
  return out;
}

inline complex d_alpha_beta_eval(complex w, int alpha, int beta, double tol) {
  return d_alpha_beta_series(w, alpha, beta, tol).value;
}

/// Polynomial Q_alpha of degree alpha with D^{alpha,alpha}(w) = Q_alpha(|w|^2) (1-|w|^2)^{-(2+2 alpha)}.
/// Coefficients come from multiplying the diagonal series by (1-t)^{2+2 alpha}; the product
/// terminates at degree alpha. Computed in long double to contain the alternating cancellation.
inline std::vector<double> d_alpha_alpha_numerator(int alpha) {
  if (alpha < 0) throw contract_violation("d_alpha_alpha_numerator: negative order");
  const int deg = alpha;
  const int n = 2 + 2 * alpha;
  std::vector<long double> d(deg + 1);
  for (int p = 0; p <= deg; ++p) {
    long double ff = 1.0L;
    for (int i = 0; i < alpha; ++i) ff *= static_cast<long double>(p + alpha - i);
    d[p] = static_cast<long double>(p + alpha + 1) * ff * ff;
  }
  std::vector<double> q(deg + 1);
  for (int i = 0; i <= deg; ++i) {
    long double s = 0.0L;
    long double b = 1.0L;  // C(n, i-p) (-1)^{i-p}, built for p = i down to 0
    for (int p = i; p >= 0; --p) {
      const int r = i - p;
      if (r > 0) b = b * static_cast<long double>(n - r + 1) / static_cast<long double>(r) * -1.0L;
      s += d[p] * b;
    }
    q[i] = static_cast<double>(s);
  }
  return q;
}

}  // namespace bergman
