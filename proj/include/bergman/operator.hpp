#pragma once

// Truncated Toeplitz matrices of T_F for F = d^alpha dbar^beta mu in the basis e_n.
//
// Convention: entries(n, m) = <T e_m, e_n> = F[e_m, e_n], row n is the output
// index and column m the input index, where
//   F[f, g] = (-1)^{alpha+beta} int d^alpha f conj(d^beta g) dmu.

#include <complex>
#include <cstddef>

#include "errors.hpp"
#include "kernel.hpp"
#include "matrix.hpp"
#include "symbol.hpp"

namespace bergman {

inline constexpr int max_dimension = 4096;

struct TruncatedOperator {
  int dim = 0;
  cmatrix entries;
  SymbolSpec symbol;
  double assembly_tol = 0.0;
  bool hermitian = false;  ///< alpha == beta and mu a nonnegative measure
  bool banded = false;     ///< radial base: nonzero only where m - alpha == n - beta
};

namespace detail {

inline complex entry_simple(const SimpleMeasure& mu, int alpha, int beta, int n, int m) {
  if (const auto* d = std::get_if<CircleRadialDerivative>(&mu)) {
    if (alpha != 0 || beta != 0)
      throw unsupported_functional("circle_radial_derivative entries need alpha = beta = 0");
    // -(d/dr) [(n+1) r^{2n}] at r0
    if (n != m || n == 0) return 0.0;
    return -(n + 1.0) * (2.0 * n) * ipow(d->r0, 2 * n - 1);
  }
  if (m < alpha || n < beta) return 0.0;
  // one square root for both normalizations keeps diagonal entries exact; the grouping keeps the
  // adjoint entry bit-identical
  const double c = std::sqrt((m + 1.0) * (n + 1.0)) * (falling_factorial(m, alpha) * falling_factorial(n, beta));
  return sign_power(alpha + beta) * c * moment(mu, m - alpha, n - beta);
}

}  // namespace detail

/// <T_F e_m, e_n>
inline complex entry(const SymbolSpec& symbol, int n, int m) {
  if (n < 0 || m < 0) throw contract_violation("entry: negative index");
  if (const auto* c = std::get_if<Combination>(&symbol.base)) {
    compensated_sum<complex> acc;
    for (const auto& t : c->terms)
      acc += t.coeff * detail::entry_simple(t.measure, symbol.alpha, symbol.beta, n, m);
    return acc.value();
  }
  return detail::entry_simple(as_simple(symbol.base), symbol.alpha, symbol.beta, n, m);
}

inline TruncatedOperator assemble(const SymbolSpec& symbol, int N) {
  if (N < 1) throw contract_violation("assemble: dimension must be positive");
  if (N > max_dimension) throw resource_limit("assemble: dimension exceeds 4096");
  validate(symbol);

  TruncatedOperator op;
  op.dim = N;
  op.symbol = symbol;
  op.entries = cmatrix(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
  op.banded = is_radial(symbol.base);
  op.hermitian = symbol.alpha == symbol.beta && is_nonnegative(symbol.base);
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) {
      if (op.banded && m - symbol.alpha != n - symbol.beta) continue;
      op.entries(n, m) = entry(symbol, n, m);
    }
  return op;
}

/// Symbol of T_F^*: swap alpha and beta, conjugate combination coefficients.
inline SymbolSpec adjoint_symbol(const SymbolSpec& symbol) {
  SymbolSpec out = symbol;
  std::swap(out.alpha, out.beta);
  if (auto* c = std::get_if<Combination>(&out.base))
    for (auto& t : c->terms) t.coeff = std::conj(t.coeff);
  return out;
}

}  // namespace bergman
