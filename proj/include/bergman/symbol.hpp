#pragma once

// Measures and distributions on the unit disk, the symbols F = d^alpha dbar^beta mu
// built from them, and the two integral functionals the rest of the library
// consumes: monomial moments and the trace-class finiteness integral.
//
// Area measure is normalized, dA = dx dy / pi, so int_D g(|w|^2) dA = int_0^1 g(t) dt.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace bergman {

/// (1-|z|^2)^s |z|^{2a} dA
struct RadialPower {
  double s = 0.0;
  double a = 0.0;
  bool operator==(const RadialPower&) const = default;
};

/// Dirac mass at z0.
struct PointMass {
  complex z0{0.0, 0.0};
  bool operator==(const PointMass&) const = default;
};

/// Uniform probability measure on |z| = r0.
struct CircleUniform {
  double r0 = 0.5;
  bool operator==(const CircleUniform&) const = default;
};

/// The distribution d_r delta_{r0} (x) dtheta / 2pi, paired as (., phi) = -d/dr avg_theta phi at r0.
struct CircleRadialDerivative {
  double r0 = 0.5;
  bool operator==(const CircleRadialDerivative&) const = default;
};

using SimpleMeasure = std::variant<RadialPower, PointMass, CircleUniform, CircleRadialDerivative>;

struct CombinationTerm {
  complex coeff{1.0, 0.0};
  SimpleMeasure measure;
  bool operator==(const CombinationTerm&) const = default;
};

/// Finite complex combination of simple measures. Flat by construction.
struct Combination {
  std::vector<CombinationTerm> terms;
  bool operator==(const Combination&) const = default;
};

using BaseMeasure =
    std::variant<RadialPower, PointMass, CircleUniform, CircleRadialDerivative, Combination>;

/// F = d^alpha dbar^beta mu
struct SymbolSpec {
  int alpha = 0;
  int beta = 0;
  BaseMeasure base;
  bool operator==(const SymbolSpec&) const = default;
};

inline constexpr int max_derivative_order = 32;

struct FinitenessReport {
  int k = 0;
  bool finite = false;
  std::optional<double> value;
  std::optional<double> divergence_exponent;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// classification

inline bool is_radial(const SimpleMeasure& m) { return !std::holds_alternative<PointMass>(m); }

inline bool is_distribution(const SimpleMeasure& m) {
  return std::holds_alternative<CircleRadialDerivative>(m);
}

inline SimpleMeasure as_simple(const BaseMeasure& b) {
  return std::visit(overloaded{[](const Combination&) -> SimpleMeasure {
                                 throw contract_violation("as_simple: combination has no simple form");
                               },
                               [](const auto& m) -> SimpleMeasure { return m; }},
                    b);
}

/// Flattened view: a simple measure becomes a single term with coefficient 1.
inline std::vector<CombinationTerm> terms_of(const BaseMeasure& b) {
  if (const auto* c = std::get_if<Combination>(&b)) return c->terms;
  return {CombinationTerm{complex(1.0, 0.0), as_simple(b)}};
}

inline bool is_radial(const BaseMeasure& b) {
  for (const auto& t : terms_of(b))
    if (!is_radial(t.measure)) return false;
  return true;
}

inline bool has_distribution(const BaseMeasure& b) {
  for (const auto& t : terms_of(b))
    if (is_distribution(t.measure)) return true;
  return false;
}

/// True for genuine measures whose every coefficient is real and nonnegative.
inline bool is_nonnegative(const BaseMeasure& b) {
  for (const auto& t : terms_of(b)) {
    if (is_distribution(t.measure)) return false;
    if (t.coeff.imag() != 0.0 || t.coeff.real() < 0.0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// validation

inline void validate(const SimpleMeasure& m) {
  std::visit(overloaded{
                 [](const RadialPower& r) {
                   if (!(r.s > -1.0) || !(r.a > -1.0) || !std::isfinite(r.s) || !std::isfinite(r.a))
                     throw contract_violation("radial_power requires s > -1 and a > -1");
                 },
                 [](const PointMass& p) {
                   if (!(std::abs(p.z0) < 1.0))
                     throw contract_violation("point_mass requires |z0| < 1");
                 },
                 [](const CircleUniform& c) {
                   if (!(c.r0 > 0.0 && c.r0 < 1.0))
                     throw contract_violation("circle_uniform requires 0 < r0 < 1");
                 },
                 [](const CircleRadialDerivative& c) {
                   if (!(c.r0 > 0.0 && c.r0 < 1.0))
                     throw contract_violation("circle_radial_derivative requires 0 < r0 < 1");
                 },
             },
             m);
}

inline void validate(const BaseMeasure& b) {
  if (const auto* c = std::get_if<Combination>(&b)) {
    if (c->terms.empty()) throw contract_violation("combination must be nonempty");
    for (const auto& t : c->terms) {
      if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
        throw contract_violation("combination coefficient must be finite");
      validate(t.measure);
    }
    return;
  }
  validate(as_simple(b));
}

inline void validate(const SymbolSpec& s) {
  if (s.alpha < 0 || s.beta < 0) throw contract_violation("derivative orders must be nonnegative");
  if (s.alpha + s.beta > max_derivative_order)
    throw contract_violation("alpha + beta exceeds " + std::to_string(max_derivative_order));
  validate(s.base);
  if (has_distribution(s.base) && (s.alpha != 0 || s.beta != 0))
    throw contract_violation("circle_radial_derivative is only supported with alpha = beta = 0");
}

// ---------------------------------------------------------------------------
// moments

/// M(p, q) = int w^p conj(w)^q dmu(w).
inline complex moment(const SimpleMeasure& m, int p, int q) {
  if (p < 0 || q < 0) throw contract_violation("moment: negative index");
  return std::visit(
      overloaded{
          [&](const RadialPower& r) -> complex {
            if (p != q) return 0.0;
            return beta_fn(p + r.a + 1.0, r.s + 1.0);
          },
          [&](const PointMass& pm) -> complex {
            return ipow(pm.z0, p) * ipow(std::conj(pm.z0), q);
          },
          [&](const CircleUniform& c) -> complex {
            if (p != q) return 0.0;
            return ipow(c.r0, 2 * p);
          },
          [&](const CircleRadialDerivative&) -> complex {
            throw unsupported_functional("moment: circle_radial_derivative is a distribution");
          },
      },
      m);
}

inline complex moment(const BaseMeasure& b, int p, int q) {
  if (const auto* c = std::get_if<Combination>(&b)) {
    compensated_sum<complex> acc;
    for (const auto& t : c->terms) acc += t.coeff * moment(t.measure, p, q);
    return acc.value();
  }
  return moment(as_simple(b), p, q);
}

// ---------------------------------------------------------------------------
// finiteness of int (1-|w|^2)^{-2 order - 2} d|mu|

namespace detail {

inline FinitenessReport finiteness(const SimpleMeasure& m, double order) {
  FinitenessReport rep;
  const double power = -2.0 * order - 2.0;
  std::visit(overloaded{
                 [&](const RadialPower& r) {
                   const double e = r.s + power;  // endpoint exponent of (1-t)
                   if (e > -1.0) {
                     rep.finite = true;
                     rep.value = beta_fn(r.a + 1.0, e + 1.0);
                   } else {
                     rep.divergence_exponent = e;
                   }
                 },
                 [&](const PointMass& p) {
                   rep.finite = true;
                   rep.value = std::pow(1.0 - std::norm(p.z0), power);
                 },
                 [&](const CircleUniform& c) {
                   rep.finite = true;
                   rep.value = std::pow(1.0 - c.r0 * c.r0, power);
                 },
                 [&](const CircleRadialDerivative&) {
                   throw unsupported_functional(
                       "finiteness integral: circle_radial_derivative is a distribution");
                 },
             },
             m);
  return rep;
}

/// Term-wise |c| weighted sum; divergent as soon as one nonzero term diverges.
inline FinitenessReport finiteness(const BaseMeasure& b, double order) {
  if (order < 0.0) throw contract_violation("finiteness: negative order");
  const auto terms = terms_of(b);
  FinitenessReport out;
  out.finite = true;
  compensated_sum<double> total;
  if (has_distribution(b))
    throw unsupported_functional("finiteness integral: circle_radial_derivative is a distribution");
  for (const auto& t : terms) {
    if (t.coeff == complex(0.0, 0.0)) continue;
    const auto r = finiteness(t.measure, order);
    if (!r.finite) {
      out.finite = false;
      const double e = *r.divergence_exponent;
      out.divergence_exponent = out.divergence_exponent ? std::min(*out.divergence_exponent, e) : e;
    } else {
      total += std::abs(t.coeff) * *r.value;
    }
  }
  if (out.finite) out.value = total.value();
  return out;
}

}  // namespace detail

/// Decides finiteness of int (1-|w|^2)^{-2k-2} d|mu|(w) analytically.
/// Combinations are bounded term-wise, which over-approximates |mu|.
inline FinitenessReport carleson_integral(const BaseMeasure& b, int k) {
  if (k < 0) throw contract_violation("carleson_integral: k must be nonnegative");
  validate(b);
  auto r = detail::finiteness(b, static_cast<double>(k));
  r.k = k;
  return r;
}

}  // namespace bergman
