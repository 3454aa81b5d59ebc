#pragma once

// Trace of T_F by three routes (matrix diagonal, Berezin integral against the
// invariant measure, closed-form pairing of F with (1-|w|^2)^{-2}), singular
// values of truncations, exponential decay fits, and the Carleson bound probe.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "berezin.hpp"
#include "errors.hpp"
#include "jacobi.hpp"
#include "kernel.hpp"
#include "operator.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "symbol.hpp"

namespace bergman {

// ---------------------------------------------------------------------------
// trace-class gate

/// Throws not_trace_class when int (1-|w|^2)^{-(alpha+beta)-2} d|mu| diverges.
/// The distribution variant is admissible by construction (compact support).
inline void require_trace_class(const SymbolSpec& symbol) {
  validate(symbol);
  if (has_distribution(symbol.base)) return;
  const auto rep = detail::finiteness(symbol.base, 0.5 * (symbol.alpha + symbol.beta));
  if (!rep.finite)
    throw not_trace_class("symbol is not trace class: finiteness integral diverges",
                          *rep.divergence_exponent);
}

// ---------------------------------------------------------------------------
// matrix route

struct TraceMatrix {
  complex value;            ///< partial_sum + tail_correction
  complex partial_sum;      ///< sum_{n<N} <T e_n, e_n>
  complex tail_correction;  ///< estimated sum_{n>=N}, zero for geometric families
  double tail_bound = 0.0;  ///< bound on |true trace - value|
  bool tail_known = true;
};

namespace detail {

struct tail_estimate {
  complex correction;
  double bound = 0.0;
  bool known = true;
};

/// Geometric tail for diagonals whose term ratio is majorized by a decreasing rho(n).
template <class Term, class Rho>
tail_estimate geometric_diagonal_tail(int start, const Term& term, const Rho& rho) {
  const double r = rho(start);
  if (!(r < 1.0)) return {0.0, 0.0, false};
  return {0.0, std::abs(term(start)) / (1.0 - r), true};
}

/// Smooth extension of the RadialPower diagonal
///   t(x) = (x+1) [(x)_alpha]^2 B(x - alpha + a + 1, s + 1).
inline double radial_power_diagonal(const RadialPower& r, int alpha, double x) {
  double ff = 1.0;
  for (int i = 0; i < alpha; ++i) ff *= (x - i);
  const double y = x - alpha + r.a + 1.0;
  const double b = beta_fn(y, r.s + 1.0);
  return (x + 1.0) * ff * ff * b;
}

/// Euler-Maclaurin estimate of sum_{n>=N} t(n) for the power-law RadialPower diagonal,
/// t(n) ~ n^{-(s - 2 alpha)}. Unknown when the series diverges.
inline tail_estimate radial_power_tail(const RadialPower& r, int alpha, int N) {
  const double q = r.s - 2.0 * alpha;
  if (!(q > 1.0)) return {0.0, 0.0, false};
  // sum the head exactly until the smooth extension is comfortably inside its domain
  const int start = std::max({N, alpha + 16, 32});
  compensated_sum<double> head;
  for (int n = N; n < start; ++n) head += radial_power_diagonal(r, alpha, n);

  const double x0 = start;
  auto t = [&](double x) { return radial_power_diagonal(r, alpha, x); };
  // int_{x0}^inf t(x) dx with x = x0 / u, graded toward u = 0
  auto f = [&](double, double u) { return u > 0.0 ? t(x0 / u) * x0 / (u * u) : 0.0; };
  GradedOptions opt;
  opt.tol = 1e-13 * std::max(1.0, std::abs(t(x0)) * x0);
  opt.max_panels = 900;
  QuadratureResult<double> integral;
  try {
    integral = integrate_graded<double>(f, opt);
  } catch (const numerical_failure&) {
    return {0.0, 0.0, false};
  }
  const double h = 1.0;
  const double d1 = (-t(x0 + 2 * h) + 8 * t(x0 + h) - 8 * t(x0 - h) + t(x0 - 2 * h)) / (12.0 * h);
  const double d3 = (t(x0 + 2 * h) - 2 * t(x0 + h) + 2 * t(x0 - h) - t(x0 - 2 * h)) / (2.0 * h * h * h);
  const double em = integral.value + integral.boundary_tail + 0.5 * t(x0) - d1 / 12.0 + d3 / 720.0;
  const double bound = std::abs(d3) / 720.0 + integral.error + integral.boundary_tail +
                       1e-15 * std::abs(em) * std::max(1.0, x0);
  return {head.value() + em, bound, true};
}

inline tail_estimate diagonal_tail(const SimpleMeasure& mu, int alpha, int beta, int N) {
  return std::visit(
      overloaded{
          [&](const RadialPower& r) -> tail_estimate {
            if (alpha != beta) return {0.0, 0.0, true};
            return radial_power_tail(r, alpha, N);
          },
          [&](const CircleRadialDerivative& d) -> tail_estimate {
            const int start = std::max(N, 1);
            auto term = [&](int n) { return 2.0 * n * (n + 1.0) * ipow(d.r0, 2 * n - 1); };
            auto rho = [&](int n) { return (n + 2.0) / n * d.r0 * d.r0; };
            return geometric_diagonal_tail(start, term, rho);
          },
          [&](const auto& m) -> tail_estimate {
            // PointMass / CircleUniform: |t_n| = (n+1)(n)_alpha (n)_beta x^{n - (alpha+beta)/2}
            double x = 0.0;
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PointMass>)
              x = std::norm(m.z0);
            else if constexpr (std::is_same_v<std::decay_t<decltype(m)>, CircleUniform>) {
              if (alpha != beta) return {0.0, 0.0, true};
              x = m.r0 * m.r0;
            }
            if (x == 0.0) return {0.0, 0.0, true};
            const int start = std::max({N, alpha, beta});
            auto term = [&](int n) {
              return (n + 1.0) * falling_factorial(n, alpha) * falling_factorial(n, beta) *
                     std::pow(x, n - 0.5 * (alpha + beta));
            };
            auto rho = [&](int n) {
              const double nn = n;
              return x * (nn + 2.0) / (nn + 1.0) * (nn + 1.0) / (nn + 1.0 - alpha) * (nn + 1.0) /
                     (nn + 1.0 - beta);
            };
            return geometric_diagonal_tail(start, term, rho);
          },
      },
      mu);
}

}  // namespace detail

/// sum_{n<N} <T e_n, e_n> plus an explicit remainder estimate per family.
inline TraceMatrix trace_matrix(const SymbolSpec& symbol, int N) {
  validate(symbol);
  if (N < 1) throw contract_violation("trace_matrix: N must be positive");
  TraceMatrix out;
  compensated_sum<complex> partial;
  for (int n = 0; n < N; ++n) partial += entry(symbol, n, n);
  out.partial_sum = partial.value();

  compensated_sum<complex> correction;
  for (const auto& term : terms_of(symbol.base)) {
    if (term.coeff == complex(0.0, 0.0)) continue;
    const auto tail = detail::diagonal_tail(term.measure, symbol.alpha, symbol.beta, N);
    if (!tail.known) out.tail_known = false;
    // the diagonal of a single term carries the sign (-1)^{alpha+beta}
    correction += term.coeff * sign_power(symbol.alpha + symbol.beta) * tail.correction;
    out.tail_bound += std::abs(term.coeff) * tail.bound;
  }
  out.tail_correction = correction.value();
  if (!out.tail_known) {
    out.tail_correction = 0.0;
    out.tail_bound = std::numeric_limits<double>::infinity();
  }
  out.value = out.partial_sum + out.tail_correction;
  return out;
}

// ---------------------------------------------------------------------------
// closed-form route: (F, (1-|w|^2)^{-2}) = (-1)^{alpha+beta} int D^{alpha,beta} dmu

namespace detail {

inline complex closed_form_simple(const SimpleMeasure& mu, int alpha, int beta, double tol) {
  const double sign = sign_power(alpha + beta);
  return std::visit(
      overloaded{
          [&](const PointMass& p) -> complex { return sign * d_alpha_beta_eval(p.z0, alpha, beta, tol); },
          [&](const RadialPower& r) -> complex {
            if (alpha != beta) return 0.0;
            // int Q(t) (1-t)^{-(2+2 alpha)} t^a (1-t)^s dt = sum_i Q_i B(i + a + 1, s - 1 - 2 alpha)
            const auto q = d_alpha_alpha_numerator(alpha);
            compensated_sum<double> acc;
            for (std::size_t i = 0; i < q.size(); ++i)
              acc += q[i] * beta_fn(i + r.a + 1.0, r.s - 1.0 - 2.0 * alpha);
            return acc.value();
          },
          [&](const CircleUniform& c) -> complex {
            if (alpha != beta) return 0.0;
            const auto q = d_alpha_alpha_numerator(alpha);
            const double t = c.r0 * c.r0;
            double poly = 0.0;
            for (std::size_t i = q.size(); i-- > 0;) poly = poly * t + q[i];
            return poly / std::pow(1.0 - t, 2.0 + 2.0 * alpha);
          },
          [&](const CircleRadialDerivative& d) -> complex {
            // -(d/dr)(1 - r^2)^{-2} at r0
            const double omr = 1.0 - d.r0 * d.r0;
            return -4.0 * d.r0 / (omr * omr * omr);
          },
      },
      mu);
}

}  // namespace detail

inline complex trace_closed_form(const SymbolSpec& symbol, double tol = 1e-12) {
  require_trace_class(symbol);
  compensated_sum<complex> acc;
  for (const auto& term : terms_of(symbol.base))
    acc += term.coeff * detail::closed_form_simple(term.measure, symbol.alpha, symbol.beta, tol);
  return acc.value();
}

// ---------------------------------------------------------------------------
// Berezin route

struct TraceBerezin {
  complex value;
  double error = 0.0;
};

/// tr T = int_D T~(z) dlambda(z), with T~ from the kernel series.
inline TraceBerezin trace_berezin(const SymbolSpec& symbol, double tol = 1e-8) {
  require_trace_class(symbol);
  const bool radial = is_radial(symbol.base);
  if (radial && symbol.alpha == symbol.beta) {
    // a sample error d costs d / (1-t)^2 over a panel of width ~ (1-t), i.e. d / (1-t)
    RadialSampler g = [&](double t, double omt) {
      return detail::berezin_radial_eval(symbol, t, omt, 1e-2 * tol * omt).value;
    };
    const auto r = invariant_integral_radial(g, tol);
    return {r.value, r.error()};
  }
  InvariantIntegralOptions opt;
  opt.tol = tol;
  if (radial) opt.angular_degree = std::abs(symbol.alpha - symbol.beta);
  // T~ carries (1-|z|^2)^2 and dlambda divides it out again, so the series tolerance scales with it
  const double series_tol = tol / 10.0;
  Sampler sampler = [&](complex z) {
    const double omt = detail::one_minus_norm(z);
    return detail::berezin_series_eval(symbol, z, series_tol * omt * omt).value;
  };
  const auto r = invariant_integral(sampler, opt);
  return {r.value, r.error()};
}

// ---------------------------------------------------------------------------
// report

struct TraceReport {
  TraceMatrix route_matrix;
  TraceBerezin route_berezin;
  std::optional<complex> route_closed_form;
  bool agree = false;
  std::optional<complex> paper_reference_value;

  /// Closed form when available, otherwise the matrix route.
  complex preferred() const { return route_closed_form ? *route_closed_form : route_matrix.value; }
};

struct TraceTolerances {
  double closed_vs_matrix = 1e-8;
  double berezin = 1e-5;
};

inline bool routes_agree(const TraceReport& r, const TraceTolerances& tol = {}) {
  const complex ref = r.preferred();
  const double scale = std::max(1.0, std::abs(ref));
  const double m_err = r.route_matrix.tail_bound;
  const double b_err = r.route_berezin.error;
  if (!r.route_matrix.tail_known) return false;
  bool ok = std::abs(r.route_matrix.value - r.route_berezin.value) <= tol.berezin * scale + m_err + b_err;
  if (r.route_closed_form) {
    ok = ok && std::abs(r.route_matrix.value - *r.route_closed_form) <= tol.closed_vs_matrix * scale + m_err;
    ok = ok && std::abs(r.route_berezin.value - *r.route_closed_form) <= tol.berezin * scale + b_err;
  }
  return ok;
}

inline TraceReport trace_report(const SymbolSpec& symbol, int N, double tol = 1e-8,
                                const TraceTolerances& tolerances = {}) {
  require_trace_class(symbol);
  TraceReport rep;
  rep.route_matrix = trace_matrix(symbol, N);
  rep.route_closed_form = trace_closed_form(symbol, std::min(tol, 1e-12));
  rep.route_berezin = trace_berezin(symbol, tol);
  rep.agree = routes_agree(rep, tolerances);
  return rep;
}

// ---------------------------------------------------------------------------
// singular values and decay

struct DecayFit {
  double C = 0.0;
  double sigma = 0.0;
  int n0 = 0;
  int n1 = 0;
  double residual = 0.0;  ///< RMS of ln-space fit errors
};

struct SpectrumReport {
  std::vector<double> svals;  ///< descending
  int numerical_rank = 0;
  std::optional<DecayFit> fit;
};

inline SpectrumReport singular_values(const TruncatedOperator& op, double rank_tol = 1e-12) {
  if (op.dim > max_dimension) throw resource_limit("singular_values: dimension exceeds 4096");
  const auto svd = jacobi_svd(op.entries);
  SpectrumReport rep;
  rep.svals = svd.svals;
  if (!rep.svals.empty() && rep.svals.front() > 0.0) {
    const double cut = rank_tol * rep.svals.front();
    rep.numerical_rank = static_cast<int>(
        std::count_if(rep.svals.begin(), rep.svals.end(), [&](double s) { return s > cut; }));
  }
  return rep;
}

/// Least squares of ln s_n = ln C - sigma n over n0 <= n <= n1.
inline DecayFit decay_fit(const SpectrumReport& report, std::pair<int, int> window) {
  const auto [n0, n1] = window;
  if (n0 < 0 || n1 <= n0 + 4) throw window_error("decay_fit: window must satisfy n1 > n0 + 4");
  if (n1 >= static_cast<int>(report.svals.size()))
    throw window_error("decay_fit: window extends past the spectrum");
  const int count = n1 - n0 + 1;
  compensated_sum<double> sx, sy;
  for (int n = n0; n <= n1; ++n) {
    const double s = report.svals[n];
    if (!(s > 1e-300)) throw window_error("decay_fit: zero or underflowed singular value in window");
    sx += n;
    sy += std::log(s);
  }
  const double mx = sx.value() / count;
  const double my = sy.value() / count;
  compensated_sum<double> sxx, sxy;
  for (int n = n0; n <= n1; ++n) {
    const double dx = n - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(report.svals[n]) - my);
  }
  const double slope = sxy.value() / sxx.value();
  const double intercept = my - slope * mx;
  compensated_sum<double> ss;
  for (int n = n0; n <= n1; ++n) {
    const double e = std::log(report.svals[n]) - (intercept + slope * n);
    ss += e * e;
  }
  return {std::exp(intercept), -slope, n0, n1, std::sqrt(ss.value() / count)};
}

inline std::pair<int, int> default_window(int N) { return {N / 4, N / 2}; }

/// Largest eigenvalue of the degree-<N compression of int |f^{(k)}|^2 dmu, for each N in dims.
inline std::vector<std::pair<int, double>> carleson_bound_estimate(const BaseMeasure& base, int k,
                                                                   const std::vector<int>& dims) {
  if (k < 0) throw contract_violation("carleson_bound_estimate: k must be nonnegative");
  validate(base);
  if (!is_nonnegative(base))
    throw unsupported_functional("carleson_bound_estimate: base must be a nonnegative measure");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw contract_violation("carleson_bound_estimate: dims must be positive");
    if (i > 0 && dims[i] <= dims[i - 1]) throw contract_violation("carleson_bound_estimate: dims must increase");
  }
  std::vector<std::pair<int, double>> out;
  for (int N : dims) {
    const auto op = assemble(SymbolSpec{k, k, base}, N);
    const auto eig = hermitian_eigenvalues(op.entries);
    out.emplace_back(N, eig.values.front());
  }
  return out;
}

}  // namespace bergman
