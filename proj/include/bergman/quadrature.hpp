#pragma once

// Composite Gauss-Legendre quadrature on [0, 1] with a geometrically graded
// mesh toward t = 1 (panel edges 1 - 2^{-j}), optionally also toward t = 0.
// Integrands receive both t and 1 - t so that callers near the boundary never
// have to form 1 - t by cancellation.

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "errors.hpp"
#include "special.hpp"

namespace bergman {

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;          ///< estimate on the resolved part
  double boundary_tail = 0.0;  ///< extrapolated contribution of the unresolved end panels
  int panels = 0;

  double total_error() const { return error + boundary_tail; }
};

struct GradedOptions {
  double tol = 1e-8;
  int min_panels = 8;    ///< graded panels toward 1 before the stopping test may fire
  int max_panels = 60;   ///< budget toward 1; exhaustion is a numerical failure
  bool grade_left = false;
  int min_left_panels = 4;
  int max_left_panels = 60;
  int max_bisection_depth = 12;
};

namespace detail {

template <int Points>
struct gl_table {
  using rule = boost::math::quadrature::gauss<double, Points>;
  // boost stores the nonnegative half of the symmetric rule
  static auto nodes() { return rule::abscissa(); }
  static auto weights() { return rule::weights(); }
};

/// int_{x0}^{x1} g(x) dx with an n-point Gauss-Legendre rule.
template <int Points, class T, class G>
T gauss_panel(const G& g, double x0, double x1) {
  const auto x = gl_table<Points>::nodes();
  const auto w = gl_table<Points>::weights();
  const double half = 0.5 * (x1 - x0);
  const double mid = 0.5 * (x0 + x1);
  compensated_sum<T> acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      acc += static_cast<T>(w[i] * g(mid));
    } else {
      acc += static_cast<T>(w[i] * g(mid - half * x[i]));
      acc += static_cast<T>(w[i] * g(mid + half * x[i]));
    }
  }
  return static_cast<T>(acc.value() * half);
}

/// 16-point panel checked against the 8-point rule, bisected until they agree to abs_tol.
template <class T, class G>
std::pair<T, double> adaptive_panel(const G& g, double x0, double x1, double abs_tol, int depth) {
  const T hi = gauss_panel<16, T>(g, x0, x1);
  const T lo = gauss_panel<8, T>(g, x0, x1);
  const double err = std::abs(hi - lo);
  if (err <= abs_tol || depth <= 0 || !std::isfinite(err)) return {hi, err};
  const double xm = 0.5 * (x0 + x1);
  auto [a, ea] = adaptive_panel<T>(g, x0, xm, 0.5 * abs_tol, depth - 1);
  auto [b, eb] = adaptive_panel<T>(g, xm, x1, 0.5 * abs_tol, depth - 1);
  return {a + b, ea + eb};
}

inline double geometric_tail(double last, double previous) {
  if (last == 0.0) return 0.0;
  if (previous > 0.0) {
    const double r = last / previous;
    if (r < 1.0) return last * r / (1.0 - r);
  }
  return last;
}

}  // namespace detail

/// int_0^1 f(t, 1 - t) dt on the graded mesh. Panel j >= 1 covers
/// [1 - 2^{-j}, 1 - 2^{-j-1}]; refinement stops once a panel contributes less
/// than tol/10. The part beyond the last panel is reported in boundary_tail,
/// extrapolated from the ratio of the last two panel contributions.
template <class T, class F>
QuadratureResult<T> integrate_graded(const F& f, const GradedOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw contract_violation("integrate_graded: tol must be positive");
  QuadratureResult<T> out;
  compensated_sum<T> total;
  const double panel_tol = opt.tol / 100.0;

  // central part [0, 1/2], optionally graded toward 0: [2^{-i-1}, 2^{-i}]
  if (!opt.grade_left) {
    auto g = [&](double t) { return f(t, 1.0 - t); };
    auto [v, e] = detail::adaptive_panel<T>(g, 0.0, 0.5, panel_tol, opt.max_bisection_depth);
    total += v;
    out.error += e;
    ++out.panels;
  } else {
    auto g = [&](double t) { return f(t, 1.0 - t); };
    double prev = -1.0;
    bool done = false;
    for (int i = 1; i <= opt.max_left_panels; ++i) {
      const double hi = std::ldexp(1.0, -i);
      auto [v, e] = detail::adaptive_panel<T>(g, 0.5 * hi, hi, panel_tol, opt.max_bisection_depth);
      total += v;
      out.error += e;
      ++out.panels;
      const double c = std::abs(v);
      if (i >= opt.min_left_panels && c < opt.tol / 10.0) {
        out.boundary_tail += detail::geometric_tail(c, prev);
        done = true;
        break;
      }
      prev = c;
    }
    if (!done)
      throw numerical_failure("integrate_graded: panel budget toward 0 exhausted",
                              std::abs(total.value()), prev);
  }

  // graded panels toward 1, parametrized by v = 1 - t
  auto g = [&](double v) { return f(1.0 - v, v); };
  double prev = -1.0;
  for (int j = 1;; ++j) {
    if (j > opt.max_panels)
      throw numerical_failure("integrate_graded: panel budget toward 1 exhausted",
                              std::abs(total.value()), prev);
    const double hi = std::ldexp(1.0, -j);
    auto [v, e] = detail::adaptive_panel<T>(g, 0.5 * hi, hi, panel_tol, opt.max_bisection_depth);
    total += v;
    out.error += e;
    ++out.panels;
    const double c = std::abs(v);
    if (j >= opt.min_panels && c < opt.tol / 10.0) {
      out.boundary_tail += detail::geometric_tail(c, prev);
      break;
    }
    prev = c;
  }
  out.value = total.value();
  return out;
}

}  // namespace bergman
