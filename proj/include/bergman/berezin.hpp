#pragma once

// Berezin transform T~(z) = <T k_z, k_z>, k_z(w) = (1-|z|^2)(1 - conj(z) w)^{-2},
// by two independent routes (kernel series against the symbol, and contraction
// of a truncated matrix), the weighted Berezin transform of radial functions,
// and integration against the invariant measure (1-|z|^2)^{-2} dA.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "operator.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "symbol.hpp"

namespace bergman {

enum class BerezinRoute { series, matrix };

struct BerezinSample {
  complex z;
  complex value;
  BerezinRoute route = BerezinRoute::series;
  double est_error = 0.0;
};

inline constexpr double boundary_margin = 1e-6;

namespace detail {

inline void check_interior(complex z, const char* who) {
  if (!(std::abs(z) <= 1.0 - boundary_margin))
    throw boundary_error(std::string(who) + ": |z| too close to the unit circle");
}

/// 1 - |z|^2 without cancellation.
inline double one_minus_norm(complex z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

/// Diagonal moments M(p, p) of a radial measure as a multiplicative recurrence.
class radial_moments {
 public:
  explicit radial_moments(const SimpleMeasure& mu) : mu_(mu) {}

  /// First index with a nonzero diagonal moment.
  int first_index() const { return std::holds_alternative<CircleRadialDerivative>(mu_) ? 1 : 0; }

  double at_first() const {
    return std::visit(overloaded{
                          [](const RadialPower& r) { return beta_fn(r.a + 1.0, r.s + 1.0); },
                          [](const CircleUniform&) { return 1.0; },
                          [](const CircleRadialDerivative& d) { return -2.0 * d.r0; },
                          [](const PointMass&) -> double { throw contract_violation("radial_moments: point mass"); },
                      },
                      mu_);
  }

  /// M(p+1, p+1) / M(p, p)
  double ratio(int p) const {
    const double pp = p;
    return std::visit(overloaded{
                          [&](const RadialPower& r) { return (pp + r.a + 1.0) / (pp + r.a + r.s + 2.0); },
                          [](const CircleUniform& c) { return c.r0 * c.r0; },
                          [&](const CircleRadialDerivative& d) { return (pp + 1.0) / pp * d.r0 * d.r0; },
                          [](const PointMass&) -> double { return 0.0; },
                      },
                      mu_);
  }

  /// Nonincreasing majorant of |ratio(i)| over all i >= p.
  double ratio_bound(int p) const {
    return std::visit(overloaded{
                          [](const RadialPower&) { return 1.0; },
                          [&](const auto&) { return std::abs(ratio(p)); },
                      },
                      mu_);
  }

 private:
  SimpleMeasure mu_;
};

struct series_sum {
  double value = 0.0;
  double tail = 0.0;
};

/// sum_p C(p+alpha+1, p) C(p+beta+1, p) t^p M(p, p) with geometric tail bound below tol.
inline series_sum radial_kernel_series(const radial_moments& mom, int alpha, int beta, double t, double tol) {
  int p = mom.first_index();
  double ba = binomial(p + alpha + 1, p);
  double bb = binomial(p + beta + 1, p);
  double tp = ipow(t, p);
  double m = mom.at_first();
  compensated_sum<double> acc;
  series_sum out;
  for (int count = 0;; ++count, ++p) {
    const double term = ba * bb * tp * m;
    acc += term;
    if (t == 0.0) break;
    const double pp = p;
    const double rho =
        t * (pp + alpha + 2.0) / (pp + 1.0) * (pp + beta + 2.0) / (pp + 1.0) * mom.ratio_bound(p);
    if (rho < 1.0) {
      const double tail = std::abs(term) * rho / (1.0 - rho);
      if (tail < tol) {
        out.tail = tail;
        break;
      }
    }
    if (count >= max_series_terms)
      throw numerical_failure("berezin series did not converge", acc.value(), std::abs(term));
    ba *= (pp + alpha + 2.0) / (pp + 1.0);
    bb *= (pp + beta + 2.0) / (pp + 1.0);
    tp *= t;
    m *= mom.ratio(p);
  }
  out.value = acc.value();
  return out;
}

/// Same sum for RadialPower in integral form, usable up to the boundary:
///   int_0^1 u^a (1-u)^s (1 - t u)^{-(alpha+beta+3)} P(t u) du,
/// where sum_p C(p+alpha+1,p) C(p+beta+1,p) x^p = (1-x)^{-(alpha+beta+3)} P(x) and
/// P(x) = sum_j C(alpha+1, j) C(beta+1, j) x^j (Euler transformation of 2F1).
inline series_sum radial_power_kernel_integral(const RadialPower& r, int alpha, int beta, double t,
                                               double one_minus_t, double tol) {
  const int deg = std::min(alpha, beta) + 1;
  std::vector<double> poly(deg + 1);
  for (int j = 0; j <= deg; ++j) poly[j] = binomial(alpha + 1, j) * binomial(beta + 1, j);
  const int power = alpha + beta + 3;
  auto f = [&](double u, double omu) {
    const double x = t * u;
    double px = 0.0;
    for (int j = deg; j >= 0; --j) px = px * x + poly[j];
    const double denom = one_minus_t + t * omu;  // 1 - t u
    const double ua = r.a == 0.0 ? 1.0 : std::pow(u, r.a);
    return ua * std::pow(omu, r.s) * px / ipow(denom, power);
  };
  GradedOptions opt;
  opt.tol = tol;
  opt.min_panels = std::max(8, static_cast<int>(std::ceil(-std::log2(one_minus_t))) + 6);
  opt.max_panels = 200;
  opt.grade_left = !(r.a >= 0.0 && std::floor(r.a) == r.a);
  const auto q = integrate_graded<double>(f, opt);
  return {q.value, q.total_error()};
}

inline series_sum radial_kernel_sum(const SimpleMeasure& mu, int alpha, int beta, double t,
                                    double one_minus_t, double tol) {
  if (const auto* r = std::get_if<RadialPower>(&mu); r != nullptr && one_minus_t < 0.02)
    return radial_power_kernel_integral(*r, alpha, beta, t, one_minus_t, tol);
  return radial_kernel_series(radial_moments(mu), alpha, beta, t, tol);
}

struct berezin_term {
  complex value;
  double error = 0.0;
};

inline berezin_term berezin_simple(const SimpleMeasure& mu, int alpha, int beta, complex z, double tol) {
  const double omt = one_minus_norm(z);
  const complex zb = std::conj(z);
  const double sign = sign_power(alpha + beta);
  const double fa = factorial(alpha + 1);
  const double fb = factorial(beta + 1);

  if (const auto* pm = std::get_if<PointMass>(&mu)) {
    // (-1)^{a+b} (1-|z|^2)^2 (a+1)! zb^a / (1 - zb z0)^{2+a} * (b+1)! z^b / (1 - z conj(z0))^{2+b}
    const complex left = fa * ipow(zb, alpha) / ipow(1.0 - zb * pm->z0, 2 + alpha);
    const complex right = fb * ipow(z, beta) / ipow(1.0 - z * std::conj(pm->z0), 2 + beta);
    return {sign * omt * omt * left * right, 0.0};
  }

  const complex prefactor = sign * fa * fb * ipow(zb, alpha) * ipow(z, beta) * (omt * omt);
  const double scale = std::abs(prefactor);
  if (scale == 0.0) return {0.0, 0.0};
  const double t = std::norm(z);
  const auto s = radial_kernel_sum(mu, alpha, beta, t, omt, tol / scale);
  return {prefactor * s.value, scale * s.tail};
}

/// Series route without the public boundary check; the invariant-measure
/// integrator samples much closer to the circle than callers are allowed to.
inline BerezinSample berezin_series_eval(const SymbolSpec& symbol, complex z, double tol) {
  BerezinSample out{z, 0.0, BerezinRoute::series, 0.0};
  const auto terms = terms_of(symbol.base);
  compensated_sum<complex> acc;
  for (const auto& term : terms) {
    const double weight = std::max(1.0, std::abs(term.coeff));
    const auto b = berezin_simple(term.measure, symbol.alpha, symbol.beta, z,
                                  tol / (weight * static_cast<double>(terms.size())));
    acc += term.coeff * b.value;
    out.est_error += std::abs(term.coeff) * b.error;
  }
  out.value = acc.value();
  return out;
}

/// T~ of a radial symbol with alpha == beta as a function of t = |z|^2. Taking 1 - t
/// directly keeps samples meaningful where t itself rounds to 1.
inline BerezinSample berezin_radial_eval(const SymbolSpec& symbol, double t, double omt, double tol) {
  if (symbol.alpha != symbol.beta || !is_radial(symbol.base))
    throw contract_violation("berezin_radial_eval: needs a radial base and alpha == beta");
  const int alpha = symbol.alpha;
  const auto terms = terms_of(symbol.base);
  const double fa = factorial(alpha + 1);
  const double prefactor = fa * fa * ipow(t, alpha) * omt * omt;
  BerezinSample out{complex(std::sqrt(t), 0.0), 0.0, BerezinRoute::series, 0.0};
  if (prefactor == 0.0) return out;
  compensated_sum<complex> acc;
  for (const auto& term : terms) {
    const double weight = std::max(1.0, std::abs(term.coeff));
    const auto sum = radial_kernel_sum(term.measure, alpha, alpha, t, omt,
                                       tol / (weight * prefactor * static_cast<double>(terms.size())));
    acc += term.coeff * (prefactor * sum.value);
    out.est_error += std::abs(term.coeff) * prefactor * sum.tail;
  }
  out.value = acc.value();
  return out;
}

}  // namespace detail

/// Berezin transform from the kernel expansion
///   (-1)^{a+b} (a+1)!(b+1)! zb^a z^b (1-|z|^2)^2 sum_{p,q} C(p+a+1,p) C(q+b+1,q) zb^p z^q M(p,q).
/// Radial measures reduce to the diagonal p = q; point masses use the closed form.
inline BerezinSample berezin_series(const SymbolSpec& symbol, complex z, double tol = 1e-10) {
  validate(symbol);
  detail::check_interior(z, "berezin_series");
  if (!(tol > 0.0)) throw contract_violation("berezin_series: tol must be positive");
  return detail::berezin_series_eval(symbol, z, tol);
}

/// Contraction sum_{n,m} entries(n,m) a_m conj(a_n), a_n = (1-|z|^2) sqrt(n+1) zb^n.
/// est_error bounds the neglected indices >= N by 2 ||a_tail|| ||a|| max|entries|.
inline BerezinSample berezin_matrix(const TruncatedOperator& op, complex z) {
  detail::check_interior(z, "berezin_matrix");
  const int N = op.dim;
  const double omt = detail::one_minus_norm(z);
  const complex zb = std::conj(z);
  std::vector<complex> a(N);
  complex zn = 1.0;
  for (int n = 0; n < N; ++n) {
    a[n] = omt * std::sqrt(n + 1.0) * zn;
    zn *= zb;
  }
  compensated_sum<complex> acc;
  for (int n = 0; n < N; ++n) {
    compensated_sum<complex> row;
    for (int m = 0; m < N; ++m) {
      const complex e = op.entries(n, m);
      if (e != complex(0.0, 0.0)) row += e * a[m];
    }
    acc += std::conj(a[n]) * row.value();
  }

  // sum_{n>=N} (n+1) x^n = x^N ((N+1)/(1-x) + x/(1-x)^2)
  const double x = std::norm(z);
  const double tail_sq = omt * omt * std::pow(x, N) * ((N + 1.0) / omt + x / (omt * omt));
  const double all_sq = 1.0;  // ||k_z|| = 1
  const double est = 2.0 * std::sqrt(tail_sq) * std::sqrt(all_sq) * op.entries.max_abs();
  return {z, acc.value(), BerezinRoute::matrix, est};
}

/// f(w) = (1-|w|^2)^{m_exp} |w|^{2 a_exp}
struct RadialFunction {
  double m_exp = 0.0;
  double a_exp = 0.0;
};

/// Berezin transform on the weighted space A^2_alpha of a radial function:
///   (alpha+1)(1-|z|^2)^{2+alpha} sum_p C(p+alpha+1,p)^2 |z|^{2p} int_0^1 f(sqrt t) t^p (1-t)^alpha dt.
inline complex weighted_berezin_radial(const RadialFunction& f, int alpha, complex z, double tol = 1e-10) {
  if (alpha < 0) throw contract_violation("weighted_berezin_radial: alpha must be nonnegative");
  if (!(f.m_exp + alpha > -1.0) || !(f.a_exp > -1.0))
    throw contract_violation("weighted_berezin_radial: f is not integrable against the weight");
  detail::check_interior(z, "weighted_berezin_radial");
  const double omt = detail::one_minus_norm(z);
  const double t = std::norm(z);
  const double prefactor = (alpha + 1.0) * std::pow(omt, 2.0 + alpha);
  // inner integral B(p + a + 1, m + alpha + 1) by recurrence in p
  const double c = f.m_exp + alpha + 1.0;
  double inner = beta_fn(f.a_exp + 1.0, c);
  double b = 1.0;
  double tp = 1.0;
  compensated_sum<double> acc;
  for (int p = 0;; ++p) {
    const double term = b * b * tp * inner;
    acc += term;
    if (t == 0.0) break;
    const double pp = p;
    const double g = (pp + alpha + 2.0) / (pp + 1.0);
    const double rho = t * g * g;
    if (rho < 1.0 && prefactor * term * rho / (1.0 - rho) < tol) break;
    if (p >= max_series_terms)
      throw numerical_failure("weighted_berezin_radial: series did not converge", acc.value(), term);
    b *= g;
    tp *= t;
    inner *= (pp + f.a_exp + 1.0) / (pp + f.a_exp + 1.0 + c);
  }
  return prefactor * acc.value();
}

struct InvariantIntegralOptions {
  bool radial_hint = false;
  /// Highest angular frequency of the sampler when known; the trapezoid rule with
  /// 4 * degree + 8 nodes is then exact and no refinement is done.
  std::optional<int> angular_degree;
  double tol = 1e-8;
  int max_angular_nodes = 1 << 15;
};

struct InvariantIntegral {
  complex value;
  double quadrature_error = 0.0;
  double boundary_tail = 0.0;
  int panels = 0;

  double error() const { return quadrature_error + boundary_tail; }
};

using Sampler = std::function<complex(complex)>;

namespace detail {

/// (1/n) sum_k g(r e^{2 pi i k / n}), doubling n until successive averages agree
/// to abs_tol or to roundoff relative to the largest sample.
inline complex angular_average(const Sampler& g, double r, const InvariantIntegralOptions& opt, double abs_tol) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (opt.angular_degree) {
    const int n = 4 * *opt.angular_degree + 8;
    compensated_sum<complex> acc;
    for (int k = 0; k < n; ++k) acc += g(std::polar(r, two_pi * k / n));
    return acc.value() / static_cast<double>(n);
  }
  int n = 16;
  compensated_sum<complex> acc;
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const complex v = g(std::polar(r, two_pi * k / n));
    scale = std::max(scale, std::abs(v));
    acc += v;
  }
  complex avg = acc.value() / static_cast<double>(n);
  while (true) {
    if (2 * n > opt.max_angular_nodes)
      throw numerical_failure("invariant_integral: angular refinement budget exhausted", std::abs(avg), scale);
    for (int k = 1; k < 2 * n; k += 2) {
      const complex v = g(std::polar(r, two_pi * k / (2 * n)));
      scale = std::max(scale, std::abs(v));
      acc += v;
    }
    n *= 2;
    const complex next = acc.value() / static_cast<double>(n);
    const double diff = std::abs(next - avg);
    avg = next;
    if (diff <= std::max(1e-14 * scale, abs_tol)) break;
  }
  return avg;
}

}  // namespace detail

/// int_D g(z) dlambda(z), dlambda = (1-|z|^2)^{-2} dA, as int_0^1 dt (1-t)^{-2} avg_theta g(sqrt(t) e^{i theta}).
/// With radial_hint the angular average is replaced by g(sqrt t).
inline InvariantIntegral invariant_integral(const Sampler& sampler, const InvariantIntegralOptions& opt = {}) {
  auto integrand = [&](double t, double omt) -> complex {
    if (omt <= 0.0) return 0.0;
    const double r = std::sqrt(t);
    // the integrand is avg / (1-t)^2 and panels near t = 1 have width ~ (1-t), so an
    // error of tol (1-t) / 10^4 in the average costs at most tol / 10^4 per panel
    const complex avg = opt.radial_hint ? sampler(complex(r, 0.0))
                                        : detail::angular_average(sampler, r, opt, 1e-4 * opt.tol * omt);
    return avg / (omt * omt);
  };
  GradedOptions g;
  g.tol = opt.tol;
  const auto q = integrate_graded<complex>(integrand, g);
  return {q.value, q.error, q.boundary_tail, q.panels};
}

using RadialSampler = std::function<complex(double t, double one_minus_t)>;

/// int_D g dlambda for a radial g given as a function of t = |z|^2 and 1 - t.
inline InvariantIntegral invariant_integral_radial(const RadialSampler& g, double tol = 1e-8) {
  if (!(tol > 0.0)) throw contract_violation("invariant_integral_radial: tol must be positive");
  auto integrand = [&](double t, double omt) -> complex {
    if (omt <= 0.0) return 0.0;
    return g(t, omt) / (omt * omt);
  };
  GradedOptions opt;
  opt.tol = tol;
  // 1 - t is exact here, so panels far below double resolution of t are still meaningful
  opt.max_panels = 200;
  const auto q = integrate_graded<complex>(integrand, opt);
  return {q.value, q.error, q.boundary_tail, q.panels};
}

}  // namespace bergman
