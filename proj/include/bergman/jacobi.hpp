#pragma once

// Jacobi methods for small dense complex matrices: one-sided (Hestenes) SVD
// and the two-sided cyclic method for Hermitian eigenvalues. Both reduce each
// 2x2 pivot to a real symmetric problem by a phase and share the rotation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "special.hpp"

namespace bergman {

struct JacobiOptions {
  double tol = 1e-13;  ///< relative off-diagonal threshold
  int max_sweeps = 30;
};

struct SvdResult {
  std::vector<double> svals;  ///< descending
  cmatrix u;                  ///< left singular vectors (columns); zero columns for zero svals
  cmatrix v;                  ///< right singular vectors (columns)
  int sweeps = 0;
  double off_diagonal = 0.0;  ///< largest relative column coupling left after the last sweep

  /// U diag(svals) V^*
  cmatrix reconstruct() const {
    const std::size_t k = svals.size();
    cmatrix us(u.rows(), k);
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < k; ++j) us(i, j) = u(i, j) * svals[j];
    return us * v.adjoint();
  }
};

struct EigenResult {
  std::vector<double> values;  ///< descending
  int sweeps = 0;
  double off_diagonal = 0.0;
};

namespace detail {

struct rotation {
  double c = 1.0;
  double s = 0.0;
};

/// Rotation annihilating the coupling g > 0 of the real symmetric pivot [[app, g], [g, aqq]].
inline rotation symmetric_rotation(double app, double aqq, double g) {
  const double zeta = (aqq - app) / (2.0 * g);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, c * t};
}

}  // namespace detail

/// One-sided Jacobi SVD of an n x m complex matrix (columns orthogonalized in place).
/// Sweeps until every column pair has relative coupling below opt.tol.
inline SvdResult jacobi_svd(const cmatrix& a, const JacobiOptions& opt = {}) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  // column-major working copies
  std::vector<std::vector<complex>> w(cols, std::vector<complex>(rows));
  std::vector<std::vector<complex>> v(cols, std::vector<complex>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }
  const double fro = a.frobenius_norm();
  // couplings at roundoff level of the whole matrix are not worth rotating
  const double negligible = 1e-30 * fro * fro;

  SvdResult out;
  std::vector<double> norms(cols);
  auto column_norm = [&](std::size_t j) {
    compensated_sum<double> s;
    for (const auto& x : w[j]) s += std::norm(x);
    return s.value();
  };

  bool converged = cols < 2 || fro == 0.0;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    ++out.sweeps;
    double worst = 0.0;
    int rotations = 0;
    for (std::size_t j = 0; j < cols; ++j) norms[j] = column_norm(j);
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        compensated_sum<complex> dot;
        for (std::size_t i = 0; i < rows; ++i) dot += std::conj(w[p][i]) * w[q][i];
        const complex gamma = dot.value();
        const double g = std::abs(gamma);
        if (g <= negligible) continue;
        const double rel = g / std::sqrt(alpha * beta);
        if (rel <= opt.tol) continue;
        worst = std::max(worst, rel);
        ++rotations;

        const complex phase = gamma / g;  // e^{i phi}
        const auto [c, s] = detail::symmetric_rotation(alpha, beta, g);
        const complex ps = std::conj(phase) * s;
        for (std::size_t i = 0; i < rows; ++i) {
          const complex xp = w[p][i];
          const complex xq = w[q][i];
          w[p][i] = c * xp - ps * xq;
          w[q][i] = s * xp + c * std::conj(phase) * xq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const complex xp = v[p][i];
          const complex xq = v[q][i];
          v[p][i] = c * xp - ps * xq;
          v[q][i] = s * xp + c * std::conj(phase) * xq;
        }
        norms[p] = column_norm(p);
        norms[q] = column_norm(q);
      }
    }
    out.off_diagonal = worst;
    if (rotations == 0) converged = true;
  }
  if (!converged)
    throw numerical_failure("jacobi_svd: sweep budget exhausted", 0.0, out.off_diagonal);

  std::vector<std::size_t> order(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    order[j] = j;
    norms[j] = std::sqrt(column_norm(j));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  out.svals.resize(cols);
  out.u = cmatrix(rows, cols);
  out.v = cmatrix(cols, cols);
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    out.svals[k] = norms[j];
    for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = norms[j] > 0.0 ? w[j][i] / norms[j] : complex(0.0);
    for (std::size_t i = 0; i < cols; ++i) out.v(i, k) = v[j][i];
  }
  return out;
}

/// Eigenvalues of a Hermitian matrix by cyclic two-sided Jacobi rotations.
inline EigenResult hermitian_eigenvalues(const cmatrix& h, const JacobiOptions& opt = {}) {
  if (h.rows() != h.cols()) throw contract_violation("hermitian_eigenvalues: matrix must be square");
  const std::size_t n = h.rows();
  cmatrix a = h;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  auto off_norm = [&]() {
    compensated_sum<double> s;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s.value());
  };
  const double scale = a.frobenius_norm();

  EigenResult out;
  bool converged = n < 2 || scale == 0.0 || off_norm() <= opt.tol * scale;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const complex phase = apq / g;  // e^{i phi}
        const auto [c, s] = detail::symmetric_rotation(app, aqq, g);
        // A <- A U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q)
        const complex pc = std::conj(phase);
        for (std::size_t i = 0; i < n; ++i) {
          const complex xp = a(i, p);
          const complex xq = a(i, q);
          a(i, p) = c * xp - s * pc * xq;
          a(i, q) = s * xp + c * pc * xq;
        }
        // A <- U^* A
        for (std::size_t j = 0; j < n; ++j) {
          const complex xp = a(p, j);
          const complex xq = a(q, j);
          a(p, j) = c * xp - s * phase * xq;
          a(q, j) = s * xp + c * phase * xq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    out.off_diagonal = off_norm() / scale;
    converged = out.off_diagonal <= opt.tol;
  }
  if (!converged)
    throw numerical_failure("hermitian_eigenvalues: sweep budget exhausted", 0.0, out.off_diagonal);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i).real();
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

}  // namespace bergman
