#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "special.hpp"

namespace bergman {

/// Dense row-major complex matrix. Minimal on purpose: the library only needs
/// element access, conjugate transpose and a few norms.
class cmatrix {
 public:
  cmatrix() = default;
  cmatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<complex>& data() const noexcept { return data_; }

  cmatrix adjoint() const {
    cmatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  double frobenius_norm() const {
    compensated_sum<double> s;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s.value());
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool operator==(const cmatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<complex> data_;
};

inline cmatrix operator*(const cmatrix& a, const cmatrix& b) {
  if (a.cols() != b.rows()) throw contract_violation("matrix product: shape mismatch");
  cmatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const complex aik = a(i, k);
      if (aik == complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline cmatrix operator-(const cmatrix& a, const cmatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw contract_violation("matrix difference: shape mismatch");
  cmatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

inline cmatrix operator+(const cmatrix& a, const cmatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw contract_violation("matrix sum: shape mismatch");
  cmatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

}  // namespace bergman
