// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OODKIT__LINALG_HPP_
#define OODKIT__LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oodkit/error.hpp"

namespace oodkit
{

using RealVector = std::vector<double>;

/// Dense row-major matrix of doubles. Rows are samples, columns are features.
///
/// A default-constructed matrix is empty (0x0) and only serves as a
/// placeholder; every other constructor requires rows >= 1 and cols >= 1.
class Matrix
{
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
  : rows_(rows), cols_(cols), data_(rows * cols, fill)
  {
    check_shape();
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
  : rows_(rows), cols_(cols), data_(std::move(data))
  {
    check_shape();
    if (data_.size() != rows_ * cols_) {
      throw DimensionError(
        "matrix data length " + std::to_string(data_.size()) + " does not match shape " +
        detail::shape_str(rows_, cols_));
    }
  }

  Matrix(std::initializer_list<std::initializer_list<double>> init)
  {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    check_shape();
    data_.reserve(rows_ * cols_);
    for (const auto & r : init) {
      if (r.size() != cols_) {
        throw DimensionError("ragged initializer for matrix");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n)
  {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 1.0;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double & operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const
  {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  /// Copies the listed rows, in the listed order.
  Matrix select_rows(std::span<const std::size_t> idx) const
  {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= rows_) {
        throw ParameterError("row index " + std::to_string(idx[i]) + " out of range");
      }
      std::copy_n(row(idx[i]).begin(), cols_, out.row(i).begin());
    }
    return out;
  }

  friend bool operator==(const Matrix &, const Matrix &) = default;

private:
  void check_shape() const
  {
    if (rows_ == 0 || cols_ == 0) {
      throw DimensionError("matrix shape " + detail::shape_str(rows_, cols_) + " has a zero extent");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using FeatureMatrix = Matrix;

/// Stacks matrices with equal column counts vertically.
inline Matrix vstack(const Matrix & top, const Matrix & bottom)
{
  if (top.cols() != bottom.cols()) {
    throw DimensionError(
      "vstack: column mismatch " + std::to_string(top.cols()) + " vs " +
      std::to_string(bottom.cols()));
  }
  std::vector<double> data(top.data().begin(), top.data().end());
  data.insert(data.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

/// Squared Euclidean distance, accumulated in index order.
inline double sq_distance(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

/// Entry (i, j) is the squared distance between row i of `a` and row j of `b`.
inline Matrix pairwise_sq_distances(const Matrix & a, const Matrix & b)
{
  if (a.cols() != b.cols()) {
    throw DimensionError(
      "pairwise_sq_distances: a is " + detail::shape_str(a.rows(), a.cols()) + ", b is " +
      detail::shape_str(b.rows(), b.cols()) + "; column counts must match");
  }
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      out(i, j) = std::max(0.0, sq_distance(a.row(i), b.row(j)));
    }
  }
  return out;
}

inline RealVector mean_vector(const Matrix & m)
{
  if (m.empty()) {
    throw DimensionError("mean_vector: empty matrix");
  }
  RealVector mu(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mu[j] += r[j];
    }
  }
  const double n = static_cast<double>(m.rows());
  for (double & v : mu) {
    v /= n;
  }
  return mu;
}

/// Population covariance (normalized by the row count, no Bessel correction).
inline Matrix covariance(const Matrix & m)
{
  if (m.rows() < 2) {
    throw DimensionError(
      "covariance: need at least 2 rows, got " + std::to_string(m.rows()));
  }
  const auto mu = mean_vector(m);
  const std::size_t d = m.cols();
  Matrix cov(d, d);
  std::vector<double> dev(d);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      dev[j] = r[j] - mu[j];
    }
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a; b < d; ++b) {
        cov(a, b) += dev[a] * dev[b];
      }
    }
  }
  const double n = static_cast<double>(m.rows());
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      cov(a, b) /= n;
      cov(b, a) = cov(a, b);
    }
  }
  return cov;
}

/// Lower-triangular Cholesky factor, or nullopt when a pivot is not
/// sufficiently positive relative to the largest diagonal entry.
inline std::optional<Matrix> cholesky(const Matrix & m)
{
  const std::size_t n = m.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_diag = std::max(max_diag, std::abs(m(i, i)));
  }
  const double floor = 1e-12 * max_diag;
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) {
      pivot -= l(j, k) * l(j, k);
    }
    if (!(pivot > floor)) {
      return std::nullopt;
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= l(i, k) * l(j, k);
      }
      l(i, j) = s / ljj;
    }
  }
  return l;
}

/// Inverse of an SPD matrix from its Cholesky factor, symmetrized.
inline Matrix cholesky_inverse(const Matrix & l)
{
  const std::size_t n = l.rows();
  Matrix inv(n, n);
  std::vector<double> y(n);
  for (std::size_t c = 0; c < n; ++c) {
    // L y = e_c
    for (std::size_t i = 0; i < n; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) {
        s -= l(i, k) * y[k];
      }
      y[i] = s / l(i, i);
    }
    // L^T x = y
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) {
        s -= l(k, ii) * inv(k, c);
      }
      inv(ii, c) = s / l(ii, ii);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double v = 0.5 * (inv(a, b) + inv(b, a));
      inv(a, b) = v;
      inv(b, a) = v;
    }
  }
  return inv;
}

struct JitterPolicy
{
  double first_escalation = 1e-9;  // used when the requested jitter is 0
  double factor = 10.0;
  double cap = 1e-3;
};

struct RegularizedInverse
{
  Matrix inverse;
  double jitter = 0.0;  // jitter actually applied
};

/// Inverse of (m + jitter * I) via Cholesky. On factorization failure the
/// jitter is escalated (0 -> first_escalation, then x factor) until `cap`.
inline RegularizedInverse regularized_inverse(
  const Matrix & m, double jitter, const JitterPolicy & policy = {})
{
  if (m.rows() != m.cols()) {
    throw DimensionError(
      "regularized_inverse: matrix is " + detail::shape_str(m.rows(), m.cols()) +
      ", must be square");
  }
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
    throw ParameterError("regularized_inverse: jitter must be >= 0, got " + std::to_string(jitter));
  }
  const std::size_t n = m.rows();
  double scale = 1.0;
  for (double v : m.data()) {
    if (!std::isfinite(v)) {
      throw NumericalError("regularized_inverse: non-finite matrix entry");
    }
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (std::abs(m(a, b) - m(b, a)) > 1e-9 * scale) {
        throw ParameterError("regularized_inverse: matrix is not symmetric within 1e-9");
      }
    }
  }

  const double first = jitter;
  double j = jitter;
  while (true) {
    Matrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) {
      shifted(i, i) += j;
    }
    if (auto l = cholesky(shifted)) {
      return {cholesky_inverse(*l), j};
    }
    const double next = (j == 0.0) ? policy.first_escalation : j * policy.factor;
    if (next > policy.cap * (1.0 + 1e-12)) {
      throw NumericalError(
        "regularized_inverse: Cholesky factorization failed for every jitter from " +
        std::to_string(first) + " up to " + std::to_string(j) + " (cap " +
        std::to_string(policy.cap) + ")");
    }
    j = next;
  }
}

// Dense products used by the autoencoder. Each output row depends only on
// the matching input row and is accumulated in a fixed order.

/// C = A * B
inline Matrix matmul(const Matrix & a, const Matrix & b)
{
  if (a.cols() != b.rows()) {
    throw DimensionError(
      "matmul: " + detail::shape_str(a.rows(), a.cols()) + " * " +
      detail::shape_str(b.rows(), b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        ci[j] += aik * bk[j];
      }
    }
  }
  return c;
}

/// C = A^T * B
inline Matrix matmul_at_b(const Matrix & a, const Matrix & b)
{
  if (a.rows() != b.rows()) {
    throw DimensionError(
      "matmul_at_b: " + detail::shape_str(a.rows(), a.cols()) + "^T * " +
      detail::shape_str(b.rows(), b.cols()));
  }
  Matrix c(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto ar = a.row(r);
    const auto br = b.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double v = ar[i];
      auto ci = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        ci[j] += v * br[j];
      }
    }
  }
  return c;
}

/// C = A * B^T
inline Matrix matmul_a_bt(const Matrix & a, const Matrix & b)
{
  if (a.cols() != b.cols()) {
    throw DimensionError(
      "matmul_a_bt: " + detail::shape_str(a.rows(), a.cols()) + " * " +
      detail::shape_str(b.rows(), b.cols()) + "^T");
  }
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        s += ai[k] * bj[k];
      }
      c(i, j) = s;
    }
  }
  return c;
}

}  // namespace oodkit

#endif  // OODKIT__LINALG_HPP_
