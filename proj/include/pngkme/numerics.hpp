// Copyright 2026 The pngkme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Numerical building blocks shared by the rest of the library: special
// functions, adaptive quadrature, tail-aware series summation, finite
// differences and a tiny symmetric matrix type.

#ifndef PNGKME_NUMERICS_HPP_
#define PNGKME_NUMERICS_HPP_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace pngkme::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln Γ(a) for a > 0. Throws std::domain_error otherwise.
double log_gamma(double a);

/// Γ(a, x) = ∫ₓ^∞ t^{a−1} e^{−t} dt for a > 0, x ≥ 0.
double upper_incomplete_gamma(double a, double x);

/// γ(a, x) = Γ(a) − Γ(a, x).
double lower_incomplete_gamma(double a, double x);

/// Regularized P(a, x) = γ(a, x) / Γ(a) and Q(a, x) = 1 − P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Generalized binomial coefficient C(delta, j) for real delta, kept in
/// log/sign form so large j never overflows.
struct SignedLog {
  double log_abs = -kInf;  ///< ln |value|; −∞ encodes an exact zero
  int sign = 0;            ///< −1, 0 or +1

  double value() const;
};

SignedLog binomial(double delta, long j);

/// Standard normal CDF and its inverse. The inverse is a rational
/// approximation polished by one Halley step (|error| < 1e-13).
double normal_cdf(double z);
double normal_quantile(double p);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adaptive Gauss–Kronrod (7/15) bisection. An infinite upper limit is mapped
/// with x = lo + scale·t/(1−t). `hi` may be kInf.
QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, double rel_tol = 1e-10,
                           double scale = 1.0, int max_evaluations = 400000);

// ---------------------------------------------------------------------------
// Series summation
// ---------------------------------------------------------------------------

struct SeriesControl {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  /// Cap on the number of terms taken after the largest-magnitude term of
  /// each index.
  long max_terms_per_index = 500;
  /// At the cap, extrapolate algebraically decaying tails (Richardson on
  /// partial sums) instead of returning the raw truncated sum.
  bool extrapolate = true;
  /// An extrapolated sum counts as converged when its error estimate is
  /// within this fraction of the value.
  double extrapolation_rel_tol = 1e-6;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct SeriesResult {
  double value = 0.0;
  /// Estimated magnitude of the neglected tail (or of the extrapolation
  /// error when `extrapolated`).
  double error_estimate = 0.0;
  long terms = 0;  ///< total term evaluations, across both indices
  bool converged = false;
  bool extrapolated = false;
};

/// Σ_{k ≥ k_start} term(k) with a tail test. Stops once the estimated tail
/// falls below max(rel_tol·|sum|, abs_tol).
SeriesResult sum_series(const std::function<double(long)>& term, long k_start,
                        const SeriesControl& ctrl = {});

/// Σ_{j ≥ j_start} Σ_{k ≥ k_start} term(j, k), inner index summed first.
SeriesResult sum_double_series(const std::function<double(long, long)>& term,
                               const SeriesControl& ctrl = {},
                               long j_start = 0, long k_start = 1);

// ---------------------------------------------------------------------------
// Small dense symmetric matrices
// ---------------------------------------------------------------------------

/// Row-major square matrix. Only ever 1×1 to 3×3 in this library.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return a_[r * n_ + c];
  }

  Matrix operator*(const Matrix& other) const;
  Matrix operator-() const;
  double max_abs() const;
  bool is_symmetric(double tol) const;
  std::vector<double> diag() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct InverseResult {
  Matrix inverse;
  bool ok = false;  ///< false when singular or not positive definite
};

/// Inverse of a symmetric positive-definite matrix (n ≤ 3) via Cholesky on
/// the diagonally rescaled matrix. Fails when a pivot is ≤ 1e-12 of the
/// scaled norm.
InverseResult invert_symmetric(const Matrix& m);
inline InverseResult invert_3x3_symmetric(const Matrix& m) {
  return invert_symmetric(m);
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

using ScalarField = std::function<double(std::span<const double>)>;

/// Central differences with step h_rel·max(|xᵢ|, 1).
std::vector<double> fd_gradient(const ScalarField& f, std::span<const double> x,
                                double h_rel = 1e-6);
Matrix fd_hessian(const ScalarField& f, std::span<const double> x,
                  double h_rel = 1e-4);

}  // namespace pngkme::numerics

#endif  // PNGKME_NUMERICS_HPP_
