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

// Distributional properties. Most quantities have two evaluation paths:
//
//   * series      the infinite-series closed forms, built on the expansion of
//                 the density as a signed mixture of exponentials
//                 f(x) = Σ_j Σ_k a_{jk} · kβ e^{−kβx};
//   * quadrature  direct numerical integration of the defining integral.
//
// Quadrature is the default. A series request that cannot be honoured
// (λ = 1, an unsupported case, or a series that does not converge) falls
// back to quadrature and says so in the result.

#ifndef PNGKME_PROPERTIES_HPP_
#define PNGKME_PROPERTIES_HPP_

#include <complex>
#include <optional>
#include <string>

#include "pngkme/distribution.hpp"
#include "pngkme/numerics.hpp"

namespace pngkme {

enum class Method { series, quadrature };

std::string to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct PropertyResult {
  double value = 0.0;
  Method method = Method::quadrature;  ///< path that produced `value`
  bool converged = false;
  bool fell_back = false;  ///< a series request was answered by quadrature
  double error_estimate = 0.0;
  std::string note;  ///< reason for a fallback, empty otherwise
};

struct ComplexResult {
  std::complex<double> value;
  Method method = Method::quadrature;
  bool converged = false;
  bool fell_back = false;
  std::string note;
};

struct MomentRequest {
  Params p;
  int r = 1;
  Method method = Method::quadrature;
};

/// E(X^r), r ≥ 1.
PropertyResult raw_moment(const MomentRequest& req,
                          const numerics::SeriesControl& ctrl = {});

/// E(e^{tX}); requires t < β.
PropertyResult mgf(const Params& p, double t,
                   Method method = Method::quadrature,
                   const numerics::SeriesControl& ctrl = {});
/// E(e^{itX}).
ComplexResult cf(const Params& p, double t, Method method = Method::quadrature,
                 const numerics::SeriesControl& ctrl = {});
/// Principal-branch ln cf(t).
ComplexResult cgf(const Params& p, double t,
                  Method method = Method::quadrature,
                  const numerics::SeriesControl& ctrl = {});

/// E(X − t | X > t) from ∫ₜ^∞ S(x)dx / S(t). Not converged (value NaN)
/// once S(t) ≤ 1e-300.
PropertyResult mean_residual_life(const Params& p, double t);

PropertyResult mean_deviation_about_mean(
    const Params& p, Method method = Method::quadrature,
    const numerics::SeriesControl& ctrl = {});
PropertyResult mean_deviation_about_median(
    const Params& p, Method method = Method::quadrature,
    const numerics::SeriesControl& ctrl = {});

/// Bonferroni curve B(u) = L(u)/u for u in (0, 1].
PropertyResult bonferroni(const Params& p, double u,
                          Method method = Method::quadrature,
                          const numerics::SeriesControl& ctrl = {});
/// Lorenz curve L(u) = (1/μ)∫₀^{Q(u)} x f(x) dx for u in [0, 1].
PropertyResult lorenz(const Params& p, double u,
                      Method method = Method::quadrature,
                      const numerics::SeriesControl& ctrl = {});

/// Rényi entropy of order s > 0, s ≠ 1. −∞ when ∫f^s diverges
/// (s > 1 and s(1 − α) ≥ 1).
PropertyResult renyi_entropy(const Params& p, double s,
                             Method method = Method::quadrature,
                             const numerics::SeriesControl& ctrl = {});
/// −∫ f ln f, by quadrature.
PropertyResult shannon_entropy(const Params& p);

// ---------------------------------------------------------------------------
// Stress–strength reliability R = P(X₂ < X₁)
// ---------------------------------------------------------------------------

struct ReliabilityPair {
  Params strength;  ///< X₁
  Params stress;    ///< X₂
};

enum class ReliabilityCase {
  both_transformed,  ///< λ₁ ≠ 1, λ₂ ≠ 1, shared α and β
  strength_plain,    ///< λ₁ = 1, λ₂ ≠ 1, shared α and β
  stress_plain,      ///< λ₁ ≠ 1, λ₂ = 1, shared α and β
  both_plain,        ///< λ₁ = λ₂ = 1, any α₁, α₂, β₁, β₂
};

/// Case of a pair, or nullopt when it does not fit any of the series forms
/// (e.g. different α with λ ≠ 1).
std::optional<ReliabilityCase> reliability_case(const ReliabilityPair& pair);
int case_number(ReliabilityCase c);

PropertyResult reliability(const ReliabilityPair& pair,
                           Method method = Method::quadrature,
                           const numerics::SeriesControl& ctrl = {});

/// The incomplete-gamma expression printed for λ₁ = 1, which integrates F₂
/// without its α exponent. Kept for comparison only; requires λ₂ > 1.
double reliability_strength_plain_as_printed(const ReliabilityPair& pair);

// ---------------------------------------------------------------------------
// Order statistics
// ---------------------------------------------------------------------------

enum class OrderForm {
  alternating,  ///< Σ_j Σ_l (−1)^l C(n,j) C(n−j,l) F^{j+l}
  binomial,     ///< Σ_{j≥k} C(n,j) F^j (1−F)^{n−j}
};

/// CDF and PDF of the k-th order statistic of n, 1 ≤ k ≤ n.
double order_stat_cdf(const Params& p, int n, int k, double x,
                      OrderForm form = OrderForm::binomial);
double order_stat_pdf(const Params& p, int n, int k, double x,
                      OrderForm form = OrderForm::binomial);

}  // namespace pngkme

#endif  // PNGKME_PROPERTIES_HPP_
