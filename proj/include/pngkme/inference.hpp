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

// Maximum-likelihood estimation.
//
// Derivatives for the PNGKME family are analytic and written in terms of
// L = ln λ, which keeps them finite and continuous through λ = 1. The
// competitor laws (EW, Weibull, Gamma) use central differences.

#ifndef PNGKME_INFERENCE_HPP_
#define PNGKME_INFERENCE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pngkme/distribution.hpp"
#include "pngkme/numerics.hpp"

namespace pngkme {

/// Positive, finite observations.
class Sample {
 public:
  Sample() = default;
  /// Throws std::invalid_argument on an empty list or a value that is not
  /// positive and finite.
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t n() const { return values_.size(); }
  double sum() const;
  double mean() const;

 private:
  std::vector<double> values_;
};

/// Σ ln pdf(xᵢ) under `spec`. −∞ when a density underflows; `underflow`
/// (if given) is set accordingly.
double log_likelihood(const ModelSpec& spec, const Params& p, const Sample& s,
                      bool* underflow = nullptr);

/// The expanded closed form n ln α + n ln β + nα ln λ + n ln ln λ − … ;
/// requires λ > 1.
double pngkme_log_likelihood_closed_form(const Params& p, const Sample& s);

/// ∂lnL/∂(α, β, λ). Continuous across λ = 1, where it equals the limit of
/// the λ ≠ 1 expression (its α and β parts are the EE score).
std::array<double, 3> score(const Params& p, const Sample& s);

/// −∂²lnL over (α, β, λ).
numerics::Matrix observed_information(const Params& p, const Sample& s);

/// The commonly quoted closed-form second derivatives, negated, for
/// comparison with observed_information. Requires λ > 1. Entries (α,λ),
/// (β,λ) and (λ,λ) do not match direct differentiation.
numerics::Matrix observed_information_as_printed(const Params& p,
                                                 const Sample& s);

/// Score and information restricted to the free slots of `spec`, in
/// free_indices() order. Analytic for the PNGKME family.
std::vector<double> model_score(const ModelSpec& spec, const Params& p,
                                const Sample& s);
numerics::Matrix model_observed_information(const ModelSpec& spec,
                                            const Params& p, const Sample& s);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// (θ/K, θK) with K = exp(z_{ω/2}·√ln(1 + var/θ²)).
Interval log_interval(double estimate, double variance, double omega);

struct FitOptions {
  double omega = 0.05;
  int restarts = 8;  ///< starts per fit, heuristic ones first
  std::uint64_t seed = 1;
  int max_iterations = 500;
  double gradient_tol_per_n = 1e-6;
  double step_tol = 1e-10;
  bool nest_restarts = true;  ///< also start from every submodel optimum
  unsigned threads = 0;       ///< 0 = hardware concurrency
  std::vector<Params> extra_starts;
};

struct OptimizerTrace {
  int iterations = 0;  ///< of the winning start
  double gradient_norm = 0.0;
  int restarts_used = 0;
  int best_start = -1;
  std::string message;
};

struct FitResult {
  ModelSpec spec;
  Params estimates;  ///< fixed slots echoed
  double loglik = 0.0;
  double neg2loglik = 0.0;
  double aic = 0.0;
  std::vector<std::size_t> free_indices;
  numerics::Matrix information;
  numerics::Matrix vcov;
  bool vcov_ok = false;
  std::vector<Interval> ci;  ///< per free slot; empty when !vcov_ok
  bool converged = false;
  OptimizerTrace trace;
};

/// Multi-start damped Newton in log-parameter coordinates.
FitResult fit(const ModelSpec& spec, const Sample& s,
              const FitOptions& options = {});

/// Intervals at level 1 − ω, or nullopt when the covariance is unavailable.
std::optional<std::vector<Interval>> confidence_intervals(const FitResult& f,
                                                          double omega);

}  // namespace pngkme

#endif  // PNGKME_INFERENCE_HPP_
