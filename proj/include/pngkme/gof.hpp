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


// Goodness-of-fit statistics and model comparison.

#ifndef PNGKME_GOF_HPP_
#define PNGKME_GOF_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pngkme/inference.hpp"

namespace pngkme {

using CdfFn = std::function<double(double)>;

/// Dₙ = maxᵢ max(i/n − F(x₍ᵢ₎), F(x₍ᵢ₎) − (i−1)/n).
double ks_statistic(const CdfFn& cdf, std::span<const double> values);
/// W² = 1/(12n) + Σ(F(x₍ᵢ₎) − (2i−1)/(2n))².
double cvm_statistic(const CdfFn& cdf, std::span<const double> values);
/// A² = −n − (1/n)Σ(2i−1)(ln F(x₍ᵢ₎) + ln(1 − F(x₍ₙ₊₁₋ᵢ₎))), F clamped to
/// [1e-12, 1 − 1e-12].
double ad_statistic(const CdfFn& cdf, std::span<const double> values);

/// P(K > x) for the Kolmogorov limiting law.
double kolmogorov_sf(double x);
/// Upper tail of the limiting Cramér–von Mises law.
double cvm_sf(double w2);
/// Upper tail of the limiting Anderson–Darling law.
double ad_sf(double a2);

enum class PValueMethod { asymptotic, bootstrap };

struct GofStats {
  double ks = 0.0;
  double cvm = 0.0;
  double ad = 0.0;
};

struct GofReport {
  double ks = 0.0, ks_p = 1.0;
  double cvm = 0.0, cvm_p = 1.0;
  double ad = 0.0, ad_p = 1.0;
  PValueMethod method = PValueMethod::asymptotic;
  int bootstrap_replicates = 0;
  int bootstrap_failures = 0;  ///< refits that did not converge (excluded)
};

GofStats gof_statistics(const CdfFn& cdf, std::span<const double> values);

/// Asymptotic p-values, parameters treated as known. K-S uses the
/// (√n + 0.12 + 0.11/√n)·Dₙ refinement.
GofReport gof_pvalues(const GofStats& stats, std::size_t n);

/// Parametric bootstrap: B samples from the fitted model, each refitted,
/// p = (1 + #{T* ≥ T})/(1 + B_ok).
GofReport gof_bootstrap(const FitResult& fitted, const Sample& s, int replicates,
                        std::uint64_t seed, const FitOptions& options = {});

struct ComparisonRow {
  std::string model;
  FitResult fit;
  GofReport gof;
};

struct CompareOptions {
  FitOptions fit;
  PValueMethod method = PValueMethod::asymptotic;
  int bootstrap_replicates = 200;
};

/// Fits every spec, scores its fit, and sorts by AIC (non-converged rows
/// last, each group by AIC).
std::vector<ComparisonRow> compare_models(const Sample& s,
                                          std::span<const ModelSpec> specs,
                                          const CompareOptions& options = {});

/// Every family in all_families() order.
std::vector<ModelSpec> default_battery();

}  // namespace pngkme

#endif  // PNGKME_GOF_HPP_
