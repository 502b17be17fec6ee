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

// The power new-generalized Kavya–Manoharan exponential (PNGKME) law, its
// named submodels and the three competitor lifetime laws used for model
// comparison.
//
// With L = ln λ, g(x) = 1 − e^{−βx} and u(t) = 1 − e^{−t} the CDF is
//
//     F(x) = ( u(g·L) / u(L) )^α ,
//
// which is algebraically the usual λ^α/(λ−1)^α · (1 − λ^{−g})^α form but
// stays real and well conditioned for λ < 1, λ ≫ 1 and λ → 1 alike.

#ifndef PNGKME_DISTRIBUTION_HPP_
#define PNGKME_DISTRIBUTION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace pngkme {

/// Shape α, rate β and transform shape λ. All strictly positive and finite.
struct Params {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 1.0;

  /// Throws std::invalid_argument when a component is not positive/finite.
  void validate() const;
  double operator[](std::size_t i) const;
  double& operator[](std::size_t i);
  bool operator==(const Params&) const = default;
};

/// Below this |λ − 1| the CDF switches to the exact λ = 1 branch.
inline constexpr double kLambdaSwitch = 1e-6;

// ---------------------------------------------------------------------------
// PNGKME evaluation
// ---------------------------------------------------------------------------

/// The family transform applied to a baseline CDF value G ∈ [0, 1].
double pngkm_transform(double baseline_cdf, double alpha, double lambda);

double cdf(const Params& p, double x);
double pdf(const Params& p, double x);
double log_pdf(const Params& p, double x);
double survival(const Params& p, double x);
double log_survival(const Params& p, double x);

/// pdf/survival. NaN where the survival function underflows to zero.
double hazard(const Params& p, double x);

/// Inverse CDF; Q(0) = 0 and Q(1) = +∞. Throws std::domain_error for u
/// outside [0, 1].
double quantile(const Params& p, double u);
double median(const Params& p);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};
Quartiles quartiles(const Params& p);

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Deterministic uniform stream. Child streams are derived by hashing the
/// parent seed with a stream index, so concurrent work never shares state.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/splitmix64";

  explicit Rng(std::uint64_t seed);

  /// Uniform on the open interval (0, 1).
  double uniform();
  std::uint64_t next_u64() { return engine_(); }
  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; exposed for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);

/// n variates X = Q(U).
std::vector<double> sample(const Params& p, Rng& rng, std::size_t n);

// ---------------------------------------------------------------------------
// Model specifications
// ---------------------------------------------------------------------------

enum class Family {
  PNGKME,
  EE,
  DUSE,
  APTE,
  GKME,
  PGKME,
  PDUSE,
  PETE,
  PPETE,
  NGKME,
  PAPTE,
  Exponential,
  ExponentiatedWeibull,
  Weibull,
  Gamma,
};

/// All families in a stable order.
std::span<const Family> all_families();

/// A family plus which of (α, β, λ) are pinned. For the competitors the
/// three slots mean: EW (α, β, λ) as in αβλx^{λ−1}e^{−βx^λ}(1−e^{−βx^λ})^{α−1};
/// Weibull (shape, scale σ, unused); Gamma (shape, rate, unused). Unused
/// slots are fixed at 1.
struct ModelSpec {
  Family family = Family::PNGKME;
  std::array<std::optional<double>, 3> fixed{};

  /// Canonical specification of a family (fixed values per the submodel
  /// table).
  static ModelSpec of(Family f);

  /// Lower-case name, e.g. "pngkme", "pgkme", "ew".
  std::string name() const;
  /// Parses a name or alias ("pkme" → PGKME, "exp" → Exponential, ...).
  static std::optional<ModelSpec> parse(std::string_view name);

  bool is_pngkme_family() const;
  std::size_t free_count() const;
  std::vector<std::size_t> free_indices() const;

  /// Fills fixed slots into a full Params from the free values.
  Params complete(std::span<const double> free_values) const;
  std::vector<double> free_values(const Params& p) const;

  /// Throws std::invalid_argument if fixed values are invalid.
  void validate() const;
};

/// Names of the three parameter slots for a family, e.g. {"alpha", "beta",
/// "lambda"} or {"shape", "scale", ""} for Weibull.
std::array<std::string, 3> slot_names(Family f);

// Competitors.
double ew_pdf(const Params& p, double x);
double ew_log_pdf(const Params& p, double x);
double ew_cdf(const Params& p, double x);
double ew_quantile(const Params& p, double u);

/// Weibull with shape α and scale σ (Params::beta).
double weibull_pdf(double shape, double scale, double x);
double weibull_log_pdf(double shape, double scale, double x);
double weibull_cdf(double shape, double scale, double x);
double weibull_quantile(double shape, double scale, double u);

/// Gamma with shape α and rate β.
double gamma_pdf(double shape, double rate, double x);
double gamma_log_pdf(double shape, double rate, double x);
double gamma_cdf(double shape, double rate, double x);
double gamma_quantile(double shape, double rate, double u);

/// Rate-style β reported by the alternative Weibull form
/// α β^{−α} x^{α−1} e^{−x^α/β}, i.e. σ^α.
double weibull_rate_form_beta(double shape, double scale);

// Dispatch over any specification; `p` must already contain fixed slots.
double model_log_pdf(const ModelSpec& spec, const Params& p, double x);
double model_pdf(const ModelSpec& spec, const Params& p, double x);
double model_cdf(const ModelSpec& spec, const Params& p, double x);
double model_quantile(const ModelSpec& spec, const Params& p, double u);
std::vector<double> model_sample(const ModelSpec& spec, const Params& p,
                                 Rng& rng, std::size_t n);

}  // namespace pngkme

#endif  // PNGKME_DISTRIBUTION_HPP_
