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

#include "pngkme/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pngkme/numerics.hpp"

namespace pngkme {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool unit_lambda(double lambda) {
  return std::abs(lambda - 1.0) < kLambdaSwitch;
}

// ln |1 − e^{−t}|.
double log_abs_u(double t) {
  if (t == 0.0) return -kInf;
  const double a = std::abs(t);
  const double base =
      a > std::numbers::ln2 ? std::log1p(-std::exp(-a)) : std::log(-std::expm1(-a));
  return t < 0.0 ? a + base : base;
}

// ln of 1 − F(x) before the α power, i.e. ln(1 − u(gL)/u(L)).
double log_one_minus_ratio(const Params& p, double x) {
  const double bx = p.beta * x;
  if (unit_lambda(p.lambda)) {
    return -bx;
  }
  const double L = std::log(p.lambda);
  const double g = -std::expm1(-bx);
  return -g * L + log_abs_u(std::exp(-bx) * L) - log_abs_u(L);
}

void require_unit_interval(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error(std::string(what) +
                            ": probability must lie in [0, 1]");
  }
}

}  // namespace

void Params::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("Params: ") + name +
                                  " must be positive and finite");
    }
  };
  check(alpha, "alpha");
  check(beta, "beta");
  check(lambda, "lambda");
}

double Params::operator[](std::size_t i) const {
  switch (i) {
    case 0: return alpha;
    case 1: return beta;
    case 2: return lambda;
    default: throw std::out_of_range("Params index");
  }
}

double& Params::operator[](std::size_t i) {
  switch (i) {
    case 0: return alpha;
    case 1: return beta;
    case 2: return lambda;
    default: throw std::out_of_range("Params index");
  }
}

// ---------------------------------------------------------------------------

double pngkm_transform(double baseline_cdf, double alpha, double lambda) {
  const double G = std::clamp(baseline_cdf, 0.0, 1.0);
  if (G == 0.0) return 0.0;
  if (unit_lambda(lambda)) return std::pow(G, alpha);
  const double L = std::log(lambda);
  return std::exp(alpha * (log_abs_u(G * L) - log_abs_u(L)));
}

double cdf(const Params& p, double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  return pngkm_transform(-std::expm1(-p.beta * x), p.alpha, p.lambda);
}

double log_pdf(const Params& p, double x) {
  if (x < 0.0 || std::isinf(x)) return -kInf;
  const double bx = p.beta * x;
  const double head = std::log(p.alpha) + std::log(p.beta) - bx;
  if (unit_lambda(p.lambda)) {
    if (p.alpha == 1.0) return head;
    return head + (p.alpha - 1.0) * log_abs_u(bx);
  }
  const double L = std::log(p.lambda);
  const double g = -std::expm1(-bx);
  const double log_u_L = log_abs_u(L);
  double out = head + std::log(std::abs(L)) - log_u_L - g * L;
  if (p.alpha != 1.0) {
    out += (p.alpha - 1.0) * (log_abs_u(g * L) - log_u_L);
  }
  return out;
}

double pdf(const Params& p, double x) { return std::exp(log_pdf(p, x)); }

double log_survival(const Params& p, double x) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return -kInf;
  const double F = cdf(p, x);
  if (F < 0.5) return std::log1p(-F);
  const double log_s = log_one_minus_ratio(p, x);
  const double s = std::exp(log_s);
  if (s >= 1.0) return -kInf;
  if (log_s < -30.0) {
    // 1 − (1 − s)^α = αs(1 + (1 − α)s/2 + ...), s < 1e-13.
    return std::log(p.alpha) + log_s + std::log1p(0.5 * (1.0 - p.alpha) * s);
  }
  return std::log(-std::expm1(p.alpha * std::log1p(-s)));
}

double survival(const Params& p, double x) {
  return std::exp(log_survival(p, x));
}

double hazard(const Params& p, double x) {
  const double ls = log_survival(p, x);
  if (!std::isfinite(ls)) return kNaN;
  return std::exp(log_pdf(p, x) - ls);
}

double quantile(const Params& p, double u) {
  require_unit_interval(u, "quantile");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kInf;
  const double r = std::pow(u, 1.0 / p.alpha);
  double g = r;
  if (!unit_lambda(p.lambda)) {
    const double L = std::log(p.lambda);
    const double uL = -std::expm1(-L);
    g = -std::log1p(-r * uL) / L;
  }
  if (g >= 1.0) return kInf;
  return -std::log1p(-g) / p.beta;
}

double median(const Params& p) { return quantile(p, 0.5); }

Quartiles quartiles(const Params& p) {
  return Quartiles{quantile(p, 0.25), quantile(p, 0.5), quantile(p, 0.75)};
}

// ---------------------------------------------------------------------------

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(mix_seed(seed_ ^ mix_seed(stream ^ 0xd1b54a32d192ed03ULL)));
}

std::vector<double> sample(const Params& p, Rng& rng, std::size_t n) {
  p.validate();
  std::vector<double> out(n);
  for (double& x : out) x = quantile(p, rng.uniform());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr Family kFamilies[] = {
    Family::PNGKME, Family::EE,          Family::DUSE,
    Family::APTE,   Family::GKME,        Family::PGKME,
    Family::PDUSE,  Family::PETE,        Family::PPETE,
    Family::NGKME,  Family::PAPTE,       Family::Exponential,
    Family::ExponentiatedWeibull,        Family::Weibull,
    Family::Gamma,
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::span<const Family> all_families() { return kFamilies; }

ModelSpec ModelSpec::of(Family f) {
  using std::numbers::e;
  using std::numbers::pi;
  ModelSpec s{f, {}};
  auto& [a, b, l] = s.fixed;
  switch (f) {
    case Family::PNGKME:
    case Family::PAPTE:
    case Family::ExponentiatedWeibull:
      break;
    case Family::EE: l = 1.0; break;
    case Family::DUSE: a = 1.0; l = 1.0 / e; break;
    case Family::APTE: a = 1.0; break;
    case Family::GKME: a = 1.0; l = e; break;
    case Family::PGKME: l = e; break;
    case Family::PDUSE: l = 1.0 / e; break;
    case Family::PETE: a = 1.0; l = 1.0 / pi; break;
    case Family::PPETE: l = 1.0 / pi; break;
    case Family::NGKME: a = 1.0; break;
    case Family::Exponential: a = 1.0; l = 1.0; break;
    case Family::Weibull:
    case Family::Gamma: l = 1.0; break;
  }
  (void)b;
  return s;
}

std::string ModelSpec::name() const {
  switch (family) {
    case Family::PNGKME: return "pngkme";
    case Family::EE: return "ee";
    case Family::DUSE: return "duse";
    case Family::APTE: return "apte";
    case Family::GKME: return "gkme";
    case Family::PGKME: return "pgkme";
    case Family::PDUSE: return "pduse";
    case Family::PETE: return "pete";
    case Family::PPETE: return "ppete";
    case Family::NGKME: return "ngkme";
    case Family::PAPTE: return "papte";
    case Family::Exponential: return "exponential";
    case Family::ExponentiatedWeibull: return "ew";
    case Family::Weibull: return "weibull";
    case Family::Gamma: return "gamma";
  }
  return "unknown";
}

std::optional<ModelSpec> ModelSpec::parse(std::string_view name) {
  const std::string key = lower(name);
  for (Family f : kFamilies) {
    ModelSpec s = of(f);
    if (s.name() == key) return s;
  }
  if (key == "pkme") return of(Family::PGKME);
  if (key == "kme") return of(Family::GKME);
  if (key == "exp") return of(Family::Exponential);
  if (key == "exponentiated-weibull" || key == "exponentiated_weibull") {
    return of(Family::ExponentiatedWeibull);
  }
  return std::nullopt;
}

bool ModelSpec::is_pngkme_family() const {
  return family != Family::ExponentiatedWeibull && family != Family::Weibull &&
         family != Family::Gamma;
}

std::size_t ModelSpec::free_count() const {
  return static_cast<std::size_t>(
      std::count_if(fixed.begin(), fixed.end(),
                    [](const std::optional<double>& v) { return !v; }));
}

std::vector<std::size_t> ModelSpec::free_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!fixed[i]) out.push_back(i);
  }
  return out;
}

Params ModelSpec::complete(std::span<const double> free_values) const {
  if (free_values.size() != free_count()) {
    throw std::invalid_argument("ModelSpec::complete: expected " +
                                std::to_string(free_count()) +
                                " free values");
  }
  Params p;
  std::size_t k = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = fixed[i] ? *fixed[i] : free_values[k++];
  }
  return p;
}

std::vector<double> ModelSpec::free_values(const Params& p) const {
  std::vector<double> out;
  for (std::size_t i : free_indices()) out.push_back(p[i]);
  return out;
}

void ModelSpec::validate() const {
  for (const auto& v : fixed) {
    if (v && (!(*v > 0.0) || !std::isfinite(*v))) {
      throw std::invalid_argument("ModelSpec: fixed values must be positive");
    }
  }
  const std::size_t k = free_count();
  if (k < 1 || k > 3) {
    throw std::invalid_argument("ModelSpec: between 1 and 3 free parameters");
  }
}

std::array<std::string, 3> slot_names(Family f) {
  switch (f) {
    case Family::Weibull: return {"shape", "scale", ""};
    case Family::Gamma: return {"shape", "rate", ""};
    default: return {"alpha", "beta", "lambda"};
  }
}

// ---------------------------------------------------------------------------
// Competitors

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive");
  }
}

}  // namespace

double ew_log_pdf(const Params& p, double x) {
  if (!(x > 0.0) || std::isinf(x)) return -kInf;
  const double z = p.beta * std::pow(x, p.lambda);
  double out = std::log(p.alpha) + std::log(p.beta) + std::log(p.lambda) +
               (p.lambda - 1.0) * std::log(x) - z;
  if (p.alpha != 1.0) out += (p.alpha - 1.0) * log_abs_u(z);
  return out;
}

double ew_pdf(const Params& p, double x) {
  p.validate();
  return std::exp(ew_log_pdf(p, x));
}

double ew_cdf(const Params& p, double x) {
  p.validate();
  if (!(x > 0.0)) return 0.0;
  const double z = p.beta * std::pow(x, p.lambda);
  return std::exp(p.alpha * log_abs_u(z));
}

double ew_quantile(const Params& p, double u) {
  p.validate();
  require_unit_interval(u, "ew_quantile");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kInf;
  const double r = std::pow(u, 1.0 / p.alpha);
  return std::pow(-std::log1p(-r) / p.beta, 1.0 / p.lambda);
}

double weibull_log_pdf(double shape, double scale, double x) {
  if (!(x > 0.0) || std::isinf(x)) return -kInf;
  const double z = x / scale;
  return std::log(shape) - std::log(scale) + (shape - 1.0) * std::log(z) -
         std::pow(z, shape);
}

double weibull_pdf(double shape, double scale, double x) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  return std::exp(weibull_log_pdf(shape, scale, x));
}

double weibull_cdf(double shape, double scale, double x) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  if (!(x > 0.0)) return 0.0;
  return -std::expm1(-std::pow(x / scale, shape));
}

double weibull_quantile(double shape, double scale, double u) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  require_unit_interval(u, "weibull_quantile");
  if (u == 1.0) return kInf;
  return scale * std::pow(-std::log1p(-u), 1.0 / shape);
}

double weibull_rate_form_beta(double shape, double scale) {
  return std::pow(scale, shape);
}

double gamma_log_pdf(double shape, double rate, double x) {
  if (x < 0.0 || std::isinf(x)) return -kInf;
  if (x == 0.0) {
    if (shape == 1.0) return std::log(rate);
    return shape < 1.0 ? kInf : -kInf;
  }
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(x) - rate * x;
}

double gamma_pdf(double shape, double rate, double x) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  return std::exp(gamma_log_pdf(shape, rate, x));
}

double gamma_cdf(double shape, double rate, double x) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  if (!(x > 0.0)) return 0.0;
  return numerics::regularized_gamma_p(shape, rate * x);
}

double gamma_quantile(double shape, double rate, double u) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
  require_unit_interval(u, "gamma_quantile");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return kInf;
  // Bracket in the standardized variable, then bisect on the log scale.
  double lo = 0.0;
  double hi = std::max(1.0, shape);
  while (numerics::regularized_gamma_p(shape, hi) < u) {
    lo = hi;
    hi *= 2.0;
  }
  if (lo == 0.0) lo = hi * 1e-300;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (numerics::regularized_gamma_p(shape, mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi) / rate;
}

// ---------------------------------------------------------------------------

double model_log_pdf(const ModelSpec& spec, const Params& p, double x) {
  switch (spec.family) {
    case Family::ExponentiatedWeibull: return ew_log_pdf(p, x);
    case Family::Weibull: return weibull_log_pdf(p.alpha, p.beta, x);
    case Family::Gamma: return gamma_log_pdf(p.alpha, p.beta, x);
    default: return log_pdf(p, x);
  }
}

double model_pdf(const ModelSpec& spec, const Params& p, double x) {
  return std::exp(model_log_pdf(spec, p, x));
}

double model_cdf(const ModelSpec& spec, const Params& p, double x) {
  switch (spec.family) {
    case Family::ExponentiatedWeibull: return ew_cdf(p, x);
    case Family::Weibull: return weibull_cdf(p.alpha, p.beta, x);
    case Family::Gamma: return gamma_cdf(p.alpha, p.beta, x);
    default: return cdf(p, x);
  }
}

double model_quantile(const ModelSpec& spec, const Params& p, double u) {
  switch (spec.family) {
    case Family::ExponentiatedWeibull: return ew_quantile(p, u);
    case Family::Weibull: return weibull_quantile(p.alpha, p.beta, u);
    case Family::Gamma: return gamma_quantile(p.alpha, p.beta, u);
    default: return quantile(p, u);
  }
}

std::vector<double> model_sample(const ModelSpec& spec, const Params& p,
                                 Rng& rng, std::size_t n) {
  p.validate();
  std::vector<double> out(n);
  for (double& x : out) x = model_quantile(spec, p, rng.uniform());
  return out;
}

}  // namespace pngkme
