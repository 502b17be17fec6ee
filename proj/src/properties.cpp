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

#include "pngkme/properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace pngkme {

using numerics::SeriesControl;
using numerics::SeriesResult;
using numerics::SignedLog;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool unit_lambda(double lambda) {
  return std::abs(lambda - 1.0) < kLambdaSwitch;
}

// ln |1 − e^{−t}|.
double log_abs_u(double t) {
  const double a = std::abs(t);
  const double base = a > std::numbers::ln2 ? std::log1p(-std::exp(-a))
                                            : std::log(-std::expm1(-a));
  return t < 0.0 ? a + base : base;
}

// C(delta, i) for i = 0, 1, 2, ..., extended on demand.
class BinomialRow {
 public:
  explicit BinomialRow(double delta) : delta_(delta), row_{{0.0, 1}} {}

  const SignedLog& operator[](long i) {
    while (static_cast<long>(row_.size()) <= i) {
      const SignedLog& last = row_.back();
      const double n = static_cast<double>(row_.size());
      const double factor = (delta_ - n + 1.0) / n;
      if (last.sign == 0 || factor == 0.0) {
        row_.push_back(SignedLog{});
      } else {
        row_.push_back(SignedLog{last.log_abs + std::log(std::abs(factor)),
                                 factor < 0.0 ? -last.sign : last.sign});
      }
    }
    return row_[static_cast<std::size_t>(i)];
  }

 private:
  double delta_;
  std::vector<SignedLog> row_;
};

// Exponent of the j-th exponential in |u(gL)|^m = Σ_j (−1)^j C(m, j) e^{g·e_j}.
double expansion_shift(double L, double m, long j) {
  const double jd = static_cast<double>(j);
  return L > 0.0 ? -jd * L : (m - jd) * (-L);
}

struct Tally {
  bool converged = true;
  bool hard_failure = false;  ///< a row neither converged nor extrapolated
  bool extrapolated = false;
  double error = 0.0;
  long terms = 0;

  void absorb(const SeriesResult& r) {
    converged = converged && r.converged;
    hard_failure = hard_failure || (!r.converged && !r.extrapolated);
    extrapolated = extrapolated || r.extrapolated;
    if (std::isfinite(r.error_estimate)) {
      error += r.error_estimate;
    } else {
      error = kInf;
    }
    terms += r.terms;
  }
};

// Σ_j Σ_{k ≥ k_start} term(j, k), skipping rows whose weight is exactly
// zero (integer binomial upper index).
SeriesResult nested_sum(const std::function<bool(long)>& row_nonzero,
                        const std::function<double(long, long)>& term,
                        long k_start, const SeriesControl& ctrl) {
  Tally inner;
  auto outer = numerics::sum_series(
      [&](long j) {
        if (!row_nonzero(j)) return 0.0;
        auto r = numerics::sum_series([&](long k) { return term(j, k); },
                                      k_start, ctrl);
        inner.absorb(r);
        return r.value;
      },
      0, ctrl);
  SeriesResult out = outer;
  // Rows that were extrapolated are judged by their combined error against
  // the total rather than one by one.
  const bool rows_ok =
      inner.converged ||
      (!inner.hard_failure &&
       inner.error <= ctrl.extrapolation_rel_tol * std::abs(outer.value));
  out.converged = outer.converged && rows_ok;
  out.extrapolated = outer.extrapolated || inner.extrapolated;
  out.error_estimate = outer.error_estimate + inner.error;
  out.terms = outer.terms + inner.terms;
  return out;
}

// E[h(X)] = Σ_j Σ_k a_{jk} · H(kβ), where H(θ) = E[h(Y)] for Y ~ Exp(θ).
SeriesResult mixture_series(const Params& p,
                            const std::function<double(double)>& H,
                            const SeriesControl& ctrl) {
  const double L = std::log(p.lambda);
  const double log_lead =
      std::log(p.alpha) + std::log(std::abs(L)) - p.alpha * log_abs_u(L);
  BinomialRow binom(p.alpha - 1.0);
  return nested_sum(
      [&](long j) { return binom[j].sign != 0; },
      [&](long j, long k) {
        const SignedLog& b = binom[j];
        const double c = expansion_shift(L, p.alpha - 1.0, j) - L;
        const long m = k - 1;
        double log_mag = log_lead + b.log_abs + c - std::lgamma(double(k) + 1.0);
        int sign = b.sign * (j % 2 ? -1 : 1);
        if (m > 0) {
          if (c == 0.0) return 0.0;
          log_mag += double(m) * std::log(std::abs(c));
          if (c > 0.0 && m % 2) sign = -sign;
        }
        return sign * std::exp(log_mag) * H(double(k) * p.beta);
      },
      1, ctrl);
}

PropertyResult from_series(const SeriesResult& r) {
  PropertyResult out;
  out.value = r.value;
  out.method = Method::series;
  out.converged = r.converged;
  out.error_estimate = r.error_estimate;
  return out;
}

PropertyResult from_quadrature(const numerics::QuadratureResult& q) {
  PropertyResult out;
  out.value = q.value;
  out.method = Method::quadrature;
  out.converged = q.converged;
  out.error_estimate = q.abs_error_estimate;
  return out;
}

// Runs `series` when requested and possible, otherwise (or when it fails to
// converge) `quad`.
PropertyResult dispatch(Method method, bool series_supported,
                        const char* unsupported_reason,
                        const std::function<PropertyResult()>& series,
                        const std::function<PropertyResult()>& quad) {
  if (method == Method::quadrature) return quad();
  if (!series_supported) {
    PropertyResult out = quad();
    out.fell_back = true;
    out.note = unsupported_reason;
    return out;
  }
  PropertyResult s = series();
  if (s.converged && std::isfinite(s.value)) return s;
  PropertyResult out = quad();
  out.fell_back = true;
  out.note = "series did not converge; quadrature used";
  return out;
}

constexpr const char* kUnitLambdaNote =
    "series form requires lambda != 1; quadrature used";

double tail_scale(const Params& p) { return 1.0 / p.beta; }

numerics::QuadratureResult integrate_pdf_weighted(
    const Params& p, const std::function<double(double)>& w, double lo,
    double hi, double scale) {
  return numerics::integrate(
      [&](double x) {
        const double f = pdf(p, x);
        return f == 0.0 ? 0.0 : w(x) * f;
      },
      lo, hi, 1e-11, scale);
}

// ∫_q^∞ x f(x) dx.
SeriesResult partial_expectation_series(const Params& p, double q,
                                        const SeriesControl& ctrl) {
  return mixture_series(
      p,
      [q](double theta) { return (theta * q + 1.0) * std::exp(-theta * q) / theta; },
      ctrl);
}

void require_params(const Params& p) { p.validate(); }

PropertyResult not_converged() {
  PropertyResult out;
  out.value = kNaN;
  out.method = Method::series;
  return out;
}

}  // namespace

std::string to_string(Method m) {
  return m == Method::series ? "series" : "quadrature";
}

std::optional<Method> parse_method(std::string_view s) {
  if (s == "series") return Method::series;
  if (s == "quadrature") return Method::quadrature;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Moments and generating functions

PropertyResult raw_moment(const MomentRequest& req, const SeriesControl& ctrl) {
  const Params& p = req.p;
  require_params(p);
  if (req.r < 1) throw std::invalid_argument("raw_moment: r must be >= 1");
  const int r = req.r;
  const double log_fact = std::lgamma(double(r) + 1.0);
  return dispatch(
      req.method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        return from_series(mixture_series(
            p,
            [&](double theta) {
              return std::exp(log_fact - double(r) * std::log(theta));
            },
            ctrl));
      },
      [&] {
        return from_quadrature(integrate_pdf_weighted(
            p, [r](double x) { return std::pow(x, r); }, 0.0, kInf,
            std::max(1, r) * tail_scale(p)));
      });
}

PropertyResult mgf(const Params& p, double t, Method method,
                   const SeriesControl& ctrl) {
  require_params(p);
  if (!(t < p.beta)) {
    throw std::domain_error("mgf: requires t < beta");
  }
  if (t == 0.0) {
    PropertyResult one;
    one.value = 1.0;
    one.method = method;
    one.converged = true;
    return one;
  }
  return dispatch(
      method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        return from_series(mixture_series(
            p, [t](double theta) { return theta / (theta - t); }, ctrl));
      },
      [&] {
        const double scale = 1.0 / (p.beta - std::max(t, 0.0));
        return from_quadrature(integrate_pdf_weighted(
            p, [t](double x) { return std::exp(t * x); }, 0.0, kInf, scale));
      });
}

ComplexResult cf(const Params& p, double t, Method method,
                 const SeriesControl& ctrl) {
  require_params(p);
  ComplexResult out;
  if (t == 0.0) {
    out.value = {1.0, 0.0};
    out.method = method;
    out.converged = true;
    return out;
  }
  auto re = dispatch(
      method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        return from_series(mixture_series(
            p,
            [t](double th) { return th * th / (th * th + t * t); }, ctrl));
      },
      [&] {
        return from_quadrature(integrate_pdf_weighted(
            p, [t](double x) { return std::cos(t * x); }, 0.0, kInf,
            tail_scale(p)));
      });
  auto im = dispatch(
      method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        return from_series(mixture_series(
            p, [t](double th) { return th * t / (th * th + t * t); }, ctrl));
      },
      [&] {
        return from_quadrature(integrate_pdf_weighted(
            p, [t](double x) { return std::sin(t * x); }, 0.0, kInf,
            tail_scale(p)));
      });
  out.value = {re.value, im.value};
  out.method = (re.method == Method::series && im.method == Method::series)
                   ? Method::series
                   : Method::quadrature;
  out.converged = re.converged && im.converged;
  out.fell_back = re.fell_back || im.fell_back;
  out.note = !re.note.empty() ? re.note : im.note;
  return out;
}

ComplexResult cgf(const Params& p, double t, Method method,
                  const SeriesControl& ctrl) {
  ComplexResult out = cf(p, t, method, ctrl);
  out.value = std::log(out.value);
  return out;
}

// ---------------------------------------------------------------------------

PropertyResult mean_residual_life(const Params& p, double t) {
  require_params(p);
  if (t < 0.0) throw std::domain_error("mean_residual_life: t must be >= 0");
  const double s = survival(p, t);
  if (!(s > 1e-300)) {
    PropertyResult out;
    out.value = kNaN;
    out.converged = false;
    out.note = "survival underflows at t; mean residual life undefined";
    return out;
  }
  auto q = numerics::integrate([&](double x) { return survival(p, x); }, t,
                               kInf, 1e-11, tail_scale(p));
  PropertyResult out = from_quadrature(q);
  out.value = q.value / s;
  out.error_estimate = q.abs_error_estimate / s;
  return out;
}

namespace {

PropertyResult mean_of(const Params& p, Method method, const SeriesControl& ctrl) {
  return raw_moment(MomentRequest{p, 1, method}, ctrl);
}

// E|X − c| = c(2F(c) − 1) − μ + 2∫_c^∞ x f(x) dx.
PropertyResult mean_deviation(const Params& p, bool about_mean, Method method,
                              const SeriesControl& ctrl) {
  require_params(p);
  return dispatch(
      method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        PropertyResult mu = mean_of(p, Method::series, ctrl);
        if (mu.fell_back || !mu.converged) return not_converged();
        const double c = about_mean ? mu.value : median(p);
        auto pe = partial_expectation_series(p, c, ctrl);
        PropertyResult out = from_series(pe);
        out.value = c * (2.0 * cdf(p, c) - 1.0) - mu.value + 2.0 * pe.value;
        out.converged = pe.converged;
        out.error_estimate = 2.0 * pe.error_estimate + mu.error_estimate;
        return out;
      },
      [&] {
        PropertyResult mu = mean_of(p, Method::quadrature, ctrl);
        const double c = about_mean ? mu.value : median(p);
        auto below = integrate_pdf_weighted(
            p, [c](double x) { return c - x; }, 0.0, c, 1.0);
        auto above = integrate_pdf_weighted(
            p, [c](double x) { return x - c; }, c, kInf, tail_scale(p));
        PropertyResult out = from_quadrature(below);
        out.value = below.value + above.value;
        out.converged = below.converged && above.converged && mu.converged;
        out.error_estimate = below.abs_error_estimate + above.abs_error_estimate;
        return out;
      });
}

}  // namespace

PropertyResult mean_deviation_about_mean(const Params& p, Method method,
                                         const SeriesControl& ctrl) {
  return mean_deviation(p, true, method, ctrl);
}

PropertyResult mean_deviation_about_median(const Params& p, Method method,
                                           const SeriesControl& ctrl) {
  return mean_deviation(p, false, method, ctrl);
}

PropertyResult lorenz(const Params& p, double u, Method method,
                      const SeriesControl& ctrl) {
  require_params(p);
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("lorenz: probability must lie in [0, 1]");
  }
  if (u == 0.0 || u == 1.0) {
    PropertyResult out;
    out.value = u;
    out.method = method;
    out.converged = true;
    return out;
  }
  const double q = quantile(p, u);
  return dispatch(
      method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        PropertyResult mu = mean_of(p, Method::series, ctrl);
        if (mu.fell_back || !mu.converged) return not_converged();
        auto pe = partial_expectation_series(p, q, ctrl);
        PropertyResult out = from_series(pe);
        out.value = 1.0 - pe.value / mu.value;
        out.error_estimate = (pe.error_estimate + mu.error_estimate) / mu.value;
        return out;
      },
      [&] {
        PropertyResult mu = mean_of(p, Method::quadrature, ctrl);
        auto part = integrate_pdf_weighted(
            p, [](double x) { return x; }, 0.0, q, 1.0);
        PropertyResult out = from_quadrature(part);
        out.value = part.value / mu.value;
        out.converged = part.converged && mu.converged;
        return out;
      });
}

PropertyResult bonferroni(const Params& p, double u, Method method,
                          const SeriesControl& ctrl) {
  if (!(u > 0.0 && u <= 1.0)) {
    throw std::domain_error("bonferroni: probability must lie in (0, 1]");
  }
  PropertyResult out = lorenz(p, u, method, ctrl);
  out.value /= u;
  out.error_estimate /= u;
  return out;
}

// ---------------------------------------------------------------------------

PropertyResult renyi_entropy(const Params& p, double s, Method method,
                             const SeriesControl& ctrl) {
  require_params(p);
  if (!(s > 0.0) || std::abs(s - 1.0) <= 1e-8) {
    throw std::domain_error("renyi_entropy: requires s > 0 and s != 1");
  }
  if (s > 1.0 && s * (1.0 - p.alpha) >= 1.0) {
    PropertyResult out;
    out.value = -kInf;
    out.method = method;
    out.converged = true;
    out.note = "integral of f^s diverges at the origin";
    return out;
  }
  const double m = s * (p.alpha - 1.0);
  return dispatch(
      method, !unit_lambda(p.lambda), kUnitLambdaNote,
      [&] {
        const double L = std::log(p.lambda);
        // f = K e^{−βx} e^{−gL} |u(gL)|^{α−1},  K = αβ|L| |u(L)|^{−α}.
        const double log_K = std::log(p.alpha) + std::log(p.beta) +
                             std::log(std::abs(L)) - p.alpha * log_abs_u(L);
        BinomialRow binom(m);
        auto r = nested_sum(
            [&](long j) { return binom[j].sign != 0; },
            [&](long j, long k) {
              const SignedLog& b = binom[j];
              const double c = expansion_shift(L, m, j) - s * L;
              double log_mag = b.log_abs + c - std::lgamma(double(k) + 1.0) -
                               std::log(s + double(k));
              int sign = b.sign * (j % 2 ? -1 : 1);
              if (k > 0) {
                if (c == 0.0) return 0.0;
                log_mag += double(k) * std::log(std::abs(c));
                if (c > 0.0 && k % 2) sign = -sign;
              }
              return sign * std::exp(log_mag);
            },
            0, ctrl);
        PropertyResult out = from_series(r);
        if (!(r.value > 0.0)) {
          out.converged = false;
          return out;
        }
        out.value = (s * log_K + std::log(r.value) - std::log(p.beta)) / (1.0 - s);
        out.error_estimate = r.error_estimate / (r.value * std::abs(1.0 - s));
        return out;
      },
      [&] {
        auto q = numerics::integrate(
            [&](double x) {
              const double lf = log_pdf(p, x);
              return std::isfinite(lf) ? std::exp(s * lf) : (lf > 0 ? kInf : 0.0);
            },
            0.0, kInf, 1e-11, tail_scale(p) / s);
        PropertyResult out = from_quadrature(q);
        out.value = std::log(q.value) / (1.0 - s);
        out.error_estimate = q.abs_error_estimate / (q.value * std::abs(1.0 - s));
        return out;
      });
}

PropertyResult shannon_entropy(const Params& p) {
  require_params(p);
  auto q = numerics::integrate(
      [&](double x) {
        const double lf = log_pdf(p, x);
        if (!std::isfinite(lf)) return 0.0;
        return -lf * std::exp(lf);
      },
      0.0, kInf, 1e-11, tail_scale(p));
  return from_quadrature(q);
}

// ---------------------------------------------------------------------------
// Reliability

std::optional<ReliabilityCase> reliability_case(const ReliabilityPair& pair) {
  const Params& a = pair.strength;
  const Params& b = pair.stress;
  const bool u1 = unit_lambda(a.lambda);
  const bool u2 = unit_lambda(b.lambda);
  if (u1 && u2) return ReliabilityCase::both_plain;
  if (a.alpha != b.alpha || a.beta != b.beta) return std::nullopt;
  if (!u1 && !u2) return ReliabilityCase::both_transformed;
  return u1 ? ReliabilityCase::strength_plain : ReliabilityCase::stress_plain;
}

int case_number(ReliabilityCase c) {
  switch (c) {
    case ReliabilityCase::both_transformed: return 1;
    case ReliabilityCase::strength_plain: return 2;
    case ReliabilityCase::stress_plain: return 3;
    case ReliabilityCase::both_plain: return 4;
  }
  return 0;
}

namespace {

// γ(a, x) / x^a, in logs.
double log_lower_gamma_over_power(double a, double x) {
  return std::lgamma(a) + std::log(numerics::regularized_gamma_p(a, x)) -
         a * std::log(x);
}

SeriesResult reliability_series(const ReliabilityPair& pair, ReliabilityCase c,
                                const SeriesControl& ctrl) {
  const Params& p1 = pair.strength;
  const Params& p2 = pair.stress;
  switch (c) {
    case ReliabilityCase::both_transformed: {
      // The binomial sum over the stress expansion collapses to
      // |u(gL₂)|^α, leaving Σ_j (−1)^j C(α−1, j)·∫₀¹ e^{g·c_j}|u(gL₂)|^α dg.
      // With t = e^{−g|L₂|} each integral is a complementary incomplete beta.
      const double a = p1.alpha;
      const double L1 = std::log(p1.lambda);
      const double L2 = std::log(p2.lambda);
      const double ell = std::abs(L2);
      const double x0 = std::exp(-ell);
      const double log_lead = std::log(a) + std::log(std::abs(L1)) -
                              a * log_abs_u(L1) - a * log_abs_u(L2);
      BinomialRow b1(a - 1.0);
      auto inner = [&](double c) {
        const double q = -c / ell - (L2 < 0.0 ? a : 0.0);
        if (q > 0.0) return boost::math::betac(q, a + 1.0, x0) / ell;
        // Finitely many leading terms when λ₁ < 1; the integrand is bounded.
        return numerics::integrate(
                   [&](double g) {
                     return g == 0.0 ? 0.0 : std::exp(g * c + a * log_abs_u(g * L2));
                   },
                   0.0, 1.0, 1e-13)
            .value;
      };
      return numerics::sum_series(
          [&](long j) {
            const SignedLog& w = b1[j];
            if (w.sign == 0) return 0.0;
            const double c = expansion_shift(L1, a - 1.0, j) - L1;
            const int sign = w.sign * (j % 2 ? -1 : 1);
            return sign * std::exp(log_lead + w.log_abs) * inner(c);
          },
          0, ctrl);
    }
    case ReliabilityCase::strength_plain: {
      const double a = p2.alpha;
      const double L2 = std::log(p2.lambda);
      const double log_K2 = -a * log_abs_u(L2);
      BinomialRow b(a);
      auto r = numerics::sum_series(
          [&](long i) {
            const SignedLog& w = b[i];
            if (w.sign == 0) return 0.0;
            const double x = double(i) * L2;
            const int sign = w.sign * (i % 2 ? -1 : 1);
            return sign * std::exp(std::log(a) + w.log_abs +
                                   log_lower_gamma_over_power(a, x));
          },
          1, ctrl);
      const double K2 = std::exp(log_K2);
      r.value = K2 * (1.0 + r.value);
      r.error_estimate *= K2;
      return r;
    }
    case ReliabilityCase::stress_plain: {
      const double a = p1.alpha;
      const double L1 = std::log(p1.lambda);
      const double log_lead =
          std::log(a) + std::log(L1) - a * log_abs_u(L1);
      BinomialRow b(a - 1.0);
      return numerics::sum_series(
          [&](long j) {
            const SignedLog& w = b[j];
            if (w.sign == 0) return 0.0;
            const double x = double(j + 1) * L1;
            const int sign = w.sign * (j % 2 ? -1 : 1);
            return sign * std::exp(log_lead + w.log_abs +
                                   log_lower_gamma_over_power(a + 1.0, x));
          },
          0, ctrl);
    }
    case ReliabilityCase::both_plain: {
      // Σ_k (−1)^k C(α₂, k)/(a + k·β₂) = B(a/β₂, α₂ + 1)/β₂ sums the stress
      // expansion in closed form.
      const double a1 = p1.alpha, b1 = p1.beta;
      const double a2 = p2.alpha, b2 = p2.beta;
      BinomialRow c1(a1 - 1.0);
      return numerics::sum_series(
          [&](long j) {
            const SignedLog& w = c1[j];
            if (w.sign == 0) return 0.0;
            const int sign = w.sign * (j % 2 ? -1 : 1);
            const double B = boost::math::beta(double(j + 1) * b1 / b2, a2 + 1.0);
            return sign * std::exp(w.log_abs) * a1 * b1 / b2 * B;
          },
          0, ctrl);
    }
  }
  return {};
}

}  // namespace

PropertyResult reliability(const ReliabilityPair& pair, Method method,
                           const SeriesControl& ctrl) {
  require_params(pair.strength);
  require_params(pair.stress);
  const auto c = reliability_case(pair);
  bool supported = c.has_value();
  const char* reason = "pair fits none of the series cases; quadrature used";
  if (c == ReliabilityCase::strength_plain && !(pair.stress.lambda > 1.0)) {
    supported = false;
    reason = "incomplete-gamma form requires lambda2 > 1; quadrature used";
  }
  if (c == ReliabilityCase::stress_plain && !(pair.strength.lambda > 1.0)) {
    supported = false;
    reason = "incomplete-gamma form requires lambda1 > 1; quadrature used";
  }
  if (method == Method::series && !c) {
    throw std::invalid_argument(
        "reliability: series path needs shared alpha and beta unless both "
        "lambdas equal 1");
  }
  return dispatch(
      method, supported, reason,
      [&] { return from_series(reliability_series(pair, *c, ctrl)); },
      [&] {
        const Params& p1 = pair.strength;
        const Params& p2 = pair.stress;
        auto q = numerics::integrate(
            [&](double x) {
              const double f = pdf(p1, x);
              return f == 0.0 ? 0.0 : f * cdf(p2, x);
            },
            0.0, kInf, 1e-11, 1.0 / p1.beta);
        return from_quadrature(q);
      });
}

double reliability_strength_plain_as_printed(const ReliabilityPair& pair) {
  const double a = pair.stress.alpha;
  const double l = pair.stress.lambda;
  if (!(l > 1.0)) {
    throw std::domain_error("printed form requires lambda2 > 1");
  }
  const double L = std::log(l);
  const double La = std::pow(L, a);
  return std::pow(l, a) *
         (La + a * numerics::upper_incomplete_gamma(a, L) -
          a * std::exp(numerics::log_gamma(a))) /
         (std::pow(l - 1.0, a) * La);
}

// ---------------------------------------------------------------------------
// Order statistics

namespace {

void check_rank(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw std::domain_error("order statistic: requires 1 <= k <= n");
  }
}

double choose(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

double round_choose(int n, int k) { return std::round(choose(n, k)); }

}  // namespace

double order_stat_cdf(const Params& p, int n, int k, double x,
                      OrderForm form) {
  check_rank(n, k);
  const double F = cdf(p, x);
  if (form == OrderForm::alternating) {
    double total = 0.0;
    for (int j = k; j <= n; ++j) {
      for (int l = 0; l <= n - j; ++l) {
        total += (l % 2 ? -1.0 : 1.0) * round_choose(n, j) *
                 round_choose(n - j, l) * std::pow(F, j + l);
      }
    }
    return total;
  }
  const double S = survival(p, x);
  double total = 0.0;
  for (int j = k; j <= n; ++j) {
    total += round_choose(n, j) * std::pow(F, j) * std::pow(S, n - j);
  }
  return std::min(total, 1.0);
}

double order_stat_pdf(const Params& p, int n, int k, double x,
                      OrderForm form) {
  check_rank(n, k);
  const double f = pdf(p, x);
  if (f == 0.0) return 0.0;
  const double F = cdf(p, x);
  const double lead = std::exp(std::lgamma(n + 1.0) - std::lgamma(double(k)) -
                               std::lgamma(n - k + 1.0));
  if (form == OrderForm::alternating) {
    double total = 0.0;
    for (int l = 0; l <= n - k; ++l) {
      total += (l % 2 ? -1.0 : 1.0) * round_choose(n - k, l) *
               std::pow(F, k + l - 1);
    }
    return lead * f * total;
  }
  return lead * f * std::pow(F, k - 1) * std::pow(survival(p, x), n - k);
}

}  // namespace pngkme
