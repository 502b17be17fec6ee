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

#include "pngkme/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace pngkme {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kThetaBound = 30.0;

using numerics::Matrix;

double log_abs_u(double t) {
  const double a = std::abs(t);
  const double base = a > std::numbers::ln2 ? std::log1p(-std::exp(-a))
                                            : std::log(-std::expm1(-a));
  return t < 0.0 ? a + base : base;
}

// t/(eᵗ − 1)
double sigma(double t) { return t == 0.0 ? 1.0 : t / std::expm1(t); }

// t²eᵗ/(eᵗ − 1)², even in t
double kappa(double t) {
  const double a = std::abs(t);
  if (a == 0.0) return 1.0;
  const double d = std::expm1(-a);
  return a * a * std::exp(-a) / (d * d);
}

// 1/t − 1/(eᵗ − 1)
double eta(double t) {
  if (std::abs(t) < 0.05) {
    const double t2 = t * t;
    return 0.5 - t / 12.0 + t * t2 / 720.0 - t * t2 * t2 / 30240.0;
  }
  return 1.0 / t - 1.0 / std::expm1(t);
}

double eta_prime(double t) {
  if (std::abs(t) < 0.05) {
    const double t2 = t * t;
    return -1.0 / 12.0 + t2 / 240.0 - t2 * t2 / 6048.0;
  }
  return (kappa(t) - 1.0) / (t * t);
}

// (σ(t) − κ(t))/t
double nu(double t) {
  if (std::abs(t) < 0.05) {
    const double t2 = t * t;
    return -0.5 + t / 6.0 - t * t2 / 180.0 + t * t2 * t2 / 5040.0;
  }
  return (sigma(t) - kappa(t)) / t;
}

// Log-likelihood with derivatives over (α, β, L = ln λ).
struct Derivs {
  double ll = 0.0;
  std::array<double, 3> g{};
  std::array<std::array<double, 3>, 3> h{};
};

Derivs pngkme_derivs(const Params& p, const Sample& s, int order) {
  const double a = p.alpha, b = p.beta, L = std::log(p.lambda);
  const double am1 = a - 1.0;
  const double lauL = L == 0.0 ? 0.0 : log_abs_u(L);
  const double head_L = L == 0.0 ? 0.0 : std::log(std::abs(L)) - lauL;
  const double etaL = eta(L);
  const double detaL = eta_prime(L);
  Derivs d;
  for (double x : s.values()) {
    const double bx = b * x;
    const double e = std::exp(-bx);
    const double g = -std::expm1(-bx);
    const double t = g * L;
    const double ln_r = L == 0.0 ? std::log(g) : log_abs_u(t) - lauL;
    d.ll += std::log(a) + std::log(b) - bx + head_L - t + am1 * ln_r;
    if (order < 1) continue;
    const double rho = sigma(t) / g;
    const double etat = eta(t);
    d.g[0] += 1.0 / a + ln_r;
    d.g[1] += 1.0 / b - x - L * x * e + am1 * x * e * rho;
    d.g[2] += etaL - g + am1 * (etaL - g * etat);
    if (order < 2) continue;
    d.h[0][0] += -1.0 / (a * a);
    d.h[0][1] += x * e * rho;
    d.h[0][2] += etaL - g * etat;
    d.h[1][1] += -1.0 / (b * b) + L * x * x * e -
                 am1 * x * x * e * (rho + e * kappa(t) / (g * g));
    d.h[1][2] += -x * e + am1 * x * e * nu(t);
    d.h[2][2] += a * detaL - am1 * g * g * eta_prime(t);
  }
  d.h[1][0] = d.h[0][1];
  d.h[2][0] = d.h[0][2];
  d.h[2][1] = d.h[1][2];
  return d;
}

void require_fit_sample(const Sample& s) {
  if (s.n() < 2) {
    throw std::invalid_argument("fit: need at least two observations");
  }
}

double generic_loglik(const ModelSpec& spec, const Params& p, const Sample& s) {
  double out = 0.0;
  for (double x : s.values()) out += model_log_pdf(spec, p, x);
  return out;
}

// Objective −lnL/n in θ = ln(free slots), with derivatives in θ.
struct Objective {
  const ModelSpec& spec;
  const Sample& sample;
  std::vector<std::size_t> idx;

  Params params(std::span<const double> theta) const {
    std::vector<double> v(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) v[k] = std::exp(theta[k]);
    return spec.complete(v);
  }

  double value(std::span<const double> theta) const {
    const Params p = params(theta);
    const double n = static_cast<double>(sample.n());
    if (spec.is_pngkme_family()) return -pngkme_derivs(p, sample, 0).ll / n;
    return -generic_loglik(spec, p, sample) / n;
  }

  struct Eval {
    double f = kInf;
    std::vector<double> g;
    Matrix h;
  };

  Eval eval(std::span<const double> theta) const {
    const std::size_t k = theta.size();
    const double n = static_cast<double>(sample.n());
    Eval out;
    out.g.assign(k, 0.0);
    out.h = Matrix(k);
    if (spec.is_pngkme_family()) {
      const Params p = params(theta);
      const Derivs d = pngkme_derivs(p, sample, 2);
      const std::array<double, 3> c{p.alpha, p.beta, 1.0};
      out.f = -d.ll / n;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t a = idx[i];
        out.g[i] = -c[a] * d.g[a] / n;
        for (std::size_t j = 0; j < k; ++j) {
          const std::size_t b = idx[j];
          double v = c[a] * c[b] * d.h[a][b];
          if (a == b && a < 2) v += c[a] * d.g[a];
          out.h(i, j) = -v / n;
        }
      }
      return out;
    }
    auto fn = [this](std::span<const double> th) { return value(th); };
    out.f = value(theta);
    out.g = numerics::fd_gradient(fn, theta, 1e-6);
    out.h = numerics::fd_hessian(fn, theta, 1e-4);
    return out;
  }
};

bool all_finite(const Objective::Eval& e) {
  if (!std::isfinite(e.f)) return false;
  for (double v : e.g) {
    if (!std::isfinite(v)) return false;
  }
  for (std::size_t i = 0; i < e.h.size(); ++i) {
    for (std::size_t j = 0; j < e.h.size(); ++j) {
      if (!std::isfinite(e.h(i, j))) return false;
    }
  }
  return true;
}

struct StartResult {
  std::vector<double> theta;
  double f = kInf;
  int iterations = 0;
  double gradient_norm = kInf;
  bool converged = false;
  std::string message;
};

// sup-norm of the score in the original parameters.
double score_norm(const Objective& obj, std::span<const double> theta,
                  std::span<const double> g) {
  const double n = static_cast<double>(obj.sample.n());
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    m = std::max(m, std::abs(n * g[k] / std::exp(theta[k])));
  }
  return m;
}

double clamp_theta(double v) {
  return std::clamp(v, -kThetaBound, kThetaBound);
}

StartResult newton(const Objective& obj, std::vector<double> theta,
                   const FitOptions& opt) {
  StartResult r;
  const std::size_t k = theta.size();
  const double n = static_cast<double>(obj.sample.n());
  for (double& v : theta) v = clamp_theta(v);
  Objective::Eval ev = obj.eval(theta);
  if (!all_finite(ev)) {
    r.theta = theta;
    r.message = "non-finite objective at start";
    return r;
  }
  double mu = 0.0;
  bool stalled = false;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (score_norm(obj, theta, ev.g) <= opt.gradient_tol_per_n * n &&
        numerics::invert_symmetric(ev.h).ok) {
      break;
    }
    const double scale = std::max(1.0, ev.h.max_abs());
    bool accepted = false;
    std::vector<double> next(k);
    double f_next = kInf;
    for (int tries = 0; tries < 60 && !accepted; ++tries) {
      Matrix a = ev.h;
      for (std::size_t i = 0; i < k; ++i) a(i, i) += mu;
      const auto inv = numerics::invert_symmetric(a);
      if (!inv.ok) {
        mu = std::max(mu * 10.0, 1e-8 * scale);
        continue;
      }
      std::vector<double> d(k, 0.0);
      double dmax = 0.0, slope = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) d[i] -= inv.inverse(i, j) * ev.g[j];
        dmax = std::max(dmax, std::abs(d[i]));
      }
      if (dmax > 3.0) {
        for (double& v : d) v *= 3.0 / dmax;
      }
      for (std::size_t i = 0; i < k; ++i) {
        next[i] = clamp_theta(theta[i] + d[i]);
        slope += ev.g[i] * (next[i] - theta[i]);
      }
      f_next = obj.value(next);
      if (std::isfinite(f_next) && f_next <= ev.f + 1e-4 * std::min(slope, 0.0) &&
          next != theta) {
        accepted = true;
      } else {
        mu = std::max(mu * 10.0, 1e-8 * scale);
      }
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    double step = 0.0, size = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      step = std::max(step, std::abs(next[i] - theta[i]));
      size = std::max(size, std::abs(next[i]));
    }
    theta = next;
    Objective::Eval nev = obj.eval(theta);
    if (!all_finite(nev)) {
      stalled = true;
      break;
    }
    ev = std::move(nev);
    mu = mu < 1e-12 * scale ? 0.0 : mu / 10.0;
    if (step <= opt.step_tol * (1.0 + size)) {
      ++it;
      break;
    }
  }
  r.theta = theta;
  r.f = ev.f;
  r.iterations = it;
  r.gradient_norm = score_norm(obj, theta, ev.g);
  const bool on_bound = std::any_of(theta.begin(), theta.end(), [](double v) {
    return std::abs(v) >= kThetaBound - 1e-9;
  });
  const bool grad_ok = r.gradient_norm <= opt.gradient_tol_per_n * n;
  const bool pd = numerics::invert_symmetric(ev.h).ok;
  r.converged = grad_ok && pd && !on_bound;
  if (on_bound) {
    r.message = "parameter reached the search bound";
  } else if (!grad_ok) {
    r.message = stalled ? "line search stalled before the gradient tolerance"
                        : "iteration limit reached";
  } else if (!pd) {
    r.message = "observed information is not positive definite";
  }
  return r;
}

std::vector<Params> heuristic_starts(const ModelSpec& spec, const Sample& s) {
  const double m = s.mean();
  std::vector<Params> out;
  switch (spec.family) {
    case Family::Weibull:
      for (double k : {1.0, 0.5, 2.0}) out.push_back({k, m, 1.0});
      break;
    case Family::Gamma:
      for (double k : {1.0, 0.5, 2.0}) out.push_back({k, k / m, 1.0});
      break;
    case Family::ExponentiatedWeibull:
      for (double k : {1.0, 0.5, 2.0}) {
        out.push_back({1.0, std::pow(1.0 / m, k), k});
      }
      break;
    default:
      for (double l : {0.5, std::numbers::e, 10.0, 40.0}) {
        out.push_back({1.0, 1.0 / m, l});
      }
      break;
  }
  return out;
}

Params random_start(const ModelSpec& spec, const Sample& s, Rng& rng) {
  Params base = heuristic_starts(spec, s).front();
  auto draw = [&rng](double lo, double hi) {
    return std::exp(lo + (hi - lo) * rng.uniform());
  };
  base.alpha *= draw(-1.0, 2.0);
  base.beta *= draw(-1.0, 1.0);
  base.lambda = spec.is_pngkme_family() ? draw(-3.0, 6.0)
                                        : base.lambda * draw(-1.0, 1.0);
  return base;
}

// Submodels of `spec` within the family: every fixed slot agrees and at
// least one more slot is fixed.
std::vector<ModelSpec> nested_submodels(const ModelSpec& spec) {
  std::vector<ModelSpec> out;
  if (!spec.is_pngkme_family()) return out;
  for (Family f : all_families()) {
    const ModelSpec t = ModelSpec::of(f);
    if (!t.is_pngkme_family() || t.free_count() >= spec.free_count()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < 3 && ok; ++i) {
      if (spec.fixed[i] && (!t.fixed[i] || *t.fixed[i] != *spec.fixed[i])) {
        ok = false;
      }
    }
    if (!ok) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const ModelSpec& u) {
      return u.fixed == t.fixed;
    });
    if (!dup) out.push_back(t);
  }
  return out;
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("Sample: no observations");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("Sample: observations must be positive and finite");
    }
  }
}

double Sample::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double Sample::mean() const {
  return values_.empty() ? kNaN : sum() / static_cast<double>(values_.size());
}

double log_likelihood(const ModelSpec& spec, const Params& p, const Sample& s,
                      bool* underflow) {
  const double ll = generic_loglik(spec, p, s);
  const bool bad = std::isinf(ll) && ll < 0.0;
  if (underflow) *underflow = bad;
  return bad ? -kInf : ll;
}

double pngkme_log_likelihood_closed_form(const Params& p, const Sample& s) {
  p.validate();
  if (!(p.lambda > 1.0)) {
    throw std::domain_error("closed-form log-likelihood requires lambda > 1");
  }
  const double n = static_cast<double>(s.n());
  const double a = p.alpha, b = p.beta, l = p.lambda, L = std::log(l);
  double sum_x = 0.0, sum_e = 0.0, sum_log = 0.0;
  for (double x : s.values()) {
    const double e = std::exp(-b * x);
    sum_x += x;
    sum_e += e;
    sum_log += std::log(-std::expm1(-(1.0 - e) * L));
  }
  return n * std::log(a) + n * std::log(b) + n * a * L + n * std::log(L) -
         a * n * std::log(l - 1.0) - b * sum_x - (n - sum_e) * L +
         (a - 1.0) * sum_log;
}

std::array<double, 3> score(const Params& p, const Sample& s) {
  p.validate();
  const Derivs d = pngkme_derivs(p, s, 1);
  return {d.g[0], d.g[1], d.g[2] / p.lambda};
}

Matrix observed_information(const Params& p, const Sample& s) {
  p.validate();
  const Derivs d = pngkme_derivs(p, s, 2);
  const double l = p.lambda;
  Matrix m(3);
  m(0, 0) = -d.h[0][0];
  m(0, 1) = m(1, 0) = -d.h[0][1];
  m(1, 1) = -d.h[1][1];
  m(0, 2) = m(2, 0) = -d.h[0][2] / l;
  m(1, 2) = m(2, 1) = -d.h[1][2] / l;
  m(2, 2) = -(d.h[2][2] - d.g[2]) / (l * l);
  return m;
}

Matrix observed_information_as_printed(const Params& p, const Sample& s) {
  p.validate();
  if (!(p.lambda > 1.0)) {
    throw std::domain_error("printed information requires lambda > 1");
  }
  const double n = static_cast<double>(s.n());
  const double a = p.alpha, b = p.beta, l = p.lambda, L = std::log(l);
  double ab = 0.0, al = 0.0, bb = 0.0, bl = 0.0, ll = 0.0;
  for (double x : s.values()) {
    const double e = std::exp(-b * x);
    const double le = std::pow(l, e);
    const double den = le - l;
    const double q = 1.0 - std::pow(l, -(1.0 - e));
    ab += x * le * e / den;
    al += (e - 1.0) * std::pow(l, -(2.0 - e)) / q;
    bb += x * x * le * le * e * e * (1.0 - a) * L * L / (den * den) +
          L * x * x * e - x * x * le * e * e * (1.0 - a) * L * L / den -
          x * x * le * e * (1.0 - a) * L / den;
    bl += x * x * e * e * (((1.0 - a) * e - a + 1.0) * std::pow(l, e + 1.0) * L) /
              (l * den * den) -
          ((a + 1.0) * e * std::pow(l, e + 1.0) + a * e * le * le + l * l * e) /
              (l * den * den);
    ll += (a - 1.0) * (e - 1.0) * (e - 1.0) * std::pow(l, -4.0 + 2.0 * e) / (q * q) -
          (e + n * (a - 1.0)) / (l * l) +
          (a - 1.0) * (e - 2.0) * (e - 1.0) * std::pow(l, -3.0 + e) / q;
  }
  Matrix h(3);
  h(0, 0) = -n / (a * a);
  h(0, 1) = h(1, 0) = -L * ab;
  h(0, 2) = h(2, 0) = n / l - a / (l - 1.0) + al;
  h(1, 1) = -n / (b * b) + bb;
  h(1, 2) = h(2, 1) = bl;
  h(2, 2) = -a * n / ((l - 1.0) * (l - 1.0)) + n * (1.0 + L) / (l * l * L * L) + ll;
  return -h;
}

std::vector<double> model_score(const ModelSpec& spec, const Params& p,
                                const Sample& s) {
  const auto idx = spec.free_indices();
  std::vector<double> out;
  if (spec.is_pngkme_family()) {
    const auto g = score(p, s);
    for (std::size_t i : idx) out.push_back(g[i]);
    return out;
  }
  auto fn = [&](std::span<const double> v) {
    return generic_loglik(spec, spec.complete(v), s);
  };
  const auto x = spec.free_values(p);
  return numerics::fd_gradient(fn, x, 1e-6);
}

Matrix model_observed_information(const ModelSpec& spec, const Params& p,
                                  const Sample& s) {
  const auto idx = spec.free_indices();
  const std::size_t k = idx.size();
  Matrix out(k);
  if (spec.is_pngkme_family()) {
    const Matrix full = observed_information(p, s);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) out(i, j) = full(idx[i], idx[j]);
    }
    return out;
  }
  auto fn = [&](std::span<const double> v) {
    return generic_loglik(spec, spec.complete(v), s);
  };
  const auto x = spec.free_values(p);
  return -numerics::fd_hessian(fn, x, 1e-4);
}

Interval log_interval(double estimate, double variance, double omega) {
  if (!(omega > 0.0 && omega < 1.0)) {
    throw std::domain_error("log_interval: omega must lie in (0, 1)");
  }
  const double z = numerics::normal_quantile(1.0 - omega / 2.0);
  const double k =
      std::exp(z * std::sqrt(std::log1p(variance / (estimate * estimate))));
  return {estimate / k, estimate * k};
}

std::optional<std::vector<Interval>> confidence_intervals(const FitResult& f,
                                                          double omega) {
  if (!f.vcov_ok) return std::nullopt;
  std::vector<Interval> out;
  for (std::size_t k = 0; k < f.free_indices.size(); ++k) {
    const double var = f.vcov(k, k);
    if (!(var >= 0.0)) return std::nullopt;
    out.push_back(log_interval(f.estimates[f.free_indices[k]], var, omega));
  }
  return out;
}

FitResult fit(const ModelSpec& spec, const Sample& s, const FitOptions& options) {
  spec.validate();
  require_fit_sample(s);
  if (!(options.omega > 0.0 && options.omega < 1.0)) {
    throw std::invalid_argument("fit: omega must lie in (0, 1)");
  }
  FitResult out;
  out.spec = spec;
  out.free_indices = spec.free_indices();
  const std::size_t k = out.free_indices.size();

  std::vector<Params> starts;
  if (k > 0) {
    for (const Params& h : heuristic_starts(spec, s)) {
      if (static_cast<int>(starts.size()) < options.restarts) starts.push_back(h);
    }
    Rng rng(mix_seed(options.seed ^ static_cast<std::uint64_t>(spec.family)));
    while (static_cast<int>(starts.size()) < options.restarts) {
      starts.push_back(random_start(spec, s, rng));
    }
    for (const Params& p : options.extra_starts) starts.push_back(p);

    FitOptions sub = options;
    sub.nest_restarts = false;
    sub.extra_starts.clear();
    std::vector<ModelSpec> subs;
    if (options.nest_restarts) {
      subs = nested_submodels(spec);
    } else if (spec.is_pngkme_family() && !spec.fixed[2]) {
      ModelSpec unit = spec;
      unit.fixed[2] = 1.0;
      if (unit.free_count() > 0) subs.push_back(unit);
    }
    for (const ModelSpec& t : subs) {
      const FitResult r = fit(t, s, sub);
      if (std::isfinite(r.loglik)) starts.push_back(r.estimates);
    }
  }

  const Objective obj{spec, s, out.free_indices};
  std::vector<StartResult> results(starts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < starts.size(); i = next++) {
      const auto v = spec.free_values(starts[i]);
      std::vector<double> theta(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) theta[j] = std::log(v[j]);
      results[i] = newton(obj, theta, options);
    }
  };
  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(starts.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<double> best_theta;
  if (k == 0) {
    out.converged = true;
    out.estimates = spec.complete(std::vector<double>{});
  } else {
    int best = -1;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (!std::isfinite(results[i].f)) continue;
      if (best < 0 || results[i].f < results[best].f) best = static_cast<int>(i);
    }
    out.trace.restarts_used = static_cast<int>(results.size());
    if (best < 0) {
      out.estimates = starts.front();
      out.loglik = -kInf;
      out.neg2loglik = kInf;
      out.aic = kInf;
      out.trace.message = "no start produced a finite likelihood";
      return out;
    }
    const StartResult& r = results[best];
    std::vector<double> v(k);
    for (std::size_t j = 0; j < k; ++j) v[j] = std::exp(r.theta[j]);
    out.estimates = spec.complete(v);
    out.converged = r.converged;
    out.trace.best_start = best;
    out.trace.iterations = r.iterations;
    out.trace.gradient_norm = r.gradient_norm;
    out.trace.message = r.message;
  }

  out.loglik = log_likelihood(spec, out.estimates, s);
  out.neg2loglik = -2.0 * out.loglik;
  out.aic = out.neg2loglik + 2.0 * static_cast<double>(k);
  if (k > 0) {
    out.information = model_observed_information(spec, out.estimates, s);
    const auto inv = numerics::invert_symmetric(out.information);
    out.vcov_ok = inv.ok;
    if (inv.ok) {
      out.vcov = inv.inverse;
      if (auto ci = confidence_intervals(out, options.omega)) {
        out.ci = *ci;
      } else {
        out.vcov_ok = false;
      }
    }
    if (!out.vcov_ok) out.converged = false;
  }
  return out;
}

}  // namespace pngkme
