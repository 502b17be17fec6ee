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


#include "pngkme/gof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace pngkme {

namespace {

std::vector<double> sorted_cdf(const CdfFn& cdf, std::span<const double> values) {
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  for (double& v : x) v = cdf(v);
  return x;
}

}  // namespace

double ks_statistic(const CdfFn& cdf, std::span<const double> values) {
  const auto f = sorted_cdf(cdf, values);
  const double n = static_cast<double>(f.size());
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - f[i], f[i] - k / n});
  }
  return d;
}

double cvm_statistic(const CdfFn& cdf, std::span<const double> values) {
  const auto f = sorted_cdf(cdf, values);
  const double n = static_cast<double>(f.size());
  double w = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    w += d * d;
  }
  return w;
}

double ad_statistic(const CdfFn& cdf, std::span<const double> values) {
  auto f = sorted_cdf(cdf, values);
  for (double& v : f) v = std::clamp(v, 1e-12, 1.0 - 1e-12);
  const std::size_t m = f.size();
  const double n = static_cast<double>(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    s += (2.0 * static_cast<double>(i) + 1.0) *
         (std::log(f[i]) + std::log1p(-f[m - 1 - i]));
  }
  return -n - s / n;
}

double kolmogorov_sf(double x) {
  if (!(x > 0.0)) return 1.0;
  using std::numbers::pi;
  if (x < 1.0) {
    // CDF = √(2π)/x Σ exp(−(2k−1)²π²/(8x²))
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * pi * pi / (8.0 * x * x));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? 2.0 : -2.0) * t;
    if (t < 1e-300) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double cvm_sf(double w2) {
  if (!(w2 > 0.0)) return 1.0;
  // Anderson–Darling (1952) series for the limiting CDF.
  double s = 0.0;
  for (int j = 0; j < 60; ++j) {
    const double y = (4.0 * j + 1.0) * (4.0 * j + 1.0) / (16.0 * w2);
    if (y > 700.0) break;
    const double coef = std::exp(std::lgamma(j + 0.5) - std::lgamma(0.5) -
                                 std::lgamma(j + 1.0));
    s += coef * std::sqrt(4.0 * j + 1.0) * std::exp(-y) *
         std::cyl_bessel_k(0.25, y);
  }
  const double cdf = s / (std::numbers::pi * std::sqrt(w2));
  return std::clamp(1.0 - cdf, 0.0, 1.0);
}

double ad_sf(double z) {
  if (!(z > 0.0)) return 1.0;
  // Marsaglia & Marsaglia (2004) approximation to the limiting CDF.
  double cdf;
  if (z < 2.0) {
    cdf = std::exp(-1.2337141 / z) / std::sqrt(z) *
          (2.00012 +
           (0.247105 -
            (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) *
               z);
  } else {
    cdf = std::exp(-std::exp(
        1.0776 -
        (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) *
            z));
  }
  return std::clamp(1.0 - cdf, 0.0, 1.0);
}

GofStats gof_statistics(const CdfFn& cdf, std::span<const double> values) {
  return {ks_statistic(cdf, values), cvm_statistic(cdf, values),
          ad_statistic(cdf, values)};
}

GofReport gof_pvalues(const GofStats& st, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  GofReport r;
  r.ks = st.ks;
  r.cvm = st.cvm;
  r.ad = st.ad;
  r.ks_p = kolmogorov_sf((rn + 0.12 + 0.11 / rn) * st.ks);
  r.cvm_p = cvm_sf(st.cvm);
  r.ad_p = ad_sf(st.ad);
  return r;
}

GofReport gof_bootstrap(const FitResult& fitted, const Sample& s, int replicates,
                        std::uint64_t seed, const FitOptions& options) {
  if (replicates < 1) throw std::invalid_argument("bootstrap: need B >= 1");
  const ModelSpec& spec = fitted.spec;
  auto cdf_at = [&spec](const Params& p) {
    return [spec, p](double x) { return model_cdf(spec, p, x); };
  };
  const GofStats obs = gof_statistics(cdf_at(fitted.estimates), s.values());

  struct Rep {
    GofStats st;
    bool ok = false;
  };
  std::vector<Rep> reps(static_cast<std::size_t>(replicates));
  FitOptions fo = options;
  fo.nest_restarts = false;
  fo.threads = 1;
  fo.extra_starts = {fitted.estimates};
  const Rng root(seed);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < reps.size(); b = next++) {
      Rng rng = root.split(b);
      const Sample boot(model_sample(spec, fitted.estimates, rng, s.n()));
      const FitResult r = fit(spec, boot, fo);
      reps[b].ok = r.converged;
      if (r.converged) reps[b].st = gof_statistics(cdf_at(r.estimates), boot.values());
    }
  };
  const unsigned threads = std::max(
      1u, std::min<unsigned>(options.threads ? options.threads
                                             : std::thread::hardware_concurrency(),
                             static_cast<unsigned>(replicates)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  GofReport out;
  out.ks = obs.ks;
  out.cvm = obs.cvm;
  out.ad = obs.ad;
  out.method = PValueMethod::bootstrap;
  out.bootstrap_replicates = replicates;
  int ok = 0, ks = 0, cvm = 0, ad = 0;
  for (const Rep& r : reps) {
    if (!r.ok) {
      ++out.bootstrap_failures;
      continue;
    }
    ++ok;
    ks += r.st.ks >= obs.ks;
    cvm += r.st.cvm >= obs.cvm;
    ad += r.st.ad >= obs.ad;
  }
  const double denom = 1.0 + ok;
  out.ks_p = (1.0 + ks) / denom;
  out.cvm_p = (1.0 + cvm) / denom;
  out.ad_p = (1.0 + ad) / denom;
  return out;
}

std::vector<ModelSpec> default_battery() {
  std::vector<ModelSpec> out;
  for (Family f : all_families()) out.push_back(ModelSpec::of(f));
  return out;
}

std::vector<ComparisonRow> compare_models(const Sample& s,
                                          std::span<const ModelSpec> specs,
                                          const CompareOptions& options) {
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ModelSpec& spec = specs[i];
    ComparisonRow row{spec.name(), fit(spec, s, options.fit), {}};
    if (options.method == PValueMethod::bootstrap) {
      row.gof = gof_bootstrap(row.fit, s, options.bootstrap_replicates,
                              mix_seed(options.fit.seed + i), options.fit);
    } else {
      const Params p = row.fit.estimates;
      row.gof = gof_pvalues(
          gof_statistics([&](double x) { return model_cdf(spec, p, x); }, s.values()),
          s.n());
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     if (a.fit.converged != b.fit.converged) return a.fit.converged;
                     return a.fit.aic < b.fit.aic;
                   });
  return rows;
}

}  // namespace pngkme
